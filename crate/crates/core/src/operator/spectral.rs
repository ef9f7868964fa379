use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::StateVector;
use crate::params::FractionalParams;

use super::riesz_feller_symbol;

/// Angular wavenumbers `2πk/period` in FFT storage order
/// (`k = 0, 1, ..., K/2 - 1, -K/2, ..., -1`).
pub fn fft_wavenumbers(k_modes: usize, period: f64) -> Vec<f64> {
    let k = k_modes as isize;
    (0..k)
        .map(|j| {
            let signed = if j < (k + 1) / 2 { j } else { j - k };
            2.0 * PI * signed as f64 / period
        })
        .collect()
}

/// Apply `D^alpha_theta` to periodic samples `u_j = u(x_0 + j period / K)` as
/// a Fourier multiplier.
///
/// A DFT mode `e^{+iκx}` is the eigenfunction `e^{-iξx}`
/// with `ξ = -κ`, so it is scaled by `ψ(-κ)`. The Nyquist mode has no
/// conjugate partner and is scaled by `Re ψ`.
pub fn spectral_apply(u: &[f64], period: f64, params: &FractionalParams) -> StateVector {
    let k_modes = u.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(k_modes);
    let inverse = planner.plan_fft_inverse(k_modes);

    let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward.process(&mut buf);
    let kappa = fft_wavenumbers(k_modes, period);
    for (j, (c, &kap)) in buf.iter_mut().zip(&kappa).enumerate() {
        let mut mult = riesz_feller_symbol(params, -kap);
        if k_modes.is_multiple_of(2) && j == k_modes / 2 {
            mult = Complex64::new(mult.re, 0.0);
        }
        *c *= mult;
    }
    inverse.process(&mut buf);
    let scale = 1.0 / k_modes as f64;
    StateVector(buf.iter().map(|c| c.re * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    fn periodic_samples(
        k_modes: usize,
        period: f64,
        f: impl Fn(f64) -> f64,
    ) -> (Vec<f64>, Vec<f64>) {
        let x: Vec<f64> = (0..k_modes)
            .map(|j| j as f64 * period / k_modes as f64)
            .collect();
        let u = x.iter().map(|&x| f(x)).collect();
        (x, u)
    }

    #[test]
    fn cosine_is_laplacian_eigenfunction() {
        let period = 2.0 * PI;
        let k = 3.0;
        let (x, u) = periodic_samples(64, period, |x| (k * x).cos());
        let p = validate_params(2.0, 0.0).unwrap();
        let v = spectral_apply(&u, period, &p);
        for (xi, vi) in x.iter().zip(v.iter()) {
            assert!((vi + k * k * (k * xi).cos()).abs() < 1e-11);
        }
    }

    #[test]
    fn sine_scales_by_real_symbol() {
        let period = 4.0 * PI;
        let k = 2.5;
        let (x, u) = periodic_samples(128, period, |x| (k * x).sin());
        let p = validate_params(1.5, 0.0).unwrap();
        let v = spectral_apply(&u, period, &p);
        for (xi, vi) in x.iter().zip(v.iter()) {
            assert!((vi + k.powf(1.5) * (k * xi).sin()).abs() < 1e-11);
        }
    }

    #[test]
    fn skewed_mode_picks_up_phase() {
        // e^{-iξx} has eigenvalue ψ(ξ); for u = cos(kx) the real output is
        // -k^α [cos(θπ/2) cos(kx) + sin(θπ/2) sin(kx)]
        let period = 2.0 * PI;
        let k = 2.0;
        let p = validate_params(1.5, 0.4).unwrap();
        let (x, u) = periodic_samples(64, period, |x| (k * x).cos());
        let v = spectral_apply(&u, period, &p);
        let (s, c) = (0.4 * PI / 2.0).sin_cos();
        for (xi, vi) in x.iter().zip(v.iter()) {
            let expected = -k.powf(1.5) * (c * (k * xi).cos() + s * (k * xi).sin());
            assert!((vi - expected).abs() < 1e-11);
        }
    }

    #[test]
    fn gaussian_heat_limit() {
        // D^2 exp(-x^2) = (4x^2 - 2) exp(-x^2)
        let period = 40.0;
        let k_modes = 1024;
        let x: Vec<f64> = (0..k_modes)
            .map(|j| -20.0 + j as f64 * period / k_modes as f64)
            .collect();
        let u: Vec<f64> = x.iter().map(|x| (-x * x).exp()).collect();
        let p = validate_params(2.0, 0.0).unwrap();
        let v = spectral_apply(&u, period, &p);
        for (xi, vi) in x.iter().zip(v.iter()) {
            let exact = (4.0 * xi * xi - 2.0) * (-xi * xi).exp();
            assert!((vi - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn wavenumbers_in_storage_order() {
        let k = fft_wavenumbers(4, 2.0 * PI);
        assert_eq!(k, vec![0.0, 1.0, -2.0, -1.0]);
    }
}
