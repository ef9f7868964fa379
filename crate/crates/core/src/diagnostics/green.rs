use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{fft_wavenumbers, quadrature_coefficients, riesz_feller_symbol};
use crate::params::FractionalParams;
use crate::special::gamma;

/// Largest admissible density at the window edge, relative to the peak.
pub const BOUNDARY_DENSITY_RATIO: f64 = 1e-6;

/// The kernel `G(x, t) = F^{-1}[exp(t psi)](x)` sampled on
/// `x_j = -window/2 + j dx`, `j = 0..k_modes`, so `x = 0` sits at index `k_modes/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenFunction {
    pub t: f64,
    pub window: f64,
    pub dx: f64,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

impl GreenFunction {
    /// Trapezoid mass (periodic, so every node has weight `dx`).
    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.dx
    }

    pub fn min(&self) -> f64 {
        self.density.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn peak(&self) -> f64 {
        self.density
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Edge density relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let edge = self.density[0]
            .abs()
            .max(self.density[self.density.len() - 1].abs());
        edge / self.peak()
    }

    /// Circular convolution `dx sum_i self(x_i) other(x_j - x_i)`, evaluated
    /// directly in physical space.
    pub fn convolve(&self, other: &GreenFunction) -> Result<Vec<f64>> {
        let k = self.density.len();
        if other.density.len() != k || other.window != self.window {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: other.density.len(),
            });
        }
        let half = k / 2;
        let (f, g) = (&self.density, &other.density);
        Ok((0..k)
            .into_par_iter()
            .map(|j| {
                let shift = j + half;
                let mut acc = 0.0;
                for (i, fi) in f.iter().enumerate() {
                    acc += fi * g[(shift + k - i) % k];
                }
                acc * self.dx
            })
            .collect())
    }
}

/// Sample the kernel by discrete Fourier inversion on a periodic window.
pub fn green_function(
    params: &FractionalParams,
    t: f64,
    window: f64,
    k_modes: usize,
) -> Result<GreenFunction> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            admissible: "time must be positive".into(),
        });
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::OutOfRange {
            name: "window",
            value: window,
            admissible: "window must be positive".into(),
        });
    }
    if k_modes < 4 || !k_modes.is_multiple_of(2) {
        return Err(Error::OutOfRange {
            name: "k_modes",
            value: k_modes as f64,
            admissible: "mode count must be even and >= 4".into(),
        });
    }
    let kappa = fft_wavenumbers(k_modes, window);
    let nyquist = k_modes / 2;
    let mut spec: Vec<Complex64> = kappa
        .iter()
        .enumerate()
        .map(|(k, &q)| {
            let psi = riesz_feller_symbol(params, -q);
            let psi = if k == nyquist {
                Complex64::new(psi.re, 0.0)
            } else {
                psi
            };
            // (-1)^k moves the origin from x_0 = -window/2 to the centre
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (t * psi).exp() * sign
        })
        .collect();
    FftPlanner::new()
        .plan_fft_inverse(k_modes)
        .process(&mut spec);
    let dx = window / k_modes as f64;
    let density: Vec<f64> = spec.iter().map(|c| c.re / window).collect();
    if density.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("green function"));
    }
    let g = GreenFunction {
        t,
        window,
        dx,
        x: (0..k_modes)
            .map(|j| -window / 2.0 + j as f64 * dx)
            .collect(),
        density,
    };
    let ratio = g.boundary_ratio();
    if ratio > BOUNDARY_DENSITY_RATIO {
        return Err(Error::WindowTooSmall { ratio });
    }
    Ok(g)
}

/// A window and mode count for which every time in `times` passes the
/// boundary guard and has `exp(t psi)` resolved to round-off at Nyquist.
///
/// The window follows the algebraic tail `G ~ t c |x|^(-1-alpha)`; the mesh
/// width follows the smallest time.
pub fn auto_resolution(params: &FractionalParams, times: &[f64]) -> Result<(f64, usize)> {
    let (t_min, t_max) = times.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &t| {
        (lo.min(t), hi.max(t))
    });
    if !(t_min > 0.0 && t_max.is_finite()) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t_min,
            admissible: "times must be positive".into(),
        });
    }
    let alpha = params.alpha();
    let half = if params.is_classical() {
        (4.0 * t_max * 46.0).sqrt()
    } else {
        let (c1, c2) = quadrature_coefficients(params)?;
        let peak = gamma(1.0 + 1.0 / alpha) / (std::f64::consts::PI * t_max.powf(1.0 / alpha));
        let core = 20.0 * t_max.powf(1.0 / alpha);
        let tail =
            (8.0 * t_max * c1.max(c2) / (BOUNDARY_DENSITY_RATIO * peak)).powf(1.0 / (1.0 + alpha));
        tail.max(core)
    };
    let window = 2.0 * half;
    let xi_max = (40.0 / t_min).powf(1.0 / alpha);
    let dx = (std::f64::consts::PI / xi_max).min(t_min.powf(1.0 / alpha) / 8.0);
    let k_modes = ((window / dx).ceil() as usize).next_power_of_two().max(256);
    Ok((window, k_modes))
}

/// [`green_function`] on an automatically chosen window, widened until the
/// boundary guard passes.
pub fn green_function_auto(params: &FractionalParams, t: f64) -> Result<GreenFunction> {
    let (mut window, mut k_modes) = auto_resolution(params, &[t])?;
    for _ in 0..4 {
        match green_function(params, t, window, k_modes) {
            Err(Error::WindowTooSmall { .. }) => {
                window *= 2.0;
                k_modes *= 2;
            }
            other => return other,
        }
    }
    green_function(params, t, window, k_modes)
}
