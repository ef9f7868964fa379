use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::operator::{fft_wavenumbers, riesz_feller_symbol};
use crate::params::FractionalParams;
use crate::reaction::Reaction;

/// Periodic Fourier IMEX stepper: per mode
/// `û ← (û + dt f̂(u)) / (1 − dt ψ)`, with `f` evaluated in physical space.
///
/// Modes are stored in FFT order for samples `u_j`, `j = 0..K`, spaced
/// `period / K`; the multiplier of mode `e^{+iκx}` is `ψ(−κ)` (see
/// [`crate::operator::spectral_apply`]).
pub struct SpectralImex {
    k_modes: usize,
    dt: f64,
    // 1 / (1 - dt psi)
    resolvent: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl SpectralImex {
    pub fn new(k_modes: usize, period: f64, dt: f64, params: &FractionalParams) -> Self {
        let mut planner = FftPlanner::new();
        let resolvent = fft_wavenumbers(k_modes, period)
            .iter()
            .enumerate()
            .map(|(j, &kap)| {
                let mut psi = riesz_feller_symbol(params, -kap);
                if k_modes.is_multiple_of(2) && j == k_modes / 2 {
                    psi = Complex64::new(psi.re, 0.0);
                }
                1.0 / (1.0 - dt * psi)
            })
            .collect();
        Self {
            k_modes,
            dt,
            resolvent,
            forward: planner.plan_fft_forward(k_modes),
            inverse: planner.plan_fft_inverse(k_modes),
            scratch: vec![Complex64::default(); k_modes],
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn to_modes(&self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    pub fn to_physical(&self, modes: &[Complex64]) -> Vec<f64> {
        let mut buf = modes.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.k_modes as f64;
        buf.iter().map(|c| c.re * scale).collect()
    }

    /// Advance the modes by one step. `None` means `f ≡ 0` and skips the transforms.
    pub fn step(&mut self, modes: &mut [Complex64], nl: Option<&dyn Reaction>) {
        if let Some(nl) = nl {
            self.scratch.copy_from_slice(modes);
            self.inverse.process(&mut self.scratch);
            let scale = 1.0 / self.k_modes as f64;
            for c in self.scratch.iter_mut() {
                *c = Complex64::new(nl.f(c.re * scale), 0.0);
            }
            self.forward.process(&mut self.scratch);
            for ((m, f), r) in modes.iter_mut().zip(&self.scratch).zip(&self.resolvent) {
                *m = (*m + self.dt * f) * r;
            }
        } else {
            for (m, r) in modes.iter_mut().zip(&self.resolvent) {
                *m *= r;
            }
        }
    }
}

/// One spectral IMEX step on FFT-ordered `modes`.
pub fn step_spectral_imex(
    modes: &mut [Complex64],
    dt: f64,
    params: &FractionalParams,
    period: f64,
    nl: Option<&dyn Reaction>,
) {
    SpectralImex::new(modes.len(), period, dt, params).step(modes, nl);
}
