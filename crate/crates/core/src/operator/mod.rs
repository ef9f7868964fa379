//! Discretizations of the Riesz-Feller operator `D^alpha_theta`.
//!
//! The primary backend is [`QuadratureOperator`]: the regularized integral
//! representation
//!
//! ```text
//! D u(x) = c1 ∫_0^∞ [u(x+ξ) - u(x) - ξ u'(x)] ξ^(-1-α) dξ
//!        + c2 ∫_0^∞ [u(x-ξ) - u(x) + ξ u'(x)] ξ^(-1-α) dξ
//! ```
//!
//! truncated to `[h, b]`, evaluated with the trapezoidal rule on the right
//! half of the spatial mesh, and closed with projection ghosts. The other
//! backends (Grünwald-Letnikov, Fourier multiplier, second difference) exist
//! as cross-checks and for the `alpha = 2` endpoint.

mod classical;
mod grunwald;
mod matrix;
mod quadrature;
mod spectral;

pub use classical::classical_laplacian_apply;
pub use grunwald::{grunwald_letnikov_apply, grunwald_letnikov_weighted_apply, grunwald_weights};
pub use matrix::{assemble_operator_matrix, OperatorMatrix};
pub use quadrature::{
    apply_riesz_feller, quadrature_coefficients, quadrature_nodes_weights, QuadratureOperator,
    QuadratureOptions, Scheme,
};
pub use spectral::{fft_wavenumbers, spectral_apply};

use num_complex::Complex64;

use crate::params::FractionalParams;

/// Fourier symbol `psi(xi) = -|xi|^alpha exp(i sgn(xi) theta pi / 2)`.
///
/// Convention: `F[f](xi) = ∫ e^{+i xi x} f(x) dx`, so `e^{-i xi x}` is an
/// eigenfunction of the operator with eigenvalue `psi(xi)`.
pub fn riesz_feller_symbol(params: &FractionalParams, xi: f64) -> Complex64 {
    if xi == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let phase = xi.signum() * params.theta() * std::f64::consts::FRAC_PI_2;
    -xi.abs().powf(params.alpha()) * Complex64::from_polar(1.0, phase)
}
