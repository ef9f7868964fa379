//! Bistable reaction-diffusion with asymmetric Riesz-Feller diffusion:
//!
//! ```text
//! ∂u/∂t = D^α_θ u + f(u),   1 < α ≤ 2,  |θ| ≤ min(α, 2 − α)
//! ```
//!
//! The spatial operator is discretized by trapezoidal quadrature of its
//! integral representation with projection boundary conditions
//! ([`operator::QuadratureOperator`]), advanced in time by the method of lines
//! ([`timestep`]), and the resulting traveling fronts are measured by
//! [`diagnostics`].

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod io;
pub mod operator;
pub mod params;
pub mod reaction;
pub mod selftest;
pub mod special;
pub mod timestep;

pub use error::{Error, Result};
pub use grid::{GhostPolicy, Grid1D, StateVector};
pub use operator::{OperatorMatrix, QuadratureOperator, QuadratureOptions, Scheme};
pub use params::{validate_params, FractionalParams};
pub use reaction::{BistableCubic, Reaction};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
