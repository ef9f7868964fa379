use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const THETA_SLACK: f64 = 1e-12;

/// Order `alpha` and skewness `theta` of a Riesz-Feller operator, restricted
/// to the traveling-wave regime `1 < alpha <= 2`, `|theta| <= min(alpha, 2 - alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalParams {
    alpha: f64,
    theta: f64,
}

impl FractionalParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                admissible: "alpha must lie in (1, 2]".into(),
            });
        }
        let bound = alpha.min(2.0 - alpha);
        // slack so that e.g. theta = 0.2 at alpha = 1.8 is admitted despite 2 - 1.8 < 0.2 in binary
        if !(theta.abs() <= bound + THETA_SLACK) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                admissible: format!("|theta| must be <= min(alpha, 2 - alpha) = {bound}"),
            });
        }
        Ok(Self { alpha, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// True at the classical endpoint `alpha = 2`, where the operator is `d^2/dx^2`.
    pub fn is_classical(&self) -> bool {
        self.alpha == 2.0
    }

    /// The spatially reflected operator: `x -> -x` maps `D^alpha_theta` to `D^alpha_{-theta}`.
    pub fn reflected(&self) -> Self {
        Self {
            alpha: self.alpha,
            theta: -self.theta,
        }
    }
}

/// Free-function form of [`FractionalParams::new`].
pub fn validate_params(alpha: f64, theta: f64) -> Result<FractionalParams> {
    FractionalParams::new(alpha, theta)
}
