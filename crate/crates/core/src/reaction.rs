use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reaction term `f` with derivative, assumed bistable: zeros at the two
/// stable states and one unstable threshold in between.
pub trait Reaction: Send + Sync {
    fn f(&self, u: f64) -> f64;
    fn df(&self, u: f64) -> f64;
}

/// `f(u) = u (1 - u) (u - a)` with stable states 0 and 1 and threshold `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BistableCubic {
    a: f64,
}

impl BistableCubic {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                admissible: "threshold must lie in (0, 1)".into(),
            });
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `F(1) - F(0) = ∫_0^1 f = (1 - 2a) / 12`. Zero means balanced; a
    /// positive gap makes 0 the metastable state, a negative one makes 1 metastable.
    pub fn potential_gap(&self) -> f64 {
        (1.0 - 2.0 * self.a) / 12.0
    }

    /// The cubic obtained under `u -> 1 - u`.
    pub fn reflected(&self) -> Self {
        Self { a: 1.0 - self.a }
    }
}

impl Reaction for BistableCubic {
    #[inline]
    fn f(&self, u: f64) -> f64 {
        u * (1.0 - u) * (u - self.a)
    }

    #[inline]
    fn df(&self, u: f64) -> f64 {
        -3.0 * u * u + 2.0 * (1.0 + self.a) * u - self.a
    }
}

pub fn f_eval(nl: &BistableCubic, u: f64) -> f64 {
    nl.f(u)
}

pub fn f_prime(nl: &BistableCubic, u: f64) -> f64 {
    nl.df(u)
}

pub fn potential_gap(nl: &BistableCubic) -> f64 {
    nl.potential_gap()
}
