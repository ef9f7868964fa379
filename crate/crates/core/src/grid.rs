use std::fmt;
use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform mesh `-b = x_1 < ... < x_n = b` with odd `n`, so that the middle
/// node sits exactly at the origin.
///
/// The quadrature sub-mesh for the nonlocal integrals reuses the right half
/// of this mesh: `xi_j = j h` for `j = 1..=M` with `M = (n - 1) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    b: f64,
    n: usize,
    h: f64,
}

impl Grid1D {
    pub fn new(b: f64, n: usize) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::OutOfRange {
                name: "b",
                value: b,
                admissible: "half-width must be positive and finite".into(),
            });
        }
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::OutOfRange {
                name: "n",
                value: n as f64,
                admissible: "node count must be odd and >= 3".into(),
            });
        }
        let m = (n - 1) / 2;
        Ok(Self {
            b,
            n,
            h: b / m as f64,
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of quadrature nodes, `(n - 1) / 2`.
    pub fn m(&self) -> usize {
        (self.n - 1) / 2
    }

    /// Zero-based index of the node at `x = 0`.
    pub fn center(&self) -> usize {
        self.m()
    }

    /// Coordinate of (zero-based, possibly off-grid) index `k`.
    pub fn x_at(&self, k: isize) -> f64 {
        let m = self.m() as isize;
        if k == 0 {
            -self.b
        } else if k == 2 * m {
            self.b
        } else {
            (k - m) as f64 * self.h
        }
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_at(k as isize)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.x(k)).collect()
    }

    /// Sample a function at the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> StateVector {
        StateVector((0..self.n).map(|k| f(self.x(k))).collect())
    }
}

/// Values of `u` at the grid nodes at one time instant.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateVector(pub Vec<f64>);

impl StateVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub(crate) fn check_len(&self, grid: &Grid1D) -> Result<()> {
        if self.0.len() != grid.n() {
            return Err(Error::DimensionMismatch {
                expected: grid.n(),
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

impl From<Vec<f64>> for StateVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl Deref for StateVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for StateVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// How values at indices outside `1..=n` are resolved.
#[derive(Clone, Default)]
pub enum GhostPolicy {
    /// Clamp to the nearest boundary value: `u_k = u_n` for `k > n`, `u_k = u_1` for `k < 1`.
    #[default]
    Projection,
    /// Evaluate a closed form at off-grid nodes (free-space testing).
    ExactFunction(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl GhostPolicy {
    pub fn exact(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        GhostPolicy::ExactFunction(Arc::new(f))
    }

    /// Value at zero-based index `k`, which may lie outside `0..n`.
    #[inline]
    pub fn value(&self, u: &[f64], grid: &Grid1D, k: isize) -> f64 {
        let n = u.len() as isize;
        if (0..n).contains(&k) {
            return u[k as usize];
        }
        match self {
            GhostPolicy::Projection => {
                if k < 0 {
                    u[0]
                } else {
                    u[(n - 1) as usize]
                }
            }
            GhostPolicy::ExactFunction(f) => f(grid.x_at(k)),
        }
    }
}

impl fmt::Debug for GhostPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhostPolicy::Projection => write!(f, "Projection"),
            GhostPolicy::ExactFunction(_) => write!(f, "ExactFunction(..)"),
        }
    }
}
