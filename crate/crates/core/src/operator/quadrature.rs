use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GhostPolicy, Grid1D, StateVector};
use crate::params::FractionalParams;
use crate::special::{gamma, zeta};

/// Which variant of the trapezoidal quadrature to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Plain trapezoid on `[h, b]`, forward difference for `u'` in both
    /// integrands, singular cell `[0, h)` dropped. Its consistency error is
    /// `O(h^(2 - alpha))`.
    Trapezoid,
    /// `Trapezoid` plus a second-difference term that restores the leading
    /// order of the dropped singular cell and of the trapezoid endpoint
    /// error, and turns the forward difference into a central one.
    /// Consistency error `O(h^(3 - alpha))`; exactly reflection-symmetric.
    #[default]
    Corrected,
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "trapezoid" => Ok(Scheme::Trapezoid),
            "corrected" => Ok(Scheme::Corrected),
            other => Err(format!(
                "unknown scheme '{other}' (expected trapezoid|corrected)"
            )),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::Trapezoid => write!(f, "trapezoid"),
            Scheme::Corrected => write!(f, "corrected"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub scheme: Scheme,
    /// Add the closed-form contribution of `xi > b`, with `u` frozen at its
    /// last sampled value `u(x_n ± b)` beyond the quadrature range.
    pub tail_correction: bool,
}

impl QuadratureOptions {
    pub fn trapezoid() -> Self {
        Self {
            scheme: Scheme::Trapezoid,
            tail_correction: false,
        }
    }

    pub fn corrected() -> Self {
        Self {
            scheme: Scheme::Corrected,
            tail_correction: false,
        }
    }

    pub fn with_tail_correction(mut self, on: bool) -> Self {
        self.tail_correction = on;
        self
    }
}

/// `c1 = Γ(1+α) sin((α+θ)π/2)/π`, `c2 = Γ(1+α) sin((α−θ)π/2)/π`.
///
/// Both vanish at `alpha = 2`, which is reported as [`Error::Degenerate`].
pub fn quadrature_coefficients(params: &FractionalParams) -> Result<(f64, f64)> {
    let (alpha, theta) = (params.alpha(), params.theta());
    if params.is_classical() {
        return Err(Error::Degenerate);
    }
    let g = gamma(1.0 + alpha);
    // sin(pi) evaluates to +1.2e-16; clamp keeps the boundary of the
    // admissible region nonnegative when alpha + theta rounds above 2
    let c1 = (g * ((alpha + theta) * std::f64::consts::FRAC_PI_2).sin() / PI).max(0.0);
    let c2 = (g * ((alpha - theta) * std::f64::consts::FRAC_PI_2).sin() / PI).max(0.0);
    Ok((c1, c2))
}

/// Trapezoidal nodes `xi_j = j h` (`j = 1..=M`, `xi_M = b`) and weights
/// `{h/2, h, ..., h, h/2}`.
pub fn quadrature_nodes_weights(grid: &Grid1D) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = grid.m();
    if m < 2 {
        return Err(Error::GridTooSmall(format!(
            "need at least 2 quadrature nodes, n = {} gives M = {m}",
            grid.n()
        )));
    }
    let h = grid.h();
    let nodes: Vec<f64> = (1..=m)
        .map(|j| if j == m { grid.b() } else { j as f64 * h })
        .collect();
    let mut weights = vec![h; m];
    weights[0] = 0.5 * h;
    weights[m - 1] = 0.5 * h;
    Ok((nodes, weights))
}

/// Precomputed quadrature discretization of `D^alpha_theta` for one grid.
#[derive(Debug, Clone)]
pub struct QuadratureOperator {
    grid: Grid1D,
    params: FractionalParams,
    options: QuadratureOptions,
    c1: f64,
    c2: f64,
    weights: Vec<f64>,
    // xi_m^(-1-alpha)
    jump: Vec<f64>,
    // xi_m^(-alpha) / h
    drift: Vec<f64>,
    // coefficient of (u_{n+1} - 2 u_n + u_{n-1}); zero for the plain trapezoid scheme
    second_difference: f64,
    tail_jump: f64,
    tail_drift: f64,
}

impl QuadratureOperator {
    pub fn new(grid: Grid1D, params: FractionalParams, options: QuadratureOptions) -> Result<Self> {
        let (c1, c2) = quadrature_coefficients(&params)?;
        let (nodes, weights) = quadrature_nodes_weights(&grid)?;
        let alpha = params.alpha();
        let h = grid.h();
        let jump: Vec<f64> = nodes.iter().map(|xi| xi.powf(-1.0 - alpha)).collect();
        let drift: Vec<f64> = nodes.iter().map(|xi| xi.powf(-alpha) / h).collect();

        let second_difference = match options.scheme {
            Scheme::Trapezoid => 0.0,
            Scheme::Corrected => {
                // trapezoid on [h, b] of (u''/2) xi^(1-alpha) misses
                // (zeta(alpha-1) - 1/2) h^(2-alpha) u''/2 per side
                let singular = -(c1 + c2) * (zeta(alpha - 1.0) - 0.5) * h.powf(-alpha) / 2.0;
                // forward difference overshoots u' by h u''/2
                let total_drift: f64 = weights.iter().zip(&drift).map(|(w, d)| w * d).sum();
                singular - (c2 - c1) * total_drift / 2.0
            }
        };

        let b = grid.b();
        Ok(Self {
            grid,
            params,
            options,
            c1,
            c2,
            weights,
            jump,
            drift,
            second_difference,
            tail_jump: b.powf(-alpha) / alpha,
            tail_drift: b.powf(1.0 - alpha) / (alpha - 1.0),
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn params(&self) -> &FractionalParams {
        &self.params
    }

    pub fn options(&self) -> QuadratureOptions {
        self.options
    }

    pub fn coefficients(&self) -> (f64, f64) {
        (self.c1, self.c2)
    }

    /// Matrix-free application, one output row per node.
    pub fn apply(&self, u: &StateVector, ghosts: &GhostPolicy) -> Result<StateVector> {
        u.check_len(&self.grid)?;
        if !u.is_finite() {
            return Err(Error::NonFinite("operator input"));
        }
        let out: Vec<f64> = (0..self.grid.n())
            .into_par_iter()
            .map(|i| self.apply_row(u, ghosts, i as isize))
            .collect();
        let out = StateVector(out);
        if !out.is_finite() {
            return Err(Error::NonFinite("operator output"));
        }
        Ok(out)
    }

    fn apply_row(&self, u: &[f64], ghosts: &GhostPolicy, i: isize) -> f64 {
        let g = &self.grid;
        let at = |k: isize| ghosts.value(u, g, k);
        let ui = u[i as usize];
        let forward = at(i + 1) - ui;
        let (c1, c2) = (self.c1, self.c2);

        let mut acc = 0.0;
        for (idx, w) in self.weights.iter().enumerate() {
            let m = idx as isize + 1;
            let g1 = (at(i + m) - ui) * self.jump[idx] - forward * self.drift[idx];
            let g2 = (at(i - m) - ui) * self.jump[idx] + forward * self.drift[idx];
            acc += w * (c1 * g1 + c2 * g2);
        }

        let backward = ui - at(i - 1);
        if self.second_difference != 0.0 {
            acc += self.second_difference * (forward - backward);
        }

        if self.options.tail_correction {
            let h = g.h();
            let slope = match self.options.scheme {
                Scheme::Trapezoid => forward / h,
                Scheme::Corrected => (forward + backward) / (2.0 * h),
            };
            let m = g.m() as isize;
            let far_right = at(i + m);
            let far_left = at(i - m);
            acc += c1 * ((far_right - ui) * self.tail_jump - slope * self.tail_drift)
                + c2 * ((far_left - ui) * self.tail_jump + slope * self.tail_drift);
        }
        acc
    }

    /// Coefficients of row `i` with projection ghosts folded in, accumulated
    /// into `row` (length `n`, assumed zeroed).
    pub(crate) fn row_coefficients(&self, i: usize, row: &mut [f64]) {
        let n = self.grid.n() as isize;
        let clamp = |k: isize| k.clamp(0, n - 1) as usize;
        let i_s = i as isize;
        let (c1, c2) = (self.c1, self.c2);

        // the forward difference u_{i+1} - u_i appears in every drift term
        let mut forward = 0.0;
        for (idx, w) in self.weights.iter().enumerate() {
            let m = idx as isize + 1;
            let k = w * self.jump[idx];
            row[clamp(i_s + m)] += c1 * k;
            row[clamp(i_s - m)] += c2 * k;
            row[i] -= (c1 + c2) * k;
            forward += w * (c2 - c1) * self.drift[idx];
        }
        row[clamp(i_s + 1)] += forward;
        row[i] -= forward;

        let s = self.second_difference;
        if s != 0.0 {
            row[clamp(i_s + 1)] += s;
            row[clamp(i_s - 1)] += s;
            row[i] -= 2.0 * s;
        }

        if self.options.tail_correction {
            let h = self.grid.h();
            let m = self.grid.m() as isize;
            row[clamp(i_s + m)] += c1 * self.tail_jump;
            row[clamp(i_s - m)] += c2 * self.tail_jump;
            row[i] -= (c1 + c2) * self.tail_jump;
            let d = (c2 - c1) * self.tail_drift;
            match self.options.scheme {
                Scheme::Trapezoid => {
                    row[clamp(i_s + 1)] += d / h;
                    row[i] -= d / h;
                }
                Scheme::Corrected => {
                    row[clamp(i_s + 1)] += d / (2.0 * h);
                    row[clamp(i_s - 1)] -= d / (2.0 * h);
                }
            }
        }
    }
}

/// One application of the quadrature discretization.
pub fn apply_riesz_feller(
    u: &StateVector,
    grid: &Grid1D,
    params: &FractionalParams,
    ghosts: &GhostPolicy,
    options: QuadratureOptions,
) -> Result<StateVector> {
    QuadratureOperator::new(*grid, *params, options)?.apply(u, ghosts)
}
