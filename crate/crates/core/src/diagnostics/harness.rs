use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{Grid1D, StateVector};
use crate::operator::QuadratureOptions;
use crate::params::FractionalParams;
use crate::reaction::Reaction;
use crate::timestep::{integrate, SimulationResult, SnapshotSchedule, StepperConfig};

/// Gap below which an ordered pair is counted as crossed.
pub const ORDER_TOLERANCE: f64 = 1e-10;

/// Slack for the invariant region `[0, 1]`.
pub const BOUNDS_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonOutcome {
    pub ordered: bool,
    /// `min over nodes and snapshots of (high - low)`
    pub min_gap: f64,
}

/// Evolve two ordered initial conditions with the same stepper and check the
/// order survives at every snapshot.
#[allow(clippy::too_many_arguments)]
pub fn comparison_test<R: Reaction + Clone>(
    ic_low: &StateVector,
    ic_high: &StateVector,
    schedule: &SnapshotSchedule,
    cfg: &StepperConfig,
    grid: &Grid1D,
    params: &FractionalParams,
    options: QuadratureOptions,
    nl: &R,
) -> Result<ComparisonOutcome> {
    let low = integrate(ic_low, schedule, cfg, grid, params, options, nl)?;
    let high = integrate(ic_high, schedule, cfg, grid, params, options, nl)?;
    let min_gap = low
        .snapshots
        .iter()
        .zip(&high.snapshots)
        .flat_map(|(l, h)| l.u.iter().zip(h.u.iter()).map(|(a, b)| b - a))
        .fold(f64::INFINITY, f64::min);
    Ok(ComparisonOutcome {
        ordered: min_gap >= -ORDER_TOLERANCE,
        min_gap,
    })
}

fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

/// Uniform cubic B-spline basis function supported on `[-2, 2]`.
fn cubic_bspline(s: f64) -> f64 {
    let a = s.abs();
    if a >= 2.0 {
        0.0
    } else if a >= 1.0 {
        (2.0 - a).powi(3) / 6.0
    } else {
        (4.0 - 6.0 * a * a + 3.0 * a.powi(3)) / 6.0
    }
}

/// A random pair `low <= high`: `low` is a smoothstep ramp from 0 to 1 with
/// random centre and width, `high` adds a nonnegative cubic spline bump.
pub fn random_ordered_pair(grid: &Grid1D, rng: &mut impl Rng) -> (StateVector, StateVector) {
    let center = rng.random_range(-5.0..5.0);
    let width = rng.random_range(2.0..8.0);
    let low = grid.sample(|x| smoothstep((x - center) / width + 0.5));

    let knots = 12;
    let span = grid.b() / 2.0;
    let spacing = 2.0 * span / knots as f64;
    let coeffs: Vec<f64> = (0..=knots).map(|_| rng.random_range(0.0..0.1)).collect();
    let bump = |x: f64| -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * cubic_bspline((x + span - j as f64 * spacing) / spacing))
            .sum()
    };
    let high = StateVector(
        low.iter()
            .zip(grid.nodes())
            .map(|(l, x)| l + bump(x))
            .collect(),
    );
    (low, high)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub min_u: f64,
    pub max_u: f64,
    pub within: bool,
}

/// Extremes over every snapshot, checked against `[0, 1]`.
pub fn bounds_check<R>(result: &SimulationResult<R>) -> BoundsReport {
    let (min_u, max_u) = result
        .snapshots
        .iter()
        .flat_map(|s| s.u.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    BoundsReport {
        min_u,
        max_u,
        within: min_u >= -BOUNDS_TOLERANCE && max_u <= 1.0 + BOUNDS_TOLERANCE,
    }
}
