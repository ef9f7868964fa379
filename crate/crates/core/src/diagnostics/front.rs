use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid1D, StateVector};
use crate::reaction::BistableCubic;
use crate::timestep::SimulationResult;

/// Residuals outside this band are excluded from the decay fit: above it the
/// transient dominates, below it round-off does.
pub const DECAY_FIT_BAND: (f64, f64) = (1e-10, 1e-1);

/// Minimum coefficient of determination for a reported decay rate.
pub const DECAY_MIN_R2: f64 = 0.9;

/// Position where `u` crosses `level`, by linear interpolation between the
/// bracketing nodes. With several crossings the one nearest `x = 0` wins.
pub fn front_position(u: &[f64], grid: &Grid1D, level: f64) -> Result<f64> {
    if u.len() != grid.n() {
        return Err(Error::DimensionMismatch {
            expected: grid.n(),
            got: u.len(),
        });
    }
    let mut best: Option<f64> = None;
    let mut consider = |x: f64| {
        if best.is_none_or(|b| x.abs() < b.abs()) {
            best = Some(x);
        }
    };
    for k in 0..u.len() {
        if u[k] == level {
            consider(grid.x(k));
            continue;
        }
        if k + 1 < u.len() {
            let (lo, hi) = (u[k] - level, u[k + 1] - level);
            if lo * hi < 0.0 {
                let frac = lo / (lo - hi);
                consider(grid.x(k) + frac * grid.h());
            }
        }
    }
    best.ok_or(Error::NoCrossing { level })
}

/// Ordinary least-squares line; returns `(slope, intercept, rms residual, R^2)`.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    (slope, intercept, (ss_res / n).sqrt(), r2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedEstimate {
    pub speed: f64,
    pub intercept: f64,
    /// rms deviation of the front track from the fitted line
    pub residual: f64,
    pub front_track: Vec<(f64, f64)>,
}

/// Fit `x_front(t)` over snapshots in the last `fit_window` fraction of the run.
pub fn estimate_speed_from_snapshots(
    times: &[f64],
    profiles: &[&[f64]],
    grid: &Grid1D,
    level: f64,
    fit_window: f64,
) -> Result<SpeedEstimate> {
    if !(fit_window > 0.0 && fit_window <= 1.0) {
        return Err(Error::Config(format!(
            "fit window must lie in (0, 1], got {fit_window}"
        )));
    }
    if times.len() != profiles.len() || times.is_empty() {
        return Err(Error::InsufficientData("no snapshots".into()));
    }
    let (t0, t1) = (times[0], times[times.len() - 1]);
    let start = t1 - fit_window * (t1 - t0);
    let mut front_track = Vec::new();
    for (&t, u) in times.iter().zip(profiles) {
        if t >= start {
            front_track.push((t, front_position(u, grid, level)?));
        }
    }
    if front_track.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "speed fit needs at least 4 snapshots in the window, found {}",
            front_track.len()
        )));
    }
    let (ts, xs): (Vec<f64>, Vec<f64>) = front_track.iter().copied().unzip();
    let (speed, intercept, residual, _) = linear_fit(&ts, &xs);
    Ok(SpeedEstimate {
        speed,
        intercept,
        residual,
        front_track,
    })
}

/// Speed of the front at `level` (the threshold `a` when `None`), fitted over
/// the last `fit_window` fraction of the run.
pub fn estimate_speed(
    result: &SimulationResult<BistableCubic>,
    level: Option<f64>,
    fit_window: f64,
) -> Result<SpeedEstimate> {
    let times = result.times();
    let profiles: Vec<&[f64]> = result.snapshots.iter().map(|s| &s.u[..]).collect();
    estimate_speed_from_snapshots(
        &times,
        &profiles,
        &result.grid,
        level.unwrap_or(result.nl.a()),
        fit_window,
    )
}

/// `u` at fractional index `p`, extended by its end values.
fn interp_index(u: &[f64], p: f64) -> f64 {
    let last = (u.len() - 1) as f64;
    if p <= 0.0 {
        return u[0];
    }
    if p >= last {
        return u[u.len() - 1];
    }
    let k = p.floor() as usize;
    let frac = p - k as f64;
    if frac == 0.0 {
        u[k]
    } else {
        u[k] + frac * (u[k + 1] - u[k])
    }
}

fn shifted_distance(u1: &[f64], u2: &[f64], shift_cells: f64) -> f64 {
    u1.iter()
        .enumerate()
        .map(|(k, v)| (interp_index(u2, k as f64 + shift_cells) - v).abs())
        .fold(0.0, f64::max)
}

/// `min_s max_x |u2(x + s) - u1(x)|` over `|s| <= b/2`, with `u2` linearly
/// interpolated between nodes. Returns the residual and the minimizing shift.
pub fn shift_matched_residual(u1: &[f64], u2: &[f64], grid: &Grid1D) -> Result<(f64, f64)> {
    for u in [u1, u2] {
        if u.len() != grid.n() {
            return Err(Error::DimensionMismatch {
                expected: grid.n(),
                got: u.len(),
            });
        }
    }
    let h = grid.h();
    let reach = (grid.m() / 2) as isize;
    let (mut best_j, mut best) = (0isize, shifted_distance(u1, u2, 0.0));
    for j in -reach..=reach {
        let d = shifted_distance(u1, u2, j as f64);
        if d < best {
            best = d;
            best_j = j;
        }
    }
    if best == 0.0 {
        return Ok((0.0, best_j as f64 * h));
    }

    // golden-section refinement within one cell of the best node shift
    let f = |cells: f64| shifted_distance(u1, u2, cells);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_j as f64 - 1.0, best_j as f64 + 1.0);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-10 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    if fm < best {
        Ok((fm, mid * h))
    } else {
        Ok((best, best_j as f64 * h))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub times: Vec<f64>,
    pub shift_matched_residual: Vec<f64>,
    pub shifts: Vec<f64>,
    /// Empirical `kappa`, present only when the fit is good enough.
    pub decay_rate: Option<f64>,
    /// `ln K` of the fit `residual ~ K exp(-kappa t)`.
    pub log_intercept: f64,
    pub r_squared: f64,
    pub fit_points: usize,
}

/// Exponential decay of the distance (modulo translation) between each
/// snapshot and `reference`.
pub fn estimate_decay_rate<R>(
    result: &SimulationResult<R>,
    reference: &[f64],
) -> Result<ConvergenceReport> {
    if result.snapshots.len() < 6 {
        return Err(Error::InsufficientData(format!(
            "decay fit needs at least 6 snapshots, found {}",
            result.snapshots.len()
        )));
    }
    let mut times = Vec::new();
    let mut residuals = Vec::new();
    let mut shifts = Vec::new();
    for s in &result.snapshots {
        let (r, shift) = shift_matched_residual(reference, &s.u, &result.grid)?;
        times.push(s.time);
        residuals.push(r);
        shifts.push(shift);
    }
    let (lo, hi) = DECAY_FIT_BAND;
    let (ft, fl): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(&residuals)
        .filter(|(_, &r)| (lo..=hi).contains(&r))
        .map(|(&t, &r)| (t, r.ln()))
        .unzip();
    if ft.len() < 3 {
        return Err(Error::InsufficientDecay);
    }
    let (slope, intercept, _, r2) = linear_fit(&ft, &fl);
    let decay_rate = (r2 >= DECAY_MIN_R2 && slope < 0.0).then_some(-slope);
    Ok(ConvergenceReport {
        times,
        shift_matched_residual: residuals,
        shifts,
        decay_rate,
        log_intercept: intercept,
        r_squared: r2,
        fit_points: ft.len(),
    })
}

/// Largest decrease between neighbouring nodes (0 for a nondecreasing profile).
pub fn monotonicity_violation(u: &[f64]) -> f64 {
    u.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
}

/// Translate a profile by whole cells, padding with the end values.
pub fn translate_cells(u: &StateVector, cells: isize) -> StateVector {
    let n = u.len() as isize;
    StateVector(
        (0..n)
            .map(|k| u[(k - cells).clamp(0, n - 1) as usize])
            .collect(),
    )
}
