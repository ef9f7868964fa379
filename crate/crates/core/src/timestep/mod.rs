//! Method-of-lines time integration of `du/dt = D u + f(u)`.

mod rk;
mod semi_implicit;
mod spectral_imex;

pub use rk::{step_explicit_rk, RkStep};
pub use semi_implicit::{step_semi_implicit, SemiImplicitEuler};
pub use spectral_imex::{step_spectral_imex, SpectralImex};

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid1D, StateVector};
use crate::operator::{OperatorMatrix, QuadratureOptions};
use crate::params::FractionalParams;
use crate::reaction::{BistableCubic, Reaction};

/// Solutions whose magnitude exceeds this are reported as diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SemiImplicit,
    ExplicitRk,
    SpectralImex,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "semi-implicit" => Ok(Method::SemiImplicit),
            "explicit-rk" => Ok(Method::ExplicitRk),
            "spectral-imex" => Ok(Method::SpectralImex),
            other => Err(format!(
                "unknown stepper '{other}' (expected semi-implicit|explicit-rk|spectral-imex)"
            )),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::SemiImplicit => "semi-implicit",
            Method::ExplicitRk => "explicit-rk",
            Method::SpectralImex => "spectral-imex",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepperConfig {
    pub method: Method,
    /// Fixed step for the implicit steppers, initial step for the adaptive one.
    pub dt: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl StepperConfig {
    pub fn semi_implicit(dt: f64) -> Self {
        Self {
            method: Method::SemiImplicit,
            dt,
            abs_tol: 1e-6,
            rel_tol: 1e-6,
            max_steps: 10_000_000,
        }
    }

    pub fn explicit_rk(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            method: Method::ExplicitRk,
            dt: 1e-3,
            abs_tol,
            rel_tol,
            max_steps: 10_000_000,
        }
    }

    pub fn spectral_imex(dt: f64) -> Self {
        Self {
            method: Method::SpectralImex,
            ..Self::semi_implicit(dt)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.method == Method::ExplicitRk && !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Strictly increasing save times starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSchedule {
    times: Vec<f64>,
}

impl SnapshotSchedule {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.first() != Some(&0.0) {
            return Err(Error::Config(
                "snapshot schedule must start at t = 0".into(),
            ));
        }
        if times
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(Error::Config(
                "snapshot times must be strictly increasing".into(),
            ));
        }
        Ok(Self { times })
    }

    /// `count` equispaced times from 0 to `t_final` inclusive.
    pub fn uniform(t_final: f64, count: usize) -> Result<Self> {
        if t_final == 0.0 {
            return Self::new(vec![0.0]);
        }
        if !(t_final > 0.0) || count < 2 {
            return Err(Error::Config(format!(
                "need t_final > 0 and at least 2 snapshots, got t_final = {t_final}, count = {count}"
            )));
        }
        let last = count - 1;
        let times = (0..count)
            .map(|i| {
                if i == last {
                    t_final
                } else {
                    t_final * i as f64 / last as f64
                }
            })
            .collect();
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn t_final(&self) -> f64 {
        *self.times.last().unwrap()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub steps: usize,
    pub rejected: usize,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub u: StateVector,
}

#[derive(Debug, Clone)]
pub struct SimulationResult<R = BistableCubic> {
    pub snapshots: Vec<Snapshot>,
    pub grid: Grid1D,
    pub params: FractionalParams,
    pub options: QuadratureOptions,
    pub nl: R,
    pub stepper: StepperConfig,
    pub stats: StepStats,
}

impl<R> SimulationResult<R> {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }

    pub fn last(&self) -> &StateVector {
        &self
            .snapshots
            .last()
            .expect("at least the initial condition")
            .u
    }
}

fn check_state(u: &StateVector, t: f64) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::Diverged {
            t,
            max_abs: f64::INFINITY,
        });
    }
    let max_abs = u.max_abs();
    if max_abs > DIVERGENCE_THRESHOLD {
        return Err(Error::Diverged { t, max_abs });
    }
    Ok(())
}

/// Fixed-step count for one snapshot interval: the interval is split into
/// equal steps no longer than `dt`, so every snapshot is hit exactly.
fn uniform_steps(interval: f64, dt: f64) -> (usize, f64) {
    let k = ((interval / dt) - 1e-9).ceil().max(1.0) as usize;
    (k, interval / k as f64)
}

/// Advance `ic` through the schedule. The spatial operator uses projection
/// ghosts; with [`Method::SpectralImex`] the domain is instead treated as
/// periodic with period `2b` (the last node duplicates the first).
pub fn integrate<R: Reaction + Clone>(
    ic: &StateVector,
    schedule: &SnapshotSchedule,
    cfg: &StepperConfig,
    grid: &Grid1D,
    params: &FractionalParams,
    options: QuadratureOptions,
    nl: &R,
) -> Result<SimulationResult<R>> {
    cfg.validate()?;
    ic.check_len(grid)?;
    check_state(ic, 0.0)?;
    let started = Instant::now();
    let mut stats = StepStats::default();
    let mut snapshots = vec![Snapshot {
        time: 0.0,
        u: ic.clone(),
    }];
    let times = schedule.times();

    match cfg.method {
        Method::SemiImplicit => {
            let matrix = OperatorMatrix::assemble(*grid, *params, options)?;
            let mut stepper = SemiImplicitEuler::new(&matrix);
            let mut u = ic.clone();
            for w in times.windows(2) {
                let (k, dt) = uniform_steps(w[1] - w[0], cfg.dt);
                for j in 0..k {
                    if stats.steps >= cfg.max_steps {
                        return Err(Error::MaxStepsExceeded(cfg.max_steps));
                    }
                    u = stepper.step(&u, dt, nl)?;
                    stats.steps += 1;
                    check_state(&u, w[0] + (j + 1) as f64 * dt)?;
                }
                snapshots.push(Snapshot {
                    time: w[1],
                    u: u.clone(),
                });
            }
        }
        Method::ExplicitRk => {
            let matrix = OperatorMatrix::assemble(*grid, *params, options)?;
            let mut rhs = |_t: f64, u: &[f64], out: &mut [f64]| -> Result<()> {
                let v = matrix.apply(&StateVector(u.to_vec()))?;
                for ((o, d), &ui) in out.iter_mut().zip(v.iter()).zip(u) {
                    *o = d + nl.f(ui);
                }
                Ok(())
            };
            let min_dt = 1e-14 * schedule.t_final();
            let mut u = ic.0.clone();
            let mut t = 0.0;
            let mut dt = cfg.dt;
            for &target in &times[1..] {
                while t < target {
                    if stats.steps + stats.rejected >= cfg.max_steps {
                        return Err(Error::MaxStepsExceeded(cfg.max_steps));
                    }
                    let truncated = t + dt >= target;
                    let h = if truncated { target - t } else { dt };
                    let step = step_explicit_rk(&u, t, h, &mut rhs, cfg.abs_tol, cfg.rel_tol)?;
                    if step.accepted {
                        stats.steps += 1;
                        u = step.u_new;
                        t = if truncated { target } else { t + h };
                        check_state(&StateVector(u.clone()), t)?;
                        // a truncated step says nothing about the natural step size
                        dt = if truncated {
                            dt.max(step.dt_next)
                        } else {
                            step.dt_next
                        };
                    } else {
                        stats.rejected += 1;
                        dt = step.dt_next;
                    }
                    if dt < min_dt {
                        return Err(Error::StepUnderflow { t, dt, min: min_dt });
                    }
                }
                snapshots.push(Snapshot {
                    time: target,
                    u: StateVector(u.clone()),
                });
            }
        }
        Method::SpectralImex => {
            let k_modes = grid.n() - 1;
            let period = 2.0 * grid.b();
            let mut modes: Option<Vec<num_complex::Complex64>> = None;
            let mut stepper: Option<SpectralImex> = None;
            for w in times.windows(2) {
                let (k, dt) = uniform_steps(w[1] - w[0], cfg.dt);
                if stepper.as_ref().map(|s| s.dt()) != Some(dt) {
                    stepper = Some(SpectralImex::new(k_modes, period, dt, params));
                }
                let st = stepper.as_mut().unwrap();
                let m = modes.get_or_insert_with(|| st.to_modes(&ic[..k_modes]));
                for _ in 0..k {
                    if stats.steps >= cfg.max_steps {
                        return Err(Error::MaxStepsExceeded(cfg.max_steps));
                    }
                    st.step(m, Some(nl));
                    stats.steps += 1;
                }
                let mut u = st.to_physical(m);
                u.push(u[0]);
                let u = StateVector(u);
                check_state(&u, w[1])?;
                snapshots.push(Snapshot { time: w[1], u });
            }
        }
    }

    stats.wall_time_secs = started.elapsed().as_secs_f64();
    Ok(SimulationResult {
        snapshots,
        grid: *grid,
        params: *params,
        options,
        nl: nl.clone(),
        stepper: *cfg,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    fn chen(grid: &Grid1D) -> StateVector {
        grid.sample(|x| (x / 4.0 + 0.5).clamp(0.0, 1.0))
    }

    #[test]
    fn zero_final_time_returns_initial_condition() {
        let g = Grid1D::new(30.0, 181).unwrap();
        let p = validate_params(1.8, 0.1).unwrap();
        let nl = BistableCubic::new(0.5).unwrap();
        let sched = SnapshotSchedule::uniform(0.0, 5).unwrap();
        let res = integrate(
            &chen(&g),
            &sched,
            &StepperConfig::semi_implicit(0.02),
            &g,
            &p,
            Default::default(),
            &nl,
        )
        .unwrap();
        assert_eq!(res.snapshots.len(), 1);
        assert_eq!(res.snapshots[0].u, chen(&g));
    }

    #[test]
    fn snapshot_times_are_exact() {
        let g = Grid1D::new(10.0, 41).unwrap();
        let p = validate_params(1.5, 0.2).unwrap();
        let nl = BistableCubic::new(0.5).unwrap();
        let sched = SnapshotSchedule::new(vec![0.0, 0.1, 0.35, 1.0 / 3.0 + 0.5]).unwrap();
        for cfg in [
            StepperConfig::semi_implicit(0.03),
            StepperConfig::explicit_rk(1e-6, 1e-6),
            StepperConfig::spectral_imex(0.03),
        ] {
            let res = integrate(&chen(&g), &sched, &cfg, &g, &p, Default::default(), &nl).unwrap();
            assert_eq!(res.times(), sched.times(), "{:?}", cfg.method);
        }
    }

    #[test]
    fn stable_constant_states_are_preserved() {
        let g = Grid1D::new(10.0, 41).unwrap();
        let p = validate_params(1.5, 0.4).unwrap();
        let nl = BistableCubic::new(0.3).unwrap();
        let sched = SnapshotSchedule::uniform(1.0, 3).unwrap();
        for c in [0.0, 1.0] {
            let ic = StateVector::constant(g.n(), c);
            for cfg in [
                StepperConfig::semi_implicit(0.05),
                StepperConfig::explicit_rk(1e-8, 1e-8),
                StepperConfig::spectral_imex(0.05),
            ] {
                let res = integrate(&ic, &sched, &cfg, &g, &p, Default::default(), &nl).unwrap();
                for v in res.last().iter() {
                    assert!((v - c).abs() <= 1e-12, "{:?} {c}: {v}", cfg.method);
                }
            }
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let g = Grid1D::new(30.0, 181).unwrap();
        let p = validate_params(1.8, 0.1).unwrap();
        let nl = BistableCubic::new(0.6).unwrap();
        let sched = SnapshotSchedule::uniform(2.0, 5).unwrap();
        let cfg = StepperConfig::semi_implicit(0.02);
        let a = integrate(&chen(&g), &sched, &cfg, &g, &p, Default::default(), &nl).unwrap();
        let b = integrate(&chen(&g), &sched, &cfg, &g, &p, Default::default(), &nl).unwrap();
        for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
            let bits = |u: &StateVector| u.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&x.u), bits(&y.u));
        }
    }

    #[test]
    fn divergence_is_reported() {
        let g = Grid1D::new(5.0, 21).unwrap();
        let p = validate_params(1.5, 0.0).unwrap();
        let nl = BistableCubic::new(0.5).unwrap();
        // the reaction is treated explicitly, so an oversized step overshoots
        // and the cubic then runs away
        let ic = StateVector::constant(g.n(), 3.0);
        let sched = SnapshotSchedule::uniform(50.0, 2).unwrap();
        let r = integrate(
            &ic,
            &sched,
            &StepperConfig::semi_implicit(5.0),
            &g,
            &p,
            Default::default(),
            &nl,
        );
        assert!(matches!(r, Err(Error::Diverged { .. })), "{r:?}");
    }

    #[test]
    fn schedule_validation() {
        assert!(SnapshotSchedule::new(vec![0.5, 1.0]).is_err());
        assert!(SnapshotSchedule::new(vec![0.0, 1.0, 1.0]).is_err());
        let s = SnapshotSchedule::uniform(20.0, 21).unwrap();
        assert_eq!(s.times()[20], 20.0);
        assert_eq!(s.times()[10], 10.0);
    }
}
