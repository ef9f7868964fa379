use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{make_ic, InitialCondition};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::operator::{QuadratureOptions, Scheme};
use crate::params::FractionalParams;
use crate::reaction::BistableCubic;
use crate::timestep::{integrate, Method, SimulationResult, SnapshotSchedule, StepperConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IcKind {
    Chen,
    Step,
}

impl std::str::FromStr for IcKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "chen" => Ok(IcKind::Chen),
            "step" => Ok(IcKind::Step),
            other => Err(format!(
                "unknown initial condition '{other}' (expected chen|step)"
            )),
        }
    }
}

impl std::fmt::Display for IcKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            IcKind::Chen => "chen",
            IcKind::Step => "step",
        })
    }
}

/// Everything needed to reproduce one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub alpha: f64,
    pub theta: f64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub t_final: f64,
    pub ic: IcKind,
    pub step_lo: f64,
    pub step_hi: f64,
    pub stepper: Method,
    pub dt: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
    pub snapshots: usize,
    pub scheme: Scheme,
    pub tail_correction: bool,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 1.8,
            theta: 0.1,
            a: 0.5,
            b: 30.0,
            n: 181,
            t_final: 20.0,
            ic: IcKind::Chen,
            step_lo: 0.49,
            step_hi: 1.51,
            stepper: Method::SemiImplicit,
            dt: 0.02,
            abs_tol: 1e-6,
            rel_tol: 1e-6,
            max_steps: 10_000_000,
            snapshots: 21,
            scheme: Scheme::Corrected,
            tail_correction: false,
            seed: 0,
            out: PathBuf::from("run"),
        }
    }
}

/// Validated objects derived from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct RunSetup {
    pub grid: Grid1D,
    pub params: FractionalParams,
    pub nl: BistableCubic,
    pub stepper: StepperConfig,
    pub schedule: SnapshotSchedule,
    pub options: QuadratureOptions,
    pub ic: InitialCondition,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("--{key}: cannot parse '{value}'")))
}

fn parse_named<T: std::str::FromStr<Err = String>>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|e| Error::Config(format!("--{key}: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "--{key}: expected true|false, got '{value}'"
        ))),
    }
}

impl RunConfig {
    /// Set one field from its textual form. Keys use the flag spelling
    /// (`t-final`); underscores are accepted too.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let k = key.as_str();
        match k {
            "alpha" => self.alpha = parse_value(k, value)?,
            "theta" => self.theta = parse_value(k, value)?,
            "a" => self.a = parse_value(k, value)?,
            "b" => self.b = parse_value(k, value)?,
            "n" => self.n = parse_value(k, value)?,
            "t-final" => self.t_final = parse_value(k, value)?,
            "ic" => self.ic = parse_named(k, value)?,
            "step-lo" => self.step_lo = parse_value(k, value)?,
            "step-hi" => self.step_hi = parse_value(k, value)?,
            "stepper" => self.stepper = parse_named(k, value)?,
            "dt" => self.dt = parse_value(k, value)?,
            "abs-tol" => self.abs_tol = parse_value(k, value)?,
            "rel-tol" => self.rel_tol = parse_value(k, value)?,
            "max-steps" => self.max_steps = parse_value(k, value)?,
            "snapshots" => self.snapshots = parse_value(k, value)?,
            "scheme" => self.scheme = parse_named(k, value)?,
            "tail-correction" => self.tail_correction = parse_bool(k, value)?,
            "seed" => self.seed = parse_value(k, value)?,
            "out" => self.out = PathBuf::from(value),
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Apply a `key = value` file. Blank lines and `#` comments are skipped;
    /// unknown keys are errors.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(path, format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(key, value)
                .map_err(|e| Error::parse(path, format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn options(&self) -> QuadratureOptions {
        QuadratureOptions {
            scheme: self.scheme,
            tail_correction: self.tail_correction,
        }
    }

    pub fn initial_condition(&self) -> InitialCondition {
        match self.ic {
            IcKind::Chen => InitialCondition::ChenRamp,
            IcKind::Step => InitialCondition::Step {
                lo: self.step_lo,
                hi: self.step_hi,
            },
        }
    }

    /// Check every invariant before any computation.
    pub fn validate(&self) -> Result<RunSetup> {
        let params = FractionalParams::new(self.alpha, self.theta)?;
        let grid = Grid1D::new(self.b, self.n)?;
        let nl = BistableCubic::new(self.a)?;
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::OutOfRange {
                name: "t_final",
                value: self.t_final,
                admissible: "final time must be >= 0".into(),
            });
        }
        let schedule = SnapshotSchedule::uniform(self.t_final, self.snapshots)
            .map_err(|e| Error::Config(format!("--snapshots: {e}")))?;
        let stepper = StepperConfig {
            method: self.stepper,
            dt: self.dt,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_steps: self.max_steps,
        };
        stepper.validate()?;
        if !(self.step_lo.is_finite() && self.step_hi.is_finite()) {
            return Err(Error::Config("--step-lo/--step-hi must be finite".into()));
        }
        Ok(RunSetup {
            grid,
            params,
            nl,
            stepper,
            schedule,
            options: self.options(),
            ic: self.initial_condition(),
        })
    }

    /// Validate and integrate. Nothing is written to disk.
    pub fn simulate(&self) -> Result<SimulationResult> {
        let setup = self.validate()?;
        let ic = make_ic(&setup.ic, &setup.grid);
        integrate(
            &ic,
            &setup.schedule,
            &setup.stepper,
            &setup.grid,
            &setup.params,
            setup.options,
            &setup.nl,
        )
    }
}
