use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::diagnostics::{ConvergenceReport, SpeedEstimate};
use crate::error::{Error, Result};
use crate::operator::{quadrature_coefficients, Scheme};
use crate::reaction::BistableCubic;
use crate::timestep::{SimulationResult, StepStats};

use super::config::RunConfig;

/// Top-level keys every manifest must carry.
pub const REQUIRED_KEYS: &[&str] = &[
    "version",
    "config",
    "h",
    "M",
    "c1",
    "c2",
    "potential_gap",
    "stats",
    "speed",
    "speed_fit",
    "kappa",
    "kappa_fit",
    "snapshot_times",
    "seed",
    "scheme",
];

/// Keys required inside `config`.
pub const REQUIRED_CONFIG_KEYS: &[&str] = &[
    "alpha",
    "theta",
    "a",
    "b",
    "n",
    "t_final",
    "ic",
    "stepper",
    "dt",
    "abs_tol",
    "rel_tol",
    "snapshots",
    "scheme",
    "tail_correction",
    "seed",
    "out",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedFit {
    pub level: f64,
    pub fit_window: f64,
    pub intercept: f64,
    pub residual: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub r_squared: f64,
    pub log_intercept: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config: RunConfig,
    pub h: f64,
    #[serde(rename = "M")]
    pub m: usize,
    /// `None` at `alpha = 2`, where the integral form degenerates.
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub potential_gap: f64,
    pub stats: StepStats,
    pub speed: Option<f64>,
    pub speed_fit: Option<SpeedFit>,
    pub kappa: Option<f64>,
    pub kappa_fit: Option<DecayFit>,
    /// Exact snapshot times (the CSV headers are rounded).
    pub snapshot_times: Vec<f64>,
    pub seed: u64,
    pub scheme: Scheme,
}

impl Manifest {
    pub fn new(
        config: &RunConfig,
        result: &SimulationResult<BistableCubic>,
        speed: Option<(&SpeedEstimate, f64, f64)>,
        decay: Option<&ConvergenceReport>,
    ) -> Self {
        let (c1, c2) = match quadrature_coefficients(&result.params) {
            Ok((c1, c2)) => (Some(c1), Some(c2)),
            Err(_) => (None, None),
        };
        Manifest {
            version: crate::VERSION.to_string(),
            config: config.clone(),
            h: result.grid.h(),
            m: result.grid.m(),
            c1,
            c2,
            potential_gap: result.nl.potential_gap(),
            stats: result.stats,
            speed: speed.map(|(s, _, _)| s.speed),
            speed_fit: speed.map(|(s, level, fit_window)| SpeedFit {
                level,
                fit_window,
                intercept: s.intercept,
                residual: s.residual,
                points: s.front_track.len(),
            }),
            kappa: decay.and_then(|d| d.decay_rate),
            kappa_fit: decay.map(|d| DecayFit {
                r_squared: d.r_squared,
                log_intercept: d.log_intercept,
                points: d.fit_points,
            }),
            snapshot_times: result.times(),
            seed: config.seed,
            scheme: config.scheme,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

pub fn write_manifest(manifest: &Manifest, path: &Path) -> Result<()> {
    std::fs::write(path, manifest.to_json()).map_err(|e| Error::io(path, e))
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
    check_manifest_schema(&value).map_err(|m| Error::parse(path, m))?;
    serde_json::from_value(value).map_err(|e| Error::parse(path, e.to_string()))
}

/// Verify that a parsed manifest carries every required field.
pub fn check_manifest_schema(value: &Value) -> std::result::Result<(), String> {
    let obj = value.as_object().ok_or("manifest is not a JSON object")?;
    let missing: Vec<&str> = REQUIRED_KEYS
        .iter()
        .copied()
        .filter(|k| !obj.contains_key(*k))
        .collect();
    if !missing.is_empty() {
        return Err(format!("manifest lacks {}", missing.join(", ")));
    }
    let config = obj["config"].as_object().ok_or("config is not an object")?;
    let missing: Vec<&str> = REQUIRED_CONFIG_KEYS
        .iter()
        .copied()
        .filter(|k| !config.contains_key(*k))
        .collect();
    if !missing.is_empty() {
        return Err(format!("manifest config lacks {}", missing.join(", ")));
    }
    for key in ["h", "potential_gap"] {
        if !obj[key].is_number() {
            return Err(format!("{key} is not a number"));
        }
    }
    if !obj["snapshot_times"].is_array() {
        return Err("snapshot_times is not an array".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::make_ic;
    use crate::timestep::integrate;

    fn run(cfg: &RunConfig) -> SimulationResult {
        let s = cfg.validate().unwrap();
        let ic = make_ic(&s.ic, &s.grid);
        integrate(
            &ic,
            &s.schedule,
            &s.stepper,
            &s.grid,
            &s.params,
            s.options,
            &s.nl,
        )
        .unwrap()
    }

    fn small() -> RunConfig {
        RunConfig {
            b: 10.0,
            n: 41,
            t_final: 0.5,
            snapshots: 3,
            ..Default::default()
        }
    }

    #[test]
    fn balanced_run_has_zero_gap() {
        let cfg = small();
        let m = Manifest::new(&cfg, &run(&cfg), None, None);
        let v: Value = serde_json::from_str(&m.to_json()).unwrap();
        check_manifest_schema(&v).unwrap();
        assert_eq!(v["potential_gap"], 0.0);
        assert!(v["speed"].is_null());
    }

    #[test]
    fn coefficients_recorded() {
        let cfg = small();
        let m = Manifest::new(&cfg, &run(&cfg), None, None);
        assert!((m.c1.unwrap() - 0.08348025).abs() < 1e-7);
        assert!((m.c2.unwrap() - 0.24226912).abs() < 1e-7);
        assert_eq!(m.snapshot_times, vec![0.0, 0.25, 0.5]);
    }

    #[test]
    fn classical_manifest_has_null_coefficients() {
        let cfg = RunConfig {
            alpha: 2.0,
            theta: 0.0,
            ..small()
        };
        let m = Manifest::new(&cfg, &run(&cfg), None, None);
        let v: Value = serde_json::from_str(&m.to_json()).unwrap();
        assert!(v["c1"].is_null() && v["c2"].is_null());
    }

    #[test]
    fn write_read_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        let cfg = small();
        let m = Manifest::new(&cfg, &run(&cfg), None, None);
        write_manifest(&m, &path).unwrap();
        assert_eq!(read_manifest(&path).unwrap(), m);
    }

    #[test]
    fn schema_check_names_missing_fields() {
        let v: Value = serde_json::json!({"version": "x"});
        let err = check_manifest_schema(&v).unwrap_err();
        assert!(err.contains("config") && err.contains("seed"), "{err}");
    }
}
