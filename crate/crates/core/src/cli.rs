//! Command-line driver. Exit codes: 0 success, 1 runtime failure, 2 bad arguments.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::diagnostics::{
    estimate_decay_rate, estimate_speed, estimate_speed_from_snapshots, green_function,
    green_function_auto,
};
use crate::error::Error;
use crate::grid::{GhostPolicy, StateVector};
use crate::io::{
    read_manifest, read_profile_csv, read_snapshots_csv, write_columns, write_csv, write_manifest,
    write_snapshot_csv, Manifest, RunConfig, SnapshotTable,
};
use crate::operator::{classical_laplacian_apply, QuadratureOperator, QuadratureOptions, Scheme};
use crate::params::FractionalParams;

/// Default fraction of the run used for speed fits.
const FIT_WINDOW: f64 = 0.5;

#[derive(Parser, Debug)]
#[command(
    name = "fracwave",
    version,
    about = "Traveling fronts of bistable equations with Riesz-Feller diffusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation and write snapshots.csv and manifest.json.
    Simulate(RunArgs),
    /// Apply the discrete operator once to a profile stored as CSV.
    Apply(ApplyArgs),
    /// Sample the kernel exp(t psi) in physical space.
    Green(GreenArgs),
    /// Recompute the front speed from a saved run directory.
    Speed(SpeedArgs),
    /// Cartesian sweep over alpha, theta and a; one subdirectory per point.
    Sweep(SweepArgs),
    /// Run the invariant suite.
    Selftest,
}

/// Flags shared by `simulate` and `sweep`. Values are kept as text and
/// parsed by [`RunConfig::set`], so file and flag values share one parser.
#[derive(Args, Debug, Default)]
struct RunArgs {
    /// `key = value` file; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_final: Option<String>,
    /// chen | step
    #[arg(long)]
    ic: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    step_lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    step_hi: Option<String>,
    /// semi-implicit | explicit-rk | spectral-imex
    #[arg(long)]
    stepper: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    abs_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rel_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    max_steps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    snapshots: Option<String>,
    /// corrected | trapezoid
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    tail_correction: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated alpha values.
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// Comma-separated theta values.
    #[arg(long, allow_hyphen_values = true)]
    thetas: Option<String>,
    /// Comma-separated threshold values.
    #[arg(long, allow_hyphen_values = true)]
    a_values: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    /// Clamp to the end values beyond the walls.
    Projection,
    /// Extend linearly from the two outermost nodes.
    Freespace,
}

#[derive(Args, Debug)]
struct ApplyArgs {
    /// CSV with an `x` column; the last column is the profile.
    #[arg(long)]
    input: PathBuf,
    /// Output CSV (x, u, Du); stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, value_enum, default_value_t = Mode::Projection)]
    mode: Mode,
    #[arg(long, default_value = "corrected")]
    scheme: Scheme,
    #[arg(long, default_value_t = false)]
    tail_correction: bool,
}

#[derive(Args, Debug)]
struct GreenArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t: f64,
    /// Window length; chosen from the tail decay when absent.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<f64>,
    /// Number of Fourier modes (even); chosen automatically when absent.
    #[arg(long)]
    k_modes: Option<usize>,
    /// Output CSV (x, G); stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpeedArgs {
    /// Directory written by `simulate`.
    #[arg(long)]
    run: PathBuf,
    /// Crossing level; the threshold a by default.
    #[arg(long, allow_hyphen_values = true)]
    level: Option<f64>,
    #[arg(long, default_value_t = FIT_WINDOW, allow_hyphen_values = true)]
    fit_window: f64,
}

/// An error together with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

fn flag(name: &str) -> String {
    format!("--{}", name.replace('_', "-"))
}

/// Classify a library error: invalid input is a usage error (2), anything
/// else a runtime failure (1).
fn failure(e: Error) -> Failure {
    match &e {
        Error::OutOfRange { name, .. } => Failure::usage(format!("{}: {e}", flag(name))),
        Error::Config(_) | Error::Parse { .. } => Failure::usage(e.to_string()),
        Error::WindowTooSmall { .. } => Failure::usage(format!("--window: {e}")),
        Error::GridTooSmall(_) => Failure::usage(format!("--n: {e}")),
        _ => Failure {
            code: 1,
            message: e.to_string(),
        },
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn run_config(args: &RunArgs) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)
            .map_err(|e| Failure::usage(format!("--config: {e}")))?;
    }
    let flags: [(&str, &Option<String>); 19] = [
        ("alpha", &args.alpha),
        ("theta", &args.theta),
        ("a", &args.a),
        ("b", &args.b),
        ("n", &args.n),
        ("t-final", &args.t_final),
        ("ic", &args.ic),
        ("step-lo", &args.step_lo),
        ("step-hi", &args.step_hi),
        ("stepper", &args.stepper),
        ("dt", &args.dt),
        ("abs-tol", &args.abs_tol),
        ("rel-tol", &args.rel_tol),
        ("max-steps", &args.max_steps),
        ("snapshots", &args.snapshots),
        ("scheme", &args.scheme),
        ("tail-correction", &args.tail_correction),
        ("seed", &args.seed),
        ("out", &args.out),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v).map_err(failure)?;
        }
    }
    Ok(cfg)
}

/// Run, measure and write one configuration. Returns a one-line summary.
fn simulate_one(cfg: &RunConfig) -> CliResult<String> {
    let result = cfg.simulate().map_err(failure)?;
    let a = result.nl.a();
    let speed = estimate_speed(&result, None, FIT_WINDOW).ok();
    let decay = if result.snapshots.len() >= 6 {
        estimate_decay_rate(&result, result.last()).ok()
    } else {
        None
    };
    let manifest = Manifest::new(
        cfg,
        &result,
        speed.as_ref().map(|s| (s, a, FIT_WINDOW)),
        decay.as_ref(),
    );

    std::fs::create_dir_all(&cfg.out).map_err(|e| failure(Error::io(&cfg.out, e)))?;
    write_snapshot_csv(&result, &cfg.out.join("snapshots.csv")).map_err(failure)?;
    write_manifest(&manifest, &cfg.out.join("manifest.json")).map_err(failure)?;

    let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.6e}"));
    Ok(format!(
        "{}: {} steps, speed {}, kappa {}",
        cfg.out.display(),
        result.stats.steps,
        fmt(manifest.speed),
        fmt(manifest.kappa)
    ))
}

fn simulate(args: &RunArgs) -> CliResult {
    let cfg = run_config(args)?;
    let line = simulate_one(&cfg)?;
    println!("{line}");
    Ok(())
}

fn parse_list(name: &str, text: &Option<String>, fallback: f64) -> CliResult<Vec<f64>> {
    match text {
        None => Ok(vec![fallback]),
        Some(t) => t
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Failure::usage(format!("--{name}: cannot parse '{v}'")))
            })
            .collect(),
    }
}

fn sweep(args: &SweepArgs) -> CliResult {
    let base = run_config(&args.run)?;
    let alphas = parse_list("alphas", &args.alphas, base.alpha)?;
    let thetas = parse_list("thetas", &args.thetas, base.theta)?;
    let a_values = parse_list("a-values", &args.a_values, base.a)?;

    let mut configs = Vec::new();
    for &alpha in &alphas {
        for &theta in &thetas {
            for &a in &a_values {
                let mut cfg = base.clone();
                cfg.alpha = alpha;
                cfg.theta = theta;
                cfg.a = a;
                cfg.out = base.out.join(format!("alpha={alpha}_theta={theta}_a={a}"));
                // reject the whole sweep before computing anything
                cfg.validate().map_err(failure)?;
                configs.push(cfg);
            }
        }
    }
    let outcomes: Vec<CliResult<String>> = configs.par_iter().map(simulate_one).collect();
    let mut failed = 0;
    for outcome in outcomes {
        match outcome {
            Ok(line) => println!("{line}"),
            Err(f) => {
                failed += 1;
                eprintln!("error: {}", f.message);
            }
        }
    }
    if failed > 0 {
        return Err(Failure {
            code: 1,
            message: format!("{failed} of {} sweep points failed", configs.len()),
        });
    }
    Ok(())
}

fn write_or_print(
    output: &Option<PathBuf>,
    x: &[f64],
    headers: &[String],
    columns: &[&[f64]],
) -> CliResult {
    match output {
        Some(path) => write_columns(path, x, headers, columns).map_err(failure),
        None => write_csv(std::io::stdout().lock(), x, headers, columns).map_err(|e| Failure {
            code: 1,
            message: format!("<stdout>: {e}"),
        }),
    }
}

fn apply(args: &ApplyArgs) -> CliResult {
    let params = FractionalParams::new(args.alpha, args.theta).map_err(failure)?;
    let (x, u) =
        read_profile_csv(&args.input).map_err(|e| Failure::usage(format!("--input: {e}")))?;
    let table = SnapshotTable {
        x: x.clone(),
        times: vec![],
        columns: vec![],
    };
    let grid = table
        .grid()
        .map_err(|e| Failure::usage(format!("--input: {e}")))?;
    let u = StateVector(u);
    let ghosts = match args.mode {
        Mode::Projection => GhostPolicy::Projection,
        Mode::Freespace => {
            let n = u.len();
            let (h, b) = (grid.h(), grid.b());
            let (l0, l1, r0, r1) = (u[0], u[1], u[n - 1], u[n - 2]);
            GhostPolicy::exact(move |x: f64| {
                if x < 0.0 {
                    l0 + (l0 - l1) * (-b - x) / h
                } else {
                    r0 + (r0 - r1) * (x - b) / h
                }
            })
        }
    };
    let du = if params.is_classical() {
        classical_laplacian_apply(&u, &grid, &ghosts)
    } else {
        let options = QuadratureOptions {
            scheme: args.scheme,
            tail_correction: args.tail_correction,
        };
        QuadratureOperator::new(grid, params, options).and_then(|op| op.apply(&u, &ghosts))
    }
    .map_err(failure)?;
    write_or_print(&args.output, &x, &["u".into(), "Du".into()], &[&u, &du])
}

fn green(args: &GreenArgs) -> CliResult {
    let params = FractionalParams::new(args.alpha, args.theta).map_err(failure)?;
    let g = match (args.window, args.k_modes) {
        (None, None) => green_function_auto(&params, args.t),
        (window, k_modes) => {
            let (auto_w, auto_k) =
                crate::diagnostics::auto_resolution(&params, &[args.t]).map_err(failure)?;
            green_function(
                &params,
                args.t,
                window.unwrap_or(auto_w),
                k_modes.unwrap_or(auto_k),
            )
        }
    }
    .map_err(failure)?;
    eprintln!(
        "window {} with {} modes: mass {:.12}, min {:e}, edge/peak {:e}",
        g.window,
        g.density.len(),
        g.mass(),
        g.min(),
        g.boundary_ratio()
    );
    write_or_print(&args.output, &g.x, &["G".into()], &[&g.density])
}

fn speed(args: &SpeedArgs) -> CliResult {
    let manifest_path = args.run.join("manifest.json");
    let manifest =
        read_manifest(&manifest_path).map_err(|e| Failure::usage(format!("--run: {e}")))?;
    let table = read_snapshots_csv(&args.run.join("snapshots.csv"))
        .map_err(|e| Failure::usage(format!("--run: {e}")))?;
    let grid = table
        .grid()
        .map_err(|e| Failure::usage(format!("--run: {e}")))?;
    // exact times from the manifest; the CSV headers are rounded
    let times = if manifest.snapshot_times.len() == table.columns.len() {
        manifest.snapshot_times.clone()
    } else {
        table.times.clone()
    };
    let profiles: Vec<&[f64]> = table.columns.iter().map(|c| &c[..]).collect();
    let level = args.level.unwrap_or(manifest.config.a);
    let est = estimate_speed_from_snapshots(&times, &profiles, &grid, level, args.fit_window)
        .map_err(failure)?;
    let out = serde_json::json!({
        "speed": est.speed,
        "intercept": est.intercept,
        "residual": est.residual,
        "level": level,
        "fit_window": args.fit_window,
        "points": est.front_track.len(),
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn selftest() -> CliResult {
    let reports = crate::selftest::run_all();
    let mut ok = true;
    for r in &reports {
        println!("{}", r.summary_line());
        for c in &r.checks {
            println!(
                "    [{}] {}: {}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        ok &= r.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "selftest failed".into(),
        })
    }
}

/// Parse `argv` (including the program name), run the subcommand and
/// return the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Apply(a) => apply(a),
        Command::Green(a) => green(a),
        Command::Speed(a) => speed(a),
        Command::Sweep(a) => sweep(a),
        Command::Selftest => selftest(),
    };
    match outcome {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
