//! Invariant suite behind the `selftest` subcommand: coefficients and
//! symbol, operator correctness, the Grünwald-Letnikov cross-check, Green's
//! function checks and the manifest schema.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::{auto_resolution, green_function, make_ic, GreenFunction};
use crate::error::Result;
use crate::grid::{GhostPolicy, Grid1D, StateVector};
use crate::io::{check_manifest_schema, Manifest, RunConfig};
use crate::operator::{
    assemble_operator_matrix, grunwald_letnikov_apply, grunwald_letnikov_weighted_apply,
    quadrature_coefficients, riesz_feller_symbol, spectral_apply, QuadratureOperator,
    QuadratureOptions,
};
use crate::params::FractionalParams;
use crate::timestep::integrate;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: impl Into<String>, r: Result<Check>) -> Self {
        r.unwrap_or_else(|e| Check::new(name, false, format!("error: {e}")))
    }
}

#[derive(Debug, Clone)]
pub struct GroupReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary_line(&self) -> String {
        let ok = self.checks.iter().filter(|c| c.passed).count();
        format!(
            "[{}] {}: {}/{} checks passed",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            ok,
            self.checks.len()
        )
    }
}

fn params(alpha: f64, theta: f64) -> FractionalParams {
    FractionalParams::new(alpha, theta).expect("admissible parameters")
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Points of the 10 x 10 lattice over the admissible `(alpha, theta)` region
/// with `alpha < 2`; theta spans the full closed interval.
pub fn coefficient_lattice() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..10 {
        let alpha = 1.05 + 0.1 * i as f64;
        let bound = alpha.min(2.0 - alpha);
        for j in 0..10 {
            out.push((alpha, -bound + 2.0 * bound * j as f64 / 9.0));
        }
    }
    out
}

pub fn check_coefficients() -> GroupReport {
    let lattice = coefficient_lattice();
    let mut nonneg = 0.0f64;
    let mut positive_sum = true;
    let mut reflection = true;
    let mut symbol_re = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for &(alpha, theta) in &lattice {
        let p = params(alpha, theta);
        let (c1, c2) = match quadrature_coefficients(&p) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("({alpha}, {theta}): {e}"));
                continue;
            }
        };
        nonneg = nonneg.min(c1).min(c2);
        positive_sum &= c1 + c2 > 0.0;
        let (r1, r2) = quadrature_coefficients(&p.reflected()).expect("reflected parameters");
        reflection &= r1 == c2 && r2 == c1;
        for xi in [-10.0, -1.0, -0.01, 0.01, 1.0, 10.0] {
            symbol_re = symbol_re.max(riesz_feller_symbol(&p, xi).re);
        }
    }
    let mut edge = 0.0f64;
    for i in 0..10 {
        let alpha = 1.05 + 0.1 * i as f64;
        let (c1, _) =
            quadrature_coefficients(&params(alpha, 2.0 - alpha)).expect("edge parameters");
        edge = edge.max(c1.abs());
    }
    GroupReport {
        name: "coefficients",
        checks: vec![
            Check::new(
                "lattice evaluates",
                failures.is_empty(),
                if failures.is_empty() {
                    format!("{} lattice points", lattice.len())
                } else {
                    format!("{} lattice points, failing: {failures:?}", lattice.len())
                },
            ),
            Check::new("c1, c2 >= 0", nonneg >= 0.0, format!("min = {nonneg:e}")),
            Check::new(
                "c1 + c2 > 0",
                positive_sum,
                format!("over {} points", lattice.len()),
            ),
            Check::new(
                "c1(theta) = c2(-theta) exactly",
                reflection,
                "bitwise equality".to_string(),
            ),
            Check::new(
                "Re psi <= 0",
                symbol_re <= 0.0,
                format!("max = {symbol_re:e}"),
            ),
            Check::new(
                "c1(alpha, 2 - alpha) = 0",
                edge <= 1e-12,
                format!("max |c1| = {edge:e}"),
            ),
        ],
    }
}

/// Gaussian test profile `exp(-x^2)`.
fn gaussian(x: f64) -> f64 {
    (-x * x).exp()
}

/// Relative L-infinity error of the quadrature operator against a Fourier
/// multiplier reference for the Gaussian on `[-30, 30]`, measured on `|x| <= 15`.
pub fn oracle_error(p: &FractionalParams, n: usize, options: QuadratureOptions) -> Result<f64> {
    let b = 30.0;
    let grid = Grid1D::new(b, n)?;
    let u = grid.sample(gaussian);
    let v = QuadratureOperator::new(grid, *p, options)?.apply(&u, &GhostPolicy::Projection)?;

    // periodic reference on a window four times as wide, with a mesh that
    // nests the quadrature nodes
    let period = 4.0 * b;
    let refine = 2 * 1600 / (n - 1);
    let dx = grid.h() / refine as f64;
    let k_modes = (period / dx).round() as usize;
    let samples: Vec<f64> = (0..k_modes)
        .map(|j| gaussian(-period / 2.0 + j as f64 * dx))
        .collect();
    let reference = spectral_apply(&samples, period, p);
    let offset = k_modes / 2;

    let mut err = 0.0f64;
    let mut scale = 0.0f64;
    for k in 0..n {
        let x = grid.x(k);
        if x.abs() > b / 2.0 {
            continue;
        }
        let j = (offset as isize + (k as isize - grid.m() as isize) * refine as isize) as usize;
        err = err.max((v[k] - reference[j]).abs());
        scale = scale.max(reference[j].abs());
    }
    Ok(err / scale)
}

/// Quadrature variant checked against the spectral reference.
pub const ORACLE_OPTIONS: QuadratureOptions = QuadratureOptions {
    scheme: crate::operator::Scheme::Corrected,
    tail_correction: true,
};

pub const ORACLE_PARAMS: [(f64, f64); 3] = [(1.6, 0.3), (1.5, 0.0), (1.9, -0.1)];
pub const ORACLE_MESHES: [usize; 3] = [401, 801, 1601];

pub fn check_operator() -> GroupReport {
    let mut checks = Vec::new();
    let options = [
        QuadratureOptions::trapezoid(),
        QuadratureOptions::trapezoid().with_tail_correction(true),
        QuadratureOptions::corrected(),
        QuadratureOptions::corrected().with_tail_correction(true),
    ];

    // constants: exactly annihilated, both matrix-free and assembled
    checks.push(Check::from_result(
        "constant annihilation",
        (|| {
            let mut worst = 0.0f64;
            for (a, t) in [(1.5, 0.0), (1.8, 0.1), (1.2, -0.8), (1.6, 0.3)] {
                let p = params(a, t);
                for n in [181, 1601] {
                    let g = Grid1D::new(30.0, n)?;
                    let u = StateVector::constant(n, 0.7);
                    for o in options {
                        let v = QuadratureOperator::new(g, p, o)?
                            .apply(&u, &GhostPolicy::Projection)?;
                        worst = worst.max(v.max_abs());
                    }
                }
            }
            Ok(Check::new(
                "constant annihilation",
                worst <= 1e-12,
                format!("max |D c| = {worst:e}"),
            ))
        })(),
    ));

    checks.push(Check::from_result(
        "affine annihilation (free-space ghosts)",
        (|| {
            let mut worst = 0.0f64;
            for (a, t) in [(1.5, 0.0), (1.8, 0.1), (1.2, -0.8), (1.6, 0.3)] {
                let p = params(a, t);
                for n in [181, 1601] {
                    let g = Grid1D::new(30.0, n)?;
                    let affine = |x: f64| 0.3 * x - 2.0;
                    let u = g.sample(affine);
                    for o in [
                        QuadratureOptions::trapezoid(),
                        QuadratureOptions::corrected(),
                    ] {
                        let v = QuadratureOperator::new(g, p, o)?
                            .apply(&u, &GhostPolicy::exact(affine))?;
                        worst = worst.max(v.max_abs());
                    }
                }
            }
            Ok(Check::new(
                "affine annihilation (free-space ghosts)",
                worst <= 1e-10,
                format!("max |D(px + q)| = {worst:e}"),
            ))
        })(),
    ));

    checks.push(Check::from_result(
        "matrix vs matrix-free",
        (|| {
            let g = Grid1D::new(30.0, 181)?;
            let mut rng = ChaCha8Rng::seed_from_u64(20);
            let mut worst = 0.0f64;
            for (a, t) in [(1.8, 0.1), (1.5, 0.4), (1.3, -0.2), (2.0, 0.0)] {
                let p = params(a, t);
                for o in options {
                    let m = assemble_operator_matrix(&g, &p, o)?;
                    for _ in 0..20 {
                        let u =
                            StateVector((0..g.n()).map(|_| rng.random_range(-1.0..1.0)).collect());
                        let dense = m.apply(&u)?;
                        let free = if p.is_classical() {
                            crate::operator::classical_laplacian_apply(
                                &u,
                                &g,
                                &GhostPolicy::Projection,
                            )?
                        } else {
                            QuadratureOperator::new(g, p, o)?.apply(&u, &GhostPolicy::Projection)?
                        };
                        worst = worst.max(max_abs_diff(&dense, &free) / dense.max_abs());
                    }
                }
            }
            Ok(Check::new(
                "matrix vs matrix-free",
                worst <= 1e-12,
                format!("max relative = {worst:e}"),
            ))
        })(),
    ));

    for (a, t) in ORACLE_PARAMS {
        let name = format!("spectral oracle ({a}, {t})");
        checks.push(Check::from_result(
            name.clone(),
            (|| {
                let p = params(a, t);
                let sweep = |o: QuadratureOptions| {
                    ORACLE_MESHES
                        .iter()
                        .map(|&n| oracle_error(&p, n, o))
                        .collect::<Result<Vec<f64>>>()
                };
                let show = |e: &[f64]| {
                    e.iter()
                        .map(|e| format!("{e:.3e}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                let errs = sweep(ORACLE_OPTIONS)?;
                let untailed = sweep(QuadratureOptions::corrected())?;
                let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
                let last = errs[errs.len() - 1];
                Ok(Check::new(
                    name.clone(),
                    decreasing && last <= 0.05,
                    format!(
                        "relative errors over n = {ORACLE_MESHES:?}: {} (without tail term: {})",
                        show(&errs),
                        show(&untailed)
                    ),
                ))
            })(),
        ));
    }
    GroupReport {
        name: "operator",
        checks,
    }
}

/// Relative L-infinity gap between a Grünwald-Letnikov backend (weighted
/// second-order form, or the plain shifted one) and the quadrature backend
/// for the Gaussian, on `|x| <= b/2`.
pub fn grunwald_gap(alpha: f64, n: usize, weighted: bool) -> Result<f64> {
    let g = Grid1D::new(30.0, n)?;
    let p = params(alpha, 0.0);
    let u = g.sample(gaussian);
    let gl = if weighted {
        grunwald_letnikov_weighted_apply(&u, &g, &p)?
    } else {
        grunwald_letnikov_apply(&u, &g, &p)?
    };
    let quad =
        QuadratureOperator::new(g, p, ORACLE_OPTIONS)?.apply(&u, &GhostPolicy::Projection)?;
    let inner: Vec<usize> = (0..n).filter(|&k| g.x(k).abs() <= g.b() / 2.0).collect();
    let err = inner
        .iter()
        .map(|&k| (gl[k] - quad[k]).abs())
        .fold(0.0, f64::max);
    let scale = inner.iter().map(|&k| quad[k].abs()).fold(0.0, f64::max);
    Ok(err / scale)
}

pub fn check_grunwald() -> GroupReport {
    let checks = [1.2, 1.5, 1.8]
        .into_iter()
        .map(|alpha| {
            let name = format!("GL vs quadrature alpha = {alpha}");
            Check::from_result(
                name.clone(),
                grunwald_gap(alpha, 1601, true).and_then(|gap| {
                    let shifted = grunwald_gap(alpha, 1601, false)?;
                    Ok(Check::new(
                        name.clone(),
                        gap <= 0.05,
                        format!(
                            "relative gap = {gap:.3e} (first-order shifted form: {shifted:.3e})"
                        ),
                    ))
                }),
            )
        })
        .collect();
    GroupReport {
        name: "grunwald-letnikov",
        checks,
    }
}

pub const GREEN_PARAMS: [(f64, f64); 5] = [
    (1.2, 0.0),
    (1.5, 0.3),
    (1.5, -0.5),
    (1.8, 0.1),
    (1.95, -0.05),
];

pub fn check_green() -> GroupReport {
    let mut checks = Vec::new();
    checks.push(Check::from_result(
        "heat kernel limit",
        (|| {
            let g = green_function(&params(2.0, 0.0), 1.0, 200.0, 1 << 14)?;
            let exact: Vec<f64> =
                g.x.iter()
                    .map(|x| (-x * x / 4.0).exp() / (4.0 * std::f64::consts::PI).sqrt())
                    .collect();
            let err = max_abs_diff(&g.density, &exact);
            Ok(Check::new(
                "heat kernel limit",
                err <= 1e-8,
                format!("L-inf = {err:e}"),
            ))
        })(),
    ));
    for (a, t) in GREEN_PARAMS {
        let name = format!("mass and positivity ({a}, {t})");
        checks.push(Check::from_result(
            name.clone(),
            (|| {
                let p = params(a, t);
                let (window, k_modes) = auto_resolution(&p, &[1.0])?;
                let g = green_function(&p, 1.0, window, k_modes)?;
                let (mass, min) = (g.mass(), g.min());
                Ok(Check::new(
                    name.clone(),
                    (mass - 1.0).abs() <= 1e-3 && min >= -1e-8,
                    format!(
                        "window = {window:.0}, K = {k_modes}, mass = {mass:.12}, min = {min:e}"
                    ),
                ))
            })(),
        ));
    }
    checks.push(Check::from_result(
        "semigroup",
        (|| {
            let p = params(1.5, 0.3);
            let (window, k_modes) = auto_resolution(&p, &[0.5, 1.0])?;
            let half: GreenFunction = green_function(&p, 0.5, window, k_modes)?;
            let full = green_function(&p, 1.0, window, k_modes)?;
            let conv = half.convolve(&half)?;
            let err = max_abs_diff(&conv, &full.density);
            Ok(Check::new(
                "semigroup",
                err <= 1e-4,
                format!(
                    "G(0.5) * G(0.5) vs G(1): L-inf = {err:e} (peak {:.4})",
                    max_abs(&full.density)
                ),
            ))
        })(),
    ));
    GroupReport {
        name: "green",
        checks,
    }
}

pub fn check_manifest() -> GroupReport {
    let check = (|| {
        let cfg = RunConfig {
            b: 10.0,
            n: 41,
            t_final: 0.2,
            snapshots: 3,
            ..Default::default()
        };
        let s = cfg.validate()?;
        let ic = make_ic(&s.ic, &s.grid);
        let res = integrate(
            &ic,
            &s.schedule,
            &s.stepper,
            &s.grid,
            &s.params,
            s.options,
            &s.nl,
        )?;
        let text = Manifest::new(&cfg, &res, None, None).to_json();
        let parsed: serde_json::Value = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(e) => return Ok(Check::new("manifest schema", false, e.to_string())),
        };
        Ok(match check_manifest_schema(&parsed) {
            Ok(()) => Check::new("manifest schema", true, "all required fields present"),
            Err(m) => Check::new("manifest schema", false, m),
        })
    })();
    GroupReport {
        name: "manifest",
        checks: vec![Check::from_result("manifest schema", check)],
    }
}

/// Every group, in order.
pub fn run_all() -> Vec<GroupReport> {
    vec![
        check_coefficients(),
        check_operator(),
        check_grunwald(),
        check_green(),
        check_manifest(),
    ]
}
