use fracwave::diagnostics::{
    bounds_check, estimate_decay_rate, estimate_speed, monotonicity_violation,
};
use fracwave::io::{IcKind, RunConfig};
use fracwave::timestep::{Method, SimulationResult};
use fracwave::Scheme;
use proptest::prelude::*;

fn run(cfg: &RunConfig) -> SimulationResult {
    cfg.simulate().unwrap()
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    for stepper in [Method::SemiImplicit, Method::ExplicitRk] {
        let cfg = RunConfig {
            stepper,
            t_final: 3.0,
            snapshots: 4,
            ..RunConfig::default()
        };
        let (a, b) = (run(&cfg), run(&cfg));
        for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
            assert_eq!(x.time.to_bits(), y.time.to_bits());
            assert!(x
                .u
                .iter()
                .zip(y.u.iter())
                .all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }
}

#[test]
fn explicit_and_implicit_steppers_agree() {
    let base = RunConfig {
        t_final: 5.0,
        snapshots: 6,
        ..RunConfig::default()
    };
    let fine = run(&RunConfig {
        stepper: Method::ExplicitRk,
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        ..base.clone()
    });
    let coarse = run(&RunConfig { dt: 0.005, ..base });
    let err = fine
        .last()
        .iter()
        .zip(coarse.last().iter())
        .fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
    // first order in dt with a small constant
    assert!(err < 5e-3, "{err}");
}

#[test]
fn step_data_stays_between_constant_barriers() {
    // 0 is a solution and 1.51 a supersolution, so both bound the flow
    for alpha in [1.8, 1.2, 1.01] {
        let r = run(&RunConfig {
            alpha,
            ic: IcKind::Step,
            t_final: 2.0,
            ..RunConfig::default()
        });
        let lo = r
            .snapshots
            .iter()
            .flat_map(|s| s.u.iter().copied())
            .fold(f64::INFINITY, f64::min);
        let hi = r
            .snapshots
            .iter()
            .flat_map(|s| s.u.iter().copied())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            lo >= -1e-12 && hi <= 1.51 + 1e-12,
            "alpha {alpha}: [{lo}, {hi}]"
        );
        // the overshoot above 1 relaxes
        let top = r.last().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(top < 1.2, "alpha {alpha}: {top}");
    }
}

#[test]
fn step_data_decay_rates_are_recorded() {
    // convergence is reported to be slower for small alpha; record, do not order
    let mut rates = Vec::new();
    for alpha in [1.8, 1.01] {
        let r = run(&RunConfig {
            alpha,
            ic: IcKind::Step,
            t_final: 40.0,
            ..RunConfig::default()
        });
        let report = estimate_decay_rate(&r, r.last()).unwrap();
        let kappa = report.decay_rate.expect("fit accepted");
        assert!(kappa > 0.0);
        rates.push((alpha, kappa, report.r_squared));
    }
    println!("step data decay rates (alpha, kappa, R^2): {rates:?}");
}

#[test]
fn balanced_ramp_run_is_bounded_and_monotone() {
    let r = run(&RunConfig::default());
    assert!(bounds_check(&r).within);
    for s in &r.snapshots {
        assert!(monotonicity_violation(&s.u) <= 1e-6);
    }
}

#[test]
fn trapezoid_scheme_gives_the_same_signs() {
    let speed = |theta| {
        let r = run(&RunConfig {
            alpha: 1.5,
            theta,
            t_final: 60.0,
            dt: 0.05,
            snapshots: 31,
            scheme: Scheme::Trapezoid,
            ..RunConfig::default()
        });
        estimate_speed(&r, None, 0.5).unwrap().speed
    };
    assert!(speed(0.2) < 0.0);
    assert!(speed(-0.2) > 0.0);
}

#[test]
fn classical_front_speed_converges_in_dt() {
    let speed = |dt| {
        let r = run(&RunConfig {
            alpha: 2.0,
            theta: 0.0,
            a: 0.6,
            b: 40.0,
            n: 801,
            t_final: 60.0,
            dt,
            snapshots: 61,
            ..RunConfig::default()
        });
        estimate_speed(&r, None, 0.5).unwrap().speed
    };
    let exact = std::f64::consts::SQRT_2 * 0.1;
    let (coarse, fine) = ((speed(0.05) - exact).abs(), (speed(0.01) - exact).abs());
    assert!(fine < coarse && fine / exact < 5e-3, "{coarse} {fine}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    // x -> -x with u -> 1 - u maps (theta, a) to (-theta, 1 - a)
    #[test]
    fn reflection_maps_solutions_to_solutions(
        alpha in 1.2f64..1.95,
        t in -1.0f64..1.0,
        a in 0.3f64..0.7,
    ) {
        let theta = 0.9 * t * alpha.min(2.0 - alpha);
        let cfg = RunConfig { alpha, theta, a, b: 15.0, n: 61, t_final: 2.0, snapshots: 3, ..RunConfig::default() };
        let u = run(&cfg);
        let v = run(&RunConfig { theta: -theta, a: 1.0 - a, ..cfg });
        for (s, r) in u.snapshots.iter().zip(&v.snapshots) {
            for (p, q) in s.u.iter().zip(r.u.iter().rev()) {
                prop_assert!((p - (1.0 - q)).abs() <= 1e-10, "{} vs {}", p, 1.0 - q);
            }
        }
    }
}

#[test]
fn speed_at_two_domain_sizes() {
    // dropping xi > b biases skewed fronts through the truncated drift term,
    // which decays only like b^(1 - alpha); the tail term removes it
    let speed = |b: f64, n: usize, tail_correction: bool| {
        let r = run(&RunConfig {
            alpha: 1.5,
            theta: 0.2,
            b,
            n,
            t_final: 120.0,
            dt: 0.05,
            snapshots: 61,
            tail_correction,
            ..RunConfig::default()
        });
        estimate_speed(&r, None, 0.5).unwrap().speed
    };
    let (t30, t60) = (speed(30.0, 181, true), speed(60.0, 361, true));
    let (p30, p60) = (speed(30.0, 181, false), speed(60.0, 361, false));
    println!("speed at b = 30 / 60: truncated {p30:.6} / {p60:.6}, with tail term {t30:.6} / {t60:.6}");
    assert!((t30 - t60).abs() <= 1e-3 * t60.abs(), "{t30} vs {t60}");
    assert!(p30 < 0.0 && p60 < p30 && t60 < p60);
}
