use fracwave::diagnostics::green_function;
use fracwave::timestep::{integrate, SnapshotSchedule, StepperConfig};
use fracwave::{validate_params, Grid1D, QuadratureOptions, Reaction, StateVector};

/// `f ≡ 0`: pure fractional diffusion.
#[derive(Clone)]
struct NoReaction;

impl Reaction for NoReaction {
    fn f(&self, _: f64) -> f64 {
        0.0
    }
    fn df(&self, _: f64) -> f64 {
        0.0
    }
}

/// Evolve a discrete delta to `t = 1` with the spectral stepper and compare
/// with the kernel sampled directly on the same periodic window.
fn delta_vs_kernel(alpha: f64, theta: f64) -> f64 {
    let p = validate_params(alpha, theta).unwrap();
    // smallest power-of-two window at spacing 1/4 that passes the boundary guard
    let (window, k_modes, g) = (0..8)
        .map(|k| 64.0 * 2f64.powi(k))
        .find_map(|w| {
            let k_modes = (4.0 * w) as usize;
            green_function(&p, 1.0, w, k_modes)
                .ok()
                .map(|g| (w, k_modes, g))
        })
        .expect("a window within 2^13");
    let grid = Grid1D::new(window / 2.0, k_modes + 1).unwrap();
    let mut ic = StateVector::zeros(grid.n());
    ic[grid.center()] = 1.0 / grid.h();
    // backward Euler per mode: the error is about 0.2 dt in L-inf
    let cfg = StepperConfig::spectral_imex(2.5e-6);
    let schedule = SnapshotSchedule::new(vec![0.0, 1.0]).unwrap();
    let r = integrate(
        &ic,
        &schedule,
        &cfg,
        &grid,
        &p,
        QuadratureOptions::default(),
        &NoReaction,
    )
    .unwrap();
    let u = r.last();
    println!("alpha {alpha}, theta {theta}: window {window}, {k_modes} modes");
    g.density
        .iter()
        .zip(u.iter())
        .fold(0.0f64, |e, (a, b)| e.max((a - b).abs()))
}

#[test]
fn delta_evolves_into_the_kernel() {
    let err = delta_vs_kernel(1.8, 0.1);
    println!("L-inf error {err:e}");
    assert!(err <= 1e-6, "{err}");
}

#[test]
fn skewed_delta_evolves_into_the_kernel() {
    let err = delta_vs_kernel(1.6, 0.3);
    println!("L-inf error {err:e}");
    assert!(err <= 1e-6, "{err}");
}
