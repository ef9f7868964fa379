use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::error::{Error, Result};
use crate::grid::StateVector;
use crate::operator::OperatorMatrix;
use crate::reaction::Reaction;

/// Semi-implicit backward Euler, `(I - dt A) u_new = u + dt f(u)`, with the
/// LU factorization of `I - dt A` cached per step size.
pub struct SemiImplicitEuler<'a> {
    matrix: &'a OperatorMatrix,
    cache: Vec<(u64, LU<f64, Dyn, Dyn>)>,
}

const CACHE_SIZE: usize = 4;

impl<'a> SemiImplicitEuler<'a> {
    pub fn new(matrix: &'a OperatorMatrix) -> Self {
        Self {
            matrix,
            cache: Vec::new(),
        }
    }

    /// Number of distinct factorizations currently held.
    pub fn factorizations(&self) -> usize {
        self.cache.len()
    }

    fn factor(&mut self, dt: f64) -> Result<usize> {
        let key = dt.to_bits();
        if let Some(pos) = self.cache.iter().position(|(k, _)| *k == key) {
            return Ok(pos);
        }
        let n = self.matrix.n();
        let system = DMatrix::<f64>::identity(n, n) - self.matrix.entries() * dt;
        let lu = system.lu();
        if !lu.is_invertible() {
            return Err(Error::SingularSystem { dt });
        }
        if self.cache.len() == CACHE_SIZE {
            self.cache.remove(0);
        }
        self.cache.push((key, lu));
        Ok(self.cache.len() - 1)
    }

    pub fn step<R: Reaction + ?Sized>(
        &mut self,
        u: &StateVector,
        dt: f64,
        nl: &R,
    ) -> Result<StateVector> {
        if !(dt > 0.0) {
            return Err(Error::Config(format!(
                "time step must be positive, got {dt}"
            )));
        }
        u.check_len(self.matrix.grid())?;
        let idx = self.factor(dt)?;
        let rhs = DVector::from_iterator(u.len(), u.iter().map(|&v| v + dt * nl.f(v)));
        let sol = self.cache[idx]
            .1
            .solve(&rhs)
            .ok_or(Error::SingularSystem { dt })?;
        Ok(StateVector(sol.as_slice().to_vec()))
    }
}

/// One uncached semi-implicit Euler step.
pub fn step_semi_implicit<R: Reaction + ?Sized>(
    u: &StateVector,
    dt: f64,
    matrix: &OperatorMatrix,
    nl: &R,
) -> Result<StateVector> {
    SemiImplicitEuler::new(matrix).step(u, dt, nl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::operator::{assemble_operator_matrix, QuadratureOptions};
    use crate::params::validate_params;
    use crate::reaction::BistableCubic;

    struct NoReaction;
    impl Reaction for NoReaction {
        fn f(&self, _: f64) -> f64 {
            0.0
        }
        fn df(&self, _: f64) -> f64 {
            0.0
        }
    }

    fn setup() -> (Grid1D, OperatorMatrix) {
        let g = Grid1D::new(30.0, 181).unwrap();
        let p = validate_params(1.8, 0.1).unwrap();
        let a = assemble_operator_matrix(&g, &p, QuadratureOptions::default()).unwrap();
        (g, a)
    }

    #[test]
    fn constants_are_fixed_points() {
        let (g, a) = setup();
        let u = StateVector::constant(g.n(), 0.37);
        let v = step_semi_implicit(&u, 0.1, &a, &NoReaction).unwrap();
        for x in v.iter() {
            assert!((x - 0.37).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_operator_gives_explicit_euler() {
        let g = Grid1D::new(1.0, 11).unwrap();
        let p = validate_params(1.5, 0.0).unwrap();
        let a = OperatorMatrix::from_entries(DMatrix::zeros(11, 11), g, p).unwrap();
        let nl = BistableCubic::new(0.3).unwrap();
        let u = g.sample(|x| 0.5 + 0.4 * x);
        let v = step_semi_implicit(&u, 0.05, &a, &nl).unwrap();
        for (ui, vi) in u.iter().zip(v.iter()) {
            assert!((vi - (ui + 0.05 * nl.f(*ui))).abs() < 1e-15);
        }
    }

    #[test]
    fn factorization_reused_for_fixed_step() {
        let (g, a) = setup();
        let nl = BistableCubic::new(0.5).unwrap();
        let mut stepper = SemiImplicitEuler::new(&a);
        let mut u = g.sample(|x| 0.5 + 0.5 * (x / 3.0).tanh());
        for _ in 0..5 {
            u = stepper.step(&u, 0.02, &nl).unwrap();
        }
        assert_eq!(stepper.factorizations(), 1);
        stepper.step(&u, 0.01, &nl).unwrap();
        assert_eq!(stepper.factorizations(), 2);
    }

    #[test]
    fn first_order_self_convergence() {
        let (g, a) = setup();
        let nl = BistableCubic::new(0.6).unwrap();
        let ic = g.sample(|x| 0.5 + 0.5 * (x / 2.0).tanh());
        let t_final = 1.0;
        let run = |steps: usize| {
            let dt = t_final / steps as f64;
            let mut st = SemiImplicitEuler::new(&a);
            let mut u = ic.clone();
            for _ in 0..steps {
                u = st.step(&u, dt, &nl).unwrap();
            }
            u
        };
        let reference = run(64 * 40);
        let err = |u: &StateVector| {
            u.iter()
                .zip(reference.iter())
                .fold(0.0f64, |e, (x, y)| e.max((x - y).abs()))
        };
        let e1 = err(&run(40));
        let e2 = err(&run(80));
        let e4 = err(&run(160));
        let order1 = (e1 / e2).log2();
        let order2 = (e2 / e4).log2();
        assert!((order1 - 1.0).abs() < 0.2, "{order1}");
        assert!((order2 - 1.0).abs() < 0.2, "{order2}");
        assert!(e1 / e2 > 1.5 && e1 / e2 < 2.5);
    }
}
