use std::fmt;
use std::sync::Arc;

use crate::grid::{Grid1D, StateVector};

/// Initial profiles used by the experiments.
#[derive(Clone)]
pub enum InitialCondition {
    /// 0 left of -2, the ramp `x/4 + 1/2` on `[-2, 2]`, 1 right of 2.
    ChenRamp,
    /// `lo` for `x <= 0`, `hi` for `x > 0`.
    Step {
        lo: f64,
        hi: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl InitialCondition {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        InitialCondition::Custom(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialCondition::ChenRamp => {
                if x < -2.0 {
                    0.0
                } else if x <= 2.0 {
                    x / 4.0 + 0.5
                } else {
                    1.0
                }
            }
            InitialCondition::Step { lo, hi } => {
                if x <= 0.0 {
                    *lo
                } else {
                    *hi
                }
            }
            InitialCondition::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialCondition::ChenRamp => write!(f, "ChenRamp"),
            InitialCondition::Step { lo, hi } => write!(f, "Step({lo}, {hi})"),
            InitialCondition::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

pub fn make_ic(variant: &InitialCondition, grid: &Grid1D) -> StateVector {
    grid.sample(|x| variant.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_values() {
        let ic = InitialCondition::ChenRamp;
        assert_eq!(ic.eval(0.0), 0.5);
        assert_eq!(ic.eval(-2.0), 0.0);
        assert_eq!(ic.eval(2.0), 1.0);
        assert_eq!(ic.eval(-29.0), 0.0);
        assert_eq!(ic.eval(1.0), 0.75);
    }

    #[test]
    fn step_values_at_the_walls() {
        let g = Grid1D::new(30.0, 181).unwrap();
        let u = make_ic(&InitialCondition::Step { lo: 0.49, hi: 1.51 }, &g);
        assert_eq!(u[0], 0.49);
        assert_eq!(u[180], 1.51);
        // x = 0 belongs to the left piece
        assert_eq!(u[g.center()], 0.49);
        assert_eq!(u[g.center() + 1], 1.51);
    }

    #[test]
    fn ramp_on_default_grid() {
        let g = Grid1D::new(30.0, 181).unwrap();
        let u = make_ic(&InitialCondition::ChenRamp, &g);
        assert_eq!(u[g.center()], 0.5);
        assert!(u.windows(2).all(|w| w[1] >= w[0]));
    }
}
