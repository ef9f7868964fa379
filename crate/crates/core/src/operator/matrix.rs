use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, StateVector};
use crate::params::FractionalParams;

use super::quadrature::{QuadratureOperator, QuadratureOptions};

/// Dense `n x n` discretization of `D^alpha_theta` with projection ghosts
/// folded into the boundary columns. At `alpha = 2` this is the classical
/// second difference.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: DMatrix<f64>,
    params: FractionalParams,
    grid: Grid1D,
    options: QuadratureOptions,
}

impl OperatorMatrix {
    pub fn assemble(
        grid: Grid1D,
        params: FractionalParams,
        options: QuadratureOptions,
    ) -> Result<Self> {
        let n = grid.n();
        let rows: Vec<Vec<f64>> = if params.is_classical() {
            let inv_h2 = 1.0 / (grid.h() * grid.h());
            (0..n)
                .map(|i| {
                    let mut row = vec![0.0; n];
                    row[i.saturating_sub(1)] += inv_h2;
                    row[(i + 1).min(n - 1)] += inv_h2;
                    row[i] -= 2.0 * inv_h2;
                    row
                })
                .collect()
        } else {
            let op = QuadratureOperator::new(grid, params, options)?;
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut row = vec![0.0; n];
                    op.row_coefficients(i, &mut row);
                    row
                })
                .collect()
        };
        let entries = DMatrix::from_row_iterator(n, n, rows.into_iter().flatten());
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("operator matrix"));
        }
        Ok(Self {
            entries,
            params,
            grid,
            options,
        })
    }

    /// Wrap an arbitrary matrix (mostly for tests of the steppers).
    pub fn from_entries(
        entries: DMatrix<f64>,
        grid: Grid1D,
        params: FractionalParams,
    ) -> Result<Self> {
        if entries.nrows() != grid.n() || entries.ncols() != grid.n() {
            return Err(Error::DimensionMismatch {
                expected: grid.n(),
                got: entries.nrows(),
            });
        }
        Ok(Self {
            entries,
            params,
            grid,
            options: QuadratureOptions::default(),
        })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn params(&self) -> &FractionalParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn options(&self) -> QuadratureOptions {
        self.options
    }

    pub fn tail_correction(&self) -> bool {
        self.options.tail_correction
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn apply(&self, u: &StateVector) -> Result<StateVector> {
        u.check_len(&self.grid)?;
        let v = &self.entries * DVector::from_column_slice(u);
        Ok(StateVector(v.as_slice().to_vec()))
    }

    /// Largest `|sum_j A_ij|` relative to the largest entry of the matrix.
    pub fn max_relative_row_sum(&self) -> f64 {
        let scale = self.entries.amax();
        if scale == 0.0 {
            return 0.0;
        }
        self.entries
            .row_iter()
            .map(|row| row.iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
            / scale
    }
}

pub fn assemble_operator_matrix(
    grid: &Grid1D,
    params: &FractionalParams,
    options: QuadratureOptions,
) -> Result<OperatorMatrix> {
    OperatorMatrix::assemble(*grid, *params, options)
}
