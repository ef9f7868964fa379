use crate::error::Result;
use crate::grid::{GhostPolicy, Grid1D, StateVector};

/// Second central difference `(u_{n+1} - 2 u_n + u_{n-1}) / h^2`; the
/// `alpha = 2` backend.
pub fn classical_laplacian_apply(
    u: &StateVector,
    grid: &Grid1D,
    ghosts: &GhostPolicy,
) -> Result<StateVector> {
    u.check_len(grid)?;
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let out = (0..grid.n() as isize)
        .map(|i| {
            let at = |k| ghosts.value(u, grid, k);
            (at(i + 1) - 2.0 * at(i) + at(i - 1)) * inv_h2
        })
        .collect();
    Ok(StateVector(out))
}
