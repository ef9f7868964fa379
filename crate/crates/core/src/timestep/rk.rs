use crate::error::Result;

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights equal the last row of A (FSAL)
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
pub const MIN_FACTOR: f64 = 0.2;
pub const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone)]
pub struct RkStep {
    /// Fifth-order solution if accepted, otherwise the unchanged input.
    pub u_new: Vec<f64>,
    pub dt_used: f64,
    pub dt_next: f64,
    pub accepted: bool,
    /// Scaled error norm; the step is accepted iff it is `<= 1`.
    pub error: f64,
}

/// One attempted Dormand-Prince 5(4) step of `u' = rhs(t, u)`.
///
/// `rhs(t, u, out)` writes the derivative into `out`. The error norm is
/// `max_n |e_n| / (abs_tol + rel_tol max(|u_n|, |u_new_n|))`; the next step
/// is `dt 0.9 err^(-1/5)` clamped to `[0.2 dt, 5 dt]`.
pub fn step_explicit_rk<F>(
    u: &[f64],
    t: f64,
    dt_try: f64,
    rhs: &mut F,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<RkStep>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = u.len();
    let mut k = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    let dt = dt_try;

    rhs(t, u, &mut k[0])?;
    for s in 1..7 {
        for i in 0..n {
            let mut acc = 0.0;
            for (j, a) in A[s].iter().enumerate().take(s) {
                acc += a * k[j][i];
            }
            stage[i] = u[i] + dt * acc;
        }
        let (done, rest) = k.split_at_mut(s);
        let _ = done;
        rhs(t + C[s] * dt, &stage, &mut rest[0])?;
    }
    // after the last stage `stage` holds the fifth-order solution
    let u5 = stage;

    let mut err = 0.0f64;
    for i in 0..n {
        let mut e = 0.0;
        for s in 0..7 {
            e += (B5[s] - B4[s]) * k[s][i];
        }
        let scale = abs_tol + rel_tol * u[i].abs().max(u5[i].abs());
        err = err.max((dt * e).abs() / scale);
    }

    let accepted = err <= 1.0;
    let factor = if err == 0.0 {
        MAX_FACTOR
    } else {
        (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
    };
    let factor = if accepted { factor } else { factor.min(1.0) };
    Ok(RkStep {
        u_new: if accepted { u5 } else { u.to_vec() },
        dt_used: dt,
        dt_next: dt * factor,
        accepted,
        error: err,
    })
}
