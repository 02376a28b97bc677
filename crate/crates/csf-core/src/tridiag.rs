//! Tridiagonal and cyclic-tridiagonal solvers for the implicit flow steps.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

const PIVOT_TOL: f64 = 1e-14;

/// Thomas algorithm. `lower` and `upper` have length `n - 1`, `diag` and
/// `rhs` length `n`. Inputs are consumed as scratch.
pub(crate) fn solve(
    lower: &[f64],
    diag: &mut [f64],
    upper: &[f64],
    rhs: &mut [f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    debug_assert!(lower.len() == n - 1 && upper.len() == n - 1 && rhs.len() == n);
    for i in 1..n {
        let pivot = diag[i - 1];
        if math::fabs(pivot) < PIVOT_TOL {
            return Err(Error::SolverSingular);
        }
        let m = lower[i - 1] / pivot;
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if math::fabs(diag[n - 1]) < PIVOT_TOL {
        return Err(Error::SolverSingular);
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    }
    Ok(x)
}

/// Cyclic tridiagonal system with corner entries `corner_lo` (row 0,
/// col n-1) and `corner_hi` (row n-1, col 0), solved by the
/// Sherman-Morrison correction of two Thomas solves.
pub(crate) fn solve_cyclic(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    corner_lo: f64,
    corner_hi: f64,
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    debug_assert!(n >= 3);
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] = diag[0] - gamma;
    d[n - 1] = diag[n - 1] - corner_lo * corner_hi / gamma;

    let mut r1 = rhs.to_vec();
    let mut d1 = d.clone();
    let y = solve(lower, &mut d1, upper, &mut r1)?;

    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = corner_hi;
    let z = solve(lower, &mut d, upper, &mut u)?;

    let denom = 1.0 + z[0] + corner_lo * z[n - 1] / gamma;
    if math::fabs(denom) < PIVOT_TOL {
        return Err(Error::SolverSingular);
    }
    let factor = (y[0] + corner_lo * y[n - 1] / gamma) / denom;
    Ok(y.iter().zip(z.iter()).map(|(yi, zi)| yi - factor * zi).collect())
}
