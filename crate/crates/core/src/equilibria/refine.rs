//! Newton refinement of the defining system, generic over the scalar type.

use crate::model::{residual_jacobian, residuals_at};
use crate::real::Real;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` for an exactly singular pivot.
pub fn solve_linear<R: Real, const N: usize>(mut a: [[R; N]; N], mut b: [R; N]) -> Option<[R; N]> {
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() == R::zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [R::zero(); N];
    for row in (0..N).rev() {
        let mut acc = b[row];
        for k in row + 1..N {
            acc = acc - a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

fn max_abs<R: Real>(v: &[R; 4]) -> R {
    v.iter().fold(R::zero(), |acc, x| acc.max(x.abs()))
}

/// Newton iteration on `(omega, c, x3, x4)` for the defining system at `m`.
///
/// Stops after `max_iter` steps or as soon as a step fails to reduce the
/// largest residual, returning the best iterate seen.
pub fn newton_polish<R: Real>(m: R, unknowns: [R; 4], max_iter: usize) -> [R; 4] {
    let eval = |u: &[R; 4]| residuals_at(m, u[0], u[1], u[2], u[3]);
    let mut best = unknowns;
    let mut best_norm = max_abs(&eval(&best));
    for _ in 0..max_iter {
        let r = eval(&best);
        let jac = residual_jacobian(m, best[0], best[1], best[2], best[3]);
        let Some(step) = solve_linear(jac, r.map(|v| -v)) else {
            break;
        };
        let next: [R; 4] = std::array::from_fn(|i| best[i] + step[i]);
        let norm = max_abs(&eval(&next));
        if !(norm < best_norm) {
            break;
        }
        best = next;
        best_norm = norm;
    }
    best
}
