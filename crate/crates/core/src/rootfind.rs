//! Real roots of the low-degree polynomials used by the solver.
//!
//! Everything here is deterministic: roots are isolated between critical
//! points (or on a scan grid) and refined with a bisection-safeguarded Newton
//! iteration.

use crate::{Error, Result};

/// Coefficients below `DEGENERACY_REL * max|coeff|` are treated as zero when
/// determining the degree.
pub const DEGENERACY_REL: f64 = 1e-13;

/// Cap on Newton steps in [`bracketed_root`]; bisection continues afterwards.
pub const NEWTON_MAX_ITER: usize = 50;

/// Roots closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-10;

/// A real polynomial with coefficients stored in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
    degree: Option<usize>,
}

impl RealPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let degree = thresholded_degree(&coeffs);
        Self { coeffs, degree }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree after thresholding; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc: f64, c| acc.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(vec![]);
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + other.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Coefficients truncated to the thresholded degree.
    fn trimmed(&self) -> &[f64] {
        match self.degree {
            Some(d) => &self.coeffs[..=d],
            None => &[],
        }
    }

    /// All real roots, ascending.
    ///
    /// Roots are isolated between consecutive real critical points (found
    /// recursively from the derivative) and refined with [`bracketed_root`].
    /// A critical point where the polynomial vanishes to rounding is reported
    /// as a tangential root.
    pub fn real_roots(&self) -> Result<Vec<f64>> {
        let degree = self
            .degree
            .ok_or_else(|| Error::DegeneratePolynomial("zero polynomial".into()))?;
        let c = self.trimmed();
        match degree {
            0 => Ok(vec![]),
            1 => Ok(vec![-c[0] / c[1]]),
            2 => quadratic_real_roots(c[2], c[1], c[0]),
            _ => {
                let trimmed = RealPolynomial::new(c.to_vec());
                let bound = trimmed.cauchy_bound();
                let critical: Vec<f64> = trimmed
                    .derivative()
                    .real_roots()?
                    .into_iter()
                    .filter(|x| x.abs() < bound)
                    .collect();
                let mut knots = Vec::with_capacity(critical.len() + 2);
                knots.push(-bound);
                knots.extend(critical.iter().copied());
                knots.push(bound);

                let fdf = |x: f64| trimmed.eval_with_derivative(x);
                let mut roots = Vec::new();
                for w in knots.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let (fa, fb) = (trimmed.eval(a), trimmed.eval(b));
                    if fa == 0.0 {
                        roots.push(a);
                    } else if fa * fb < 0.0 {
                        let tol = 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
                        roots.push(bracketed_root_with_derivative(fdf, a, b, tol)?);
                    }
                }
                for &x in &critical {
                    let scale: f64 = c
                        .iter()
                        .enumerate()
                        .map(|(k, ck)| ck.abs() * x.abs().powi(k as i32))
                        .sum();
                    let near_existing = roots.iter().any(|r| (r - x).abs() <= 1e-6 * x.abs().max(1.0));
                    if trimmed.eval(x).abs() <= 64.0 * f64::EPSILON * scale && !near_existing {
                        roots.push(x);
                    }
                }
                Ok(sorted_unique(roots))
            }
        }
    }

    /// `1 + max_k |a_k / a_n|`; every real root lies strictly inside.
    fn cauchy_bound(&self) -> f64 {
        let c = self.trimmed();
        let lead = c[c.len() - 1];
        1.0 + c[..c.len() - 1]
            .iter()
            .fold(0.0, |acc: f64, a| acc.max((a / lead).abs()))
    }
}

fn thresholded_degree(coeffs: &[f64]) -> Option<usize> {
    let max = coeffs.iter().fold(0.0, |acc: f64, c| acc.max(c.abs()));
    if max == 0.0 {
        return None;
    }
    coeffs.iter().rposition(|c| c.abs() >= DEGENERACY_REL * max)
}

fn sorted_unique(mut roots: Vec<f64>) -> Vec<f64> {
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= DEDUP_TOL);
    roots
}

/// Real roots of `a x^2 + b x + c`, ascending.
///
/// Uses the cancellation-free form of the quadratic formula. When `|a|` is
/// negligible relative to the other coefficients the linear equation is solved
/// instead, so a structural degree drop is handled exactly.
pub fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Err(Error::DegeneratePolynomial("zero quadratic".into()));
    }
    if a.abs() < DEGENERACY_REL * scale {
        if b.abs() < DEGENERACY_REL * scale {
            return Ok(vec![]);
        }
        return Ok(vec![-c / b]);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(vec![]);
    }
    if disc == 0.0 {
        return Ok(vec![-b / (2.0 * a)]);
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = if q == 0.0 {
        // b = 0 and c = 0
        vec![0.0]
    } else {
        vec![q / a, c / q]
    };
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Real roots of a cubic given by ascending coefficients `[c0, c1, c2, c3]`.
pub fn cubic_real_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    let p = RealPolynomial::new(coeffs.to_vec());
    if p.degree() != Some(3) {
        return Err(Error::DegeneratePolynomial(format!(
            "expected a cubic, got degree {:?}",
            p.degree()
        )));
    }
    p.real_roots()
}

/// Root of `f` inside `[lo, hi]` where `f` changes sign.
///
/// Newton steps use the divided-difference slope of the last two iterates and
/// fall back to bisection whenever a step leaves the bracket or stalls. The
/// returned root sits inside a sign-change bracket no wider than `tol`.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    hybrid_root(|x| (f(x), None), lo, hi, tol)
}

/// As [`bracketed_root`], with an exact derivative supplied by `fdf`.
pub fn bracketed_root_with_derivative<F: Fn(f64) -> (f64, f64)>(
    fdf: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    hybrid_root(
        |x| {
            let (v, d) = fdf(x);
            (v, Some(d))
        },
        lo,
        hi,
        tol,
    )
}

fn hybrid_root<F: Fn(f64) -> (f64, Option<f64>)>(eval: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (fa, _) = eval(a);
    let (fb, _) = eval(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    let neg_at_a = fa < 0.0;

    // current iterate and the previous one, for the secant slope
    let (mut x, mut fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    let (mut x_prev, mut f_prev) = if fa.abs() < fb.abs() { (b, fb) } else { (a, fa) };
    let mut dfx = eval(x).1;
    let mut newton_steps = 0;
    let mut width_before = b - a;

    for _ in 0..2000 {
        if b - a <= tol {
            break;
        }
        let slope = match dfx {
            Some(d) => d,
            None => (fx - f_prev) / (x - x_prev),
        };
        let mut candidate = if newton_steps < NEWTON_MAX_ITER && slope.is_finite() && slope != 0.0 {
            newton_steps += 1;
            x - fx / slope
        } else {
            0.5 * (a + b)
        };
        if !(candidate > a && candidate < b) {
            candidate = 0.5 * (a + b);
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // bracket is down to adjacent floats
            break;
        }

        // a Newton step that converged: confirm with a tight bracket
        if (candidate - x).abs() < 0.5 * tol {
            let left = (candidate - 0.5 * tol).max(a);
            let right = (candidate + 0.5 * tol).min(b);
            let (fl, _) = eval(left);
            let (fr, _) = eval(right);
            if fl == 0.0 {
                return Ok(left);
            }
            if fr == 0.0 {
                return Ok(right);
            }
            if (fl < 0.0) == neg_at_a && (fr < 0.0) != neg_at_a {
                a = left;
                b = right;
                let (fc, _) = eval(candidate);
                return Ok(if fc.abs() <= fl.abs().min(fr.abs()) {
                    candidate
                } else if fl.abs() < fr.abs() {
                    left
                } else {
                    right
                }
                .clamp(a, b));
            }
        }

        let (fc, dfc) = eval(candidate);
        if fc == 0.0 {
            return Ok(candidate);
        }
        if (fc < 0.0) == neg_at_a {
            a = candidate;
        } else {
            b = candidate;
        }
        x_prev = x;
        f_prev = fx;
        x = candidate;
        fx = fc;
        dfx = dfc;

        // force a bisection if the bracket has not halved over this step
        if b - a > 0.5 * width_before {
            let mid = 0.5 * (a + b);
            let (fm, dfm) = eval(mid);
            if fm == 0.0 {
                return Ok(mid);
            }
            if (fm < 0.0) == neg_at_a {
                a = mid;
            } else {
                b = mid;
            }
            x_prev = x;
            f_prev = fx;
            x = mid;
            fx = fm;
            dfx = dfm;
        }
        width_before = b - a;
    }
    let (fa, _) = eval(a);
    let (fb, _) = eval(b);
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

/// Sign-change roots of `p` on `[lo, hi]` found on a uniform grid of `grid`
/// points and refined with [`bracketed_root_with_derivative`].
///
/// Roots of even multiplicity produce no sign change and are not reported.
pub fn real_roots_by_scan(p: &RealPolynomial, lo: f64, hi: f64, grid: usize) -> Vec<f64> {
    let grid = grid.max(2);
    let step = (hi - lo) / (grid - 1) as f64;
    let xs: Vec<f64> = (0..grid)
        .map(|k| if k + 1 == grid { hi } else { lo + k as f64 * step })
        .collect();
    let mut roots = Vec::new();
    let mut prev = p.eval(xs[0]);
    if prev == 0.0 {
        roots.push(xs[0]);
    }
    for w in xs.windows(2) {
        let next = p.eval(w[1]);
        if next == 0.0 {
            roots.push(w[1]);
        } else if prev * next < 0.0 {
            let tol = 4.0 * f64::EPSILON * w[0].abs().max(w[1].abs()).max(1.0);
            if let Ok(r) = bracketed_root_with_derivative(|x| p.eval_with_derivative(x), w[0], w[1], tol) {
                roots.push(r);
            }
        }
        prev = next;
    }
    sorted_unique(roots)
}
