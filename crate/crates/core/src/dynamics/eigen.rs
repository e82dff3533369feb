//! Eigenvalues of small dense real matrices: balancing, Householder reduction
//! to Hessenberg form, then the Francis double-shift QR iteration.
//!
//! The routines are generic over [`Real`], so the same iteration runs in
//! double-double precision when an eigenvalue sits in a nontrivial Jordan
//! block and `f64` would only resolve it to the square root of its precision.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::real::Real;
use crate::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 32;

const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// All eigenvalues of `mat`, sorted by real part and then imaginary part.
pub fn dense_eigenvalues(mat: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::Domain(format!(
            "matrix is {}x{}, not square",
            mat.nrows(),
            mat.ncols()
        )));
    }
    let rows = (0..mat.nrows())
        .map(|i| (0..mat.ncols()).map(|j| mat[(i, j)]).collect())
        .collect();
    eigenvalues_in(rows)
}

/// All eigenvalues of the square matrix given by `rows`, computed in `R` and
/// rounded to `f64`; sorted as in [`dense_eigenvalues`].
pub fn eigenvalues_in<R: Real>(mut a: Vec<Vec<R>>) -> Result<Vec<Complex64>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Domain("matrix rows have inconsistent lengths".into()));
    }
    if n > MAX_DIM {
        return Err(Error::Domain(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    if a.iter().flatten().any(|v| !v.to_f64().is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    balance(&mut a);
    hessenberg(&mut a);
    let mut ev = hqr(&mut a)?;
    ev.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    Ok(ev)
}

/// Diagonal similarity by powers of two that evens out row and column norms.
fn balance<R: Real>(a: &mut [Vec<R>]) {
    const RADIX: f64 = 2.0;
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                c += a[j][i].to_f64().abs();
                r += a[i][j].to_f64().abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let (down, up) = (R::from_f64(1.0 / f), R::from_f64(f));
                for j in 0..n {
                    a[i][j] = a[i][j] * down;
                }
                for row in a.iter_mut() {
                    row[i] = row[i] * up;
                }
            }
        }
    }
}

fn sum<R: Real>(it: impl Iterator<Item = R>) -> R {
    it.fold(R::zero(), |acc, v| acc + v)
}

fn hessenberg<R: Real>(a: &mut [Vec<R>]) {
    let n = a.len();
    let two = R::from_f64(2.0);
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<R> = (k + 1..n).map(|i| a[i][k]).collect();
        let norm = sum(v.iter().map(|&x| x * x)).sqrt();
        if norm == R::zero() {
            continue;
        }
        let alpha = if v[0] > R::zero() { -norm } else { norm };
        v[0] = v[0] - alpha;
        let vnorm = sum(v.iter().map(|&x| x * x)).sqrt();
        if vnorm == R::zero() {
            continue;
        }
        for x in v.iter_mut() {
            *x = *x / vnorm;
        }
        for j in 0..n {
            let s = sum(v.iter().enumerate().map(|(i, &vi)| vi * a[k + 1 + i][j]));
            for (i, &vi) in v.iter().enumerate() {
                a[k + 1 + i][j] = a[k + 1 + i][j] - two * vi * s;
            }
        }
        for row in a.iter_mut() {
            let s = sum(v.iter().enumerate().map(|(j, &vj)| row[k + 1 + j] * vj));
            for (j, &vj) in v.iter().enumerate() {
                row[k + 1 + j] = row[k + 1 + j] - two * s * vj;
            }
        }
        for row in a.iter_mut().skip(k + 2) {
            row[k] = R::zero();
        }
    }
}

fn sign<R: Real>(a: R, b: R) -> R {
    if b >= R::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

fn complex<R: Real>(re: R, im: R) -> Complex64 {
    Complex64::new(re.to_f64(), im.to_f64())
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn hqr<R: Real>(a: &mut [Vec<R>]) -> Result<Vec<Complex64>> {
    let zero = R::zero();
    let n = a.len() as isize;
    let mut out = vec![Complex64::new(0.0, 0.0); n as usize];
    let mut anorm = zero;
    for i in 0..n as usize {
        for j in i.saturating_sub(1)..n as usize {
            anorm = anorm + a[i][j].abs();
        }
    }
    let mut nn = n - 1;
    let mut t = zero;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 1 {
                let (lu, lm) = (l as usize, l as usize - 1);
                let mut s = a[lm][lm].abs() + a[lu][lu].abs();
                if s == zero {
                    s = anorm;
                }
                if a[lu][lm].abs() + s == s {
                    a[lu][lm] = zero;
                    break;
                }
                l -= 1;
            }
            let nu = nn as usize;
            let mut x = a[nu][nu];
            if l == nn {
                out[nu] = complex(x + t, zero);
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nn - 1 {
                let pp = R::from_f64(0.5) * (y - x);
                let qq = pp * pp + w;
                let mut z = qq.abs().sqrt();
                x = x + t;
                if qq >= zero {
                    z = pp + sign(z, pp);
                    let hi = x + z;
                    let lo = if z != zero { x - w / z } else { hi };
                    out[nu - 1] = complex(hi, zero);
                    out[nu] = complex(lo, zero);
                } else {
                    out[nu - 1] = complex(x + pp, -z);
                    out[nu] = complex(x + pp, z);
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITER_PER_EIGENVALUE {
                return Err(Error::NonConvergence(format!(
                    "QR iteration stalled with {} eigenvalues left",
                    nn + 1
                )));
            }
            if its == 10 || its == 20 {
                // exceptional shift
                t = t + x;
                for (i, row) in a.iter_mut().enumerate().take(nu + 1) {
                    row[i] = row[i] - x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = R::from_f64(0.75) * s;
                y = x;
                w = R::from_f64(-0.4375) * s * s;
            }
            its += 1;
            let lu = l as usize;
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let s = y - z;
                p = (rr * s - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - s;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p = p / s;
                q = q / s;
                r = r / s;
                if m == lu {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = zero;
                if i != m + 2 {
                    a[i][i - 3] = zero;
                }
            }
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k + 1 != nu { a[k + 2][k - 1] } else { zero };
                    x = p.abs() + q.abs() + r.abs();
                    if x != zero {
                        p = p / x;
                        q = q / x;
                        r = r / x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != zero {
                    if k == m {
                        if l as usize != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p = p + s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q = q / p;
                    r = r / p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k + 1 != nu {
                            pp = pp + r * a[k + 2][j];
                            a[k + 2][j] = a[k + 2][j] - pp * z;
                        }
                        a[k + 1][j] = a[k + 1][j] - pp * y;
                        a[k][j] = a[k][j] - pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for row in a.iter_mut().take(mmin + 1).skip(lu) {
                        let mut pp = x * row[k] + y * row[k + 1];
                        if k + 1 != nu {
                            pp = pp + z * row[k + 2];
                            row[k + 2] = row[k + 2] - pp * r;
                        }
                        row[k + 1] = row[k + 1] - pp * q;
                        row[k] = row[k] - pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(out)
}
