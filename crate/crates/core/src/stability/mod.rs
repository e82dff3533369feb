//! Linear stability of collinear relative equilibria.
//!
//! For a collinear solution the scaled stability matrix splits into blocks
//! `±A`, where `A` is the 4×4 matrix of [`a_matrix`]. Two of its eigenvalues
//! (0 and 1) come from the symmetries; the remaining two, `mu1` and `mu2`, are
//! the eigenvalues of the 2×2 restriction [`c_matrix`], and each yields a pair
//! of normalized eigenvalues `±sqrt(mu^2 - 1)`. Everything therefore reduces
//! to the trace `T` and determinant `D` of that restriction.

pub mod series;

use std::fmt;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equilibria::scaled_residual;
use crate::model::{check_collisions, Circulations, Configuration, PAIRS};
use crate::real::Real;
use crate::rootfind::{bracketed_root, real_roots_by_scan, RealPolynomial};
use crate::{Error, Result};

/// Tolerance for placing `(T, D)` on a region boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

fn validate(config: &Configuration) -> Result<()> {
    check_collisions(&config.x)?;
    if config.omega == 0.0 || !config.omega.is_finite() {
        return Err(Error::Domain(format!(
            "angular velocity {} cannot be scaled out",
            config.omega
        )));
    }
    Ok(())
}

fn sq_dist(x: &[f64; 4], i: usize, j: usize) -> f64 {
    (x[i] - x[j]).powi(2)
}

/// `A_ij = -gamma_j / (omega r_ij^2)` off the diagonal, with zero row sums.
pub fn a_matrix(config: &Configuration, circ: &Circulations) -> Result<Matrix4<f64>> {
    validate(config)?;
    let x = &config.x;
    let mut a = Matrix4::zeros();
    for i in 0..4 {
        for j in (0..4).filter(|&j| j != i) {
            a[(i, j)] = -circ.gamma[j] / (config.omega * sq_dist(x, i, j));
        }
        a[(i, i)] = -(0..4).filter(|&j| j != i).map(|j| a[(i, j)]).sum::<f64>();
    }
    Ok(a)
}

/// Basis `(w1, w2)` of the complement of `span{1, x}` used to restrict `A`.
/// Neither vector is orthogonal to the other in the circulation metric.
pub fn restriction_basis(
    config: &Configuration,
    circ: &Circulations,
) -> Result<(Vector4<f64>, Vector4<f64>)> {
    check_collisions(&config.x)?;
    let [x1, x2, x3, x4] = config.x;
    let [g1, g2, g3, g4] = circ.gamma;
    let w1 = Vector4::new(g2 * g3 * (x3 - x2), g1 * g3 * (x1 - x3), g1 * g2 * (x2 - x1), 0.0);
    let w2 = Vector4::new(g2 * g4 * (x4 - x2), g1 * g4 * (x1 - x4), 0.0, g1 * g2 * (x2 - x1));
    Ok((w1, w2))
}

/// Matrix of `A` restricted to `span{w1, w2}`, in that basis.
pub fn c_matrix(config: &Configuration, circ: &Circulations) -> Result<Matrix2<f64>> {
    validate(config)?;
    let [x1, x2, x3, x4] = config.x;
    let [g1, g2, g3, g4] = circ.gamma;
    let x = &config.x;
    let r = |i: usize, j: usize| sq_dist(x, i, j);
    let w = config.omega.recip();
    let c11 = w * ((g1 + g3) / r(0, 2) + (g2 + g3) / r(1, 2) + g4 / r(2, 3) + g3 / ((x3 - x1) * (x3 - x2)));
    let c22 = w * ((g1 + g4) / r(0, 3) + (g2 + g4) / r(1, 3) + g3 / r(2, 3) + g4 / ((x4 - x1) * (x4 - x2)));
    let c21 = -w * (g3 / (x2 - x1)) * ((x3 - x2) / r(0, 3) + (x1 - x3) / r(1, 3) + (x2 - x1) / r(2, 3));
    let c12 = -w * (g4 / (x2 - x1)) * ((x4 - x2) / r(0, 2) + (x1 - x4) / r(1, 2) + (x2 - x1) / r(2, 3));
    Ok(Matrix2::new(c11, c12, c21, c22))
}

/// `T`, `delta` and `D` from circulations, positions and `omega`, in any
/// scalar type.
pub fn invariants_at<R: Real>(gamma: [R; 4], x: [R; 4], omega: R) -> (R, R, R) {
    let r2 = |i: usize, j: usize| {
        let d = x[i] - x[j];
        d * d
    };
    let mut sum = R::zero();
    for &(i, j) in PAIRS.iter() {
        sum = sum + (gamma[i] + gamma[j]) / r2(i, j);
    }
    let t = sum / omega - R::one();

    let g = gamma;
    let mut delta = (g[0] + g[1]) * (g[2] + g[3]) / (r2(0, 1) * r2(2, 3))
        + (g[0] + g[2]) * (g[1] + g[3]) / (r2(0, 2) * r2(1, 3))
        + (g[0] + g[3]) * (g[1] + g[2]) / (r2(0, 3) * r2(1, 2));
    for i in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        for a in 0..3 {
            for b in a + 1..3 {
                let (j, k) = (others[a], others[b]);
                delta = delta + g[i] * (g[i] + g[j] + g[k]) / (r2(i, j) * r2(i, k));
            }
        }
    }
    let d = -t + delta / (omega * omega);
    (t, delta, d)
}

fn invariants(config: &Configuration, circ: &Circulations) -> Result<(f64, f64, f64)> {
    validate(config)?;
    Ok(invariants_at(circ.gamma, config.x, config.omega))
}

/// `T = omega^{-1} sum_{i<j} (gamma_i + gamma_j) / r_ij^2 - 1`.
pub fn trace_t(config: &Configuration, circ: &Circulations) -> Result<f64> {
    invariants(config, circ).map(|v| v.0)
}

/// The pair and triple sum `delta` entering the determinant.
pub fn delta_functional(config: &Configuration, circ: &Circulations) -> Result<f64> {
    check_collisions(&config.x)?;
    Ok(invariants_at(circ.gamma, config.x, 1.0).1)
}

/// `D = -T + omega^{-2} delta`.
pub fn det_d(config: &Configuration, circ: &Circulations) -> Result<f64> {
    invariants(config, circ).map(|v| v.2)
}

/// Eigenvalues of the restriction and the normalized eigenvalues they induce.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NontrivialEigenvalues {
    /// Root of `mu^2 - T mu + D` with the larger real part (the `+` root).
    pub mu1: Complex64,
    pub mu2: Complex64,
    /// `[l1, -l1, l2, -l2]` with `l_k = sqrt(mu_k^2 - 1)` on the principal
    /// branch, normalized to nonnegative real part and then nonnegative
    /// imaginary part.
    pub lambdas: [Complex64; 4],
}

fn canonical(z: Complex64) -> Complex64 {
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        -z
    } else {
        z
    }
}

pub fn nontrivial_eigenvalues(t: f64, d: f64) -> NontrivialEigenvalues {
    let disc = Complex64::new(t * t - 4.0 * d, 0.0).sqrt();
    let mu1 = (Complex64::new(t, 0.0) + disc) / 2.0;
    let mu2 = (Complex64::new(t, 0.0) - disc) / 2.0;
    let lam = |mu: Complex64| canonical((mu * mu - 1.0).sqrt());
    let (l1, l2) = (lam(mu1), lam(mu2));
    NontrivialEigenvalues {
        mu1,
        mu2,
        lambdas: [l1, -l1, l2, -l2],
    }
}

/// Location of `(T, D)` in the trace–determinant plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Both `mu` real with `|mu| < 1`, or `T = 0 < D`: all normalized
    /// eigenvalues imaginary.
    StableRegion,
    /// Both `mu` real with `|mu| > 1`: two real pairs.
    RegionII,
    /// One real pair and one imaginary pair.
    RegionIII,
    /// Complex `mu`: a quartuplet `±alpha ± i beta`.
    RegionIV,
    /// `D = T^2/4`: repeated `mu`.
    BoundaryRepeated,
    /// `mu = ±1`: a nontrivial normalized eigenvalue vanishes.
    BoundaryZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    LinearlyStable,
    SpectrallyStable,
    Unstable,
    Degenerate,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Classifies `(T, D)`. Points within [`BOUNDARY_TOL`] of a boundary are
/// reported as boundaries.
pub fn classify(t: f64, d: f64) -> (Region, Verdict) {
    if (d - (t - 1.0)).abs() <= BOUNDARY_TOL || (d + t + 1.0).abs() <= BOUNDARY_TOL {
        return (Region::BoundaryZero, Verdict::Degenerate);
    }
    let disc = t * t / 4.0 - d;
    if disc.abs() <= BOUNDARY_TOL {
        let verdict = if (t / 2.0).abs() < 1.0 {
            Verdict::SpectrallyStable
        } else {
            Verdict::Unstable
        };
        return (Region::BoundaryRepeated, verdict);
    }
    if disc > 0.0 {
        let s = disc.sqrt();
        let outside = [t / 2.0 + s, t / 2.0 - s]
            .iter()
            .filter(|mu| mu.abs() > 1.0)
            .count();
        match outside {
            0 => (Region::StableRegion, Verdict::LinearlyStable),
            1 => (Region::RegionIII, Verdict::Unstable),
            _ => (Region::RegionII, Verdict::Unstable),
        }
    } else if t.abs() <= BOUNDARY_TOL {
        (Region::StableRegion, Verdict::LinearlyStable)
    } else {
        (Region::RegionIV, Verdict::Unstable)
    }
}

/// `Psi(m) = 64m^6 + 320m^5 + 96m^4 - 220m^3 + 505m^2 + 522m + 9`, whose
/// roots in `(-1, 0)` are where the Group I eigenvalues collide.
pub fn psi_polynomial() -> RealPolynomial {
    RealPolynomial::new(vec![9.0, 522.0, 505.0, -220.0, 96.0, 320.0, 64.0])
}

pub fn psi(m: f64) -> f64 {
    psi_polynomial().eval(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationRoots {
    /// Root closest to -1: Group I loses linear stability here.
    pub m_star: f64,
    /// The other root in `(-1, 0)`: the Group I quartuplet splits into two
    /// real pairs here.
    pub m_c: f64,
    /// All real roots, ascending.
    pub all_roots: Vec<f64>,
}

/// Real roots of `Psi`, located on a grid over `[-10, 0]` and refined to
/// 1e-13.
pub fn psi_bifurcation_roots() -> Result<BifurcationRoots> {
    let p = psi_polynomial();
    let coarse = real_roots_by_scan(&p, -10.0, 0.0, 100_000);
    let step = 10.0 / 99_999.0;
    let roots: Vec<f64> = coarse
        .iter()
        .map(|&r| bracketed_root(|m| p.eval(m), r - step, r + step, 1e-13).unwrap_or(r))
        .collect();
    if roots.len() != 4 {
        return Err(Error::Internal(format!(
            "Psi has {} real roots on [-10, 0]",
            roots.len()
        )));
    }
    let inside: Vec<f64> = roots.iter().copied().filter(|&r| -1.0 < r && r < 0.0).collect();
    if inside.len() != 2 {
        return Err(Error::Internal(format!(
            "Psi has {} roots in (-1, 0)",
            inside.len()
        )));
    }
    Ok(BifurcationRoots {
        m_star: inside[0],
        m_c: inside[1],
        all_roots: roots,
    })
}

/// Analytic stability data for one relative equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    #[serde(rename = "T")]
    pub trace: f64,
    #[serde(rename = "D")]
    pub det: f64,
    pub delta: f64,
    pub mu1: Complex64,
    pub mu2: Complex64,
    pub lambdas: [Complex64; 4],
    pub region: Region,
    pub verdict: Verdict,
}

/// Full stability analysis of a solution at `m`.
///
/// The configuration must satisfy the defining system; anything with a scaled
/// residual above 1e-6 is rejected.
pub fn stability_report(m: f64, solution: &Configuration) -> Result<StabilityReport> {
    let circ = Circulations::new(m);
    validate(solution)?;
    let res = scaled_residual(solution, m);
    if !(res <= 1e-6) {
        return Err(Error::Domain(format!(
            "configuration is not a relative equilibrium at m = {m} (residual {res:e})"
        )));
    }
    let (trace, delta, det) = invariants(solution, &circ)?;
    let ev = nontrivial_eigenvalues(trace, det);
    let (region, verdict) = classify(trace, det);
    Ok(StabilityReport {
        trace,
        det,
        delta,
        mu1: ev.mu1,
        mu2: ev.mu2,
        lambdas: ev.lambdas,
        region,
        verdict,
    })
}
