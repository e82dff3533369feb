//! All collinear relative equilibria for a given `m`.
//!
//! The defining polynomial for `x3` factors through two simpler ones:
//!
//! * `P1(rho; m)`, an even quartic in `rho` (a quadratic in `xi = rho^2`);
//! * `P2(x; rho) = x^3 + rho x^2 - 9x - rho`, whose three roots are the
//!   admissible values of `x3` for that `rho`.
//!
//! Given `x3`, the remaining unknowns follow by elimination: the first two
//! equations are linear in `omega` and `omega * c`, and substituting them into
//! the third leaves a cubic in `x4` (a quartic from the fourth equation when
//! `m = 0`). The symmetry group then maps one solution onto the other five in
//! its orbit.

pub mod refine;
pub mod symmetry;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use symmetry::SymmetryElement;

use crate::model::{
    center_of_vorticity, residual_scales, residuals_at, Circulations, Configuration, Group, Ordering,
    COLLISION_TOL,
};
use crate::rootfind::{
    bracketed_root_with_derivative, cubic_real_roots, quadratic_real_roots, RealPolynomial,
};
use crate::{Error, Result};

/// A solution is accepted when every defining equation vanishes to this
/// tolerance relative to its largest term (or absolutely, for terms below 1).
pub const RESIDUAL_GATE: f64 = 1e-9;

/// Below this `|m|` the solutions are continued from the restricted problem
/// by Newton's method instead of being eliminated.
pub const NEAR_RESTRICTED: f64 = 1e-6;

/// Looser gate used to pick elimination candidates before Newton polishing.
const SCREEN_GATE: f64 = 1e-6;

/// Largest equation residual, each divided by `max(1, largest term)`.
pub fn scaled_residual(config: &Configuration, m: f64) -> f64 {
    let [omega, c, x3, x4] = config.unknowns();
    let r = residuals_at(m, omega, c, x3, x4);
    let s = residual_scales(m, omega, c, x3, x4);
    r.iter()
        .zip(s.iter())
        .map(|(ri, si)| ri.abs() / si.max(1.0))
        .fold(0.0, f64::max)
}

/// A real root of `P1` in `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoRoot {
    pub rho: f64,
    pub m: f64,
    /// 4 for the collapsed root at `m = 0`, otherwise 1.
    pub multiplicity: u8,
}

/// Coefficients `[a, b, c]` of `P1` as the quadratic `a xi^2 + b xi + c` in
/// `xi = rho^2`.
pub fn p1_coefficients(m: f64) -> [f64; 3] {
    let a = (m + 1.0) * (2.0 * m + 1.0) * (m + 2.0).powi(2);
    let b = -m * m * (32.0 * m.powi(3) + 152.0 * m * m + 239.0 * m + 117.0);
    let c = 54.0 * m.powi(4);
    [a, b, c]
}

pub fn p1(rho: f64, m: f64) -> f64 {
    let [a, b, c] = p1_coefficients(m);
    let xi = rho * rho;
    (a * xi + b) * xi + c
}

/// Real roots of `P1` in `rho`, ascending.
///
/// At `m = -1/2` the quartic drops to a quadratic. At `m = 0` every root
/// collapses to `rho = 0`, reported once with multiplicity 4. For `m <= -1`
/// there are none.
pub fn p1_roots(m: f64) -> Vec<RhoRoot> {
    if m == 0.0 {
        return vec![RhoRoot {
            rho: 0.0,
            m,
            multiplicity: 4,
        }];
    }
    let [a, b, c] = p1_coefficients(m);
    let xis = quadratic_real_roots(a, b, c).unwrap_or_default();
    let mut roots: Vec<RhoRoot> = xis
        .into_iter()
        .filter(|&xi| xi > 0.0)
        .flat_map(|xi| {
            let r = xi.sqrt();
            [-r, r]
        })
        .map(|rho| RhoRoot {
            rho,
            m,
            multiplicity: 1,
        })
        .collect();
    roots.sort_by(|p, q| p.rho.total_cmp(&q.rho));
    roots
}

pub fn p2(x: f64, rho: f64) -> f64 {
    // factored to stay accurate near x = ±1 when |rho| is large
    rho * (x - 1.0) * (x + 1.0) + x * (x * x - 9.0)
}

/// The three roots of `P2(x; rho)`, largest first.
///
/// The largest root lies in `(1, 3)` for `rho > 0`, in `(3, 3 + |rho|)` for
/// `rho < 0`, and equals 3 for `rho = 0`. The other two follow from it as
/// `(r1 - 3)/(r1 + 1)` and `(3 + r1)/(1 - r1)`.
pub fn p2_roots(rho: f64) -> [f64; 3] {
    let r1 = if rho.abs() < 1e-6 {
        // P2(3 + d) = 8 rho + (18 + 6 rho) d + O(d^2)
        let mut x = 3.0 - 4.0 * rho / 9.0;
        for _ in 0..2 {
            x -= p2(x, rho) / ((3.0 * x + 2.0 * rho) * x - 9.0);
        }
        x
    } else {
        let (lo, hi) = if rho > 0.0 {
            (1.0, 3.0)
        } else {
            (3.0, 3.0 + rho.abs())
        };
        let fdf = |x: f64| (p2(x, rho), (3.0 * x + 2.0 * rho) * x - 9.0);
        let tol = 4.0 * f64::EPSILON * hi;
        bracketed_root_with_derivative(fdf, lo, hi, tol).expect("P2 changes sign on its root interval")
    };
    [r1, (r1 - 3.0) / (r1 + 1.0), (3.0 + r1) / (1.0 - r1)]
}

/// Elementary symmetric functions of three numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricFunctions {
    /// `r1 + r2 + r3`
    pub sigma: f64,
    /// `r1 r2 + r1 r3 + r2 r3`
    pub tau: f64,
    /// `r1 r2 r3`
    pub rho: f64,
}

pub fn symmetric_functions(roots: [f64; 3]) -> SymmetricFunctions {
    let [a, b, c] = roots;
    SymmetricFunctions {
        sigma: a + b + c,
        tau: a * b + a * c + b * c,
        rho: a * b * c,
    }
}

fn check_x3(x3: f64) -> Result<()> {
    if (x3 + 1.0).abs() < COLLISION_TOL {
        return Err(Error::Collision(1, 3));
    }
    if (x3 - 1.0).abs() < COLLISION_TOL {
        return Err(Error::Collision(2, 3));
    }
    Ok(())
}

/// `omega` and `omega * c` solved from the first two defining equations.
fn linear_unknowns(x3: f64, x4: f64, m: f64) -> (f64, f64) {
    let d = (x3 - 1.0) * (x3 + 1.0);
    let e = (x4 - 1.0) * (x4 + 1.0);
    (0.5 * (1.0 - 2.0 / d - 2.0 * m / e), x3 / d + m * x4 / e)
}

/// Candidate values of `x4` paired with `x3`.
///
/// For `m != 0` these are the real roots of
/// `(x4^2 - 1)(x4 - x3) = -2 m (x3^2 - 1)^2 / (x3 (x3^2 - 9))`.
/// For `m = 0` that equation carries no information about `x4`, and the
/// quartic obtained from the fourth equation is solved instead.
pub fn eliminate_x4(x3: f64, m: f64) -> Result<Vec<f64>> {
    check_x3(x3)?;
    if m == -3.0 {
        return Err(Error::Domain("total circulation vanishes at m = -3".into()));
    }
    let d = (x3 - 1.0) * (x3 + 1.0);
    if m == 0.0 {
        // omega and omega * c do not depend on x4 when m = 0
        let (u1, u2) = linear_unknowns(x3, 0.0, 0.0);
        let lin = RealPolynomial::new(vec![-u2, u1]);
        let e = RealPolynomial::new(vec![-1.0, 0.0, 1.0]);
        let x_minus_x3 = RealPolynomial::new(vec![-x3, 1.0]);
        let quartic = lin
            .mul(&e)
            .mul(&x_minus_x3)
            .add(&RealPolynomial::new(vec![0.0, -2.0]).mul(&x_minus_x3))
            .add(&e.scale(-1.0));
        return quartic.real_roots();
    }
    let k = x3 * (x3 * x3 - 9.0);
    if k == 0.0 {
        return Ok(vec![]);
    }
    let rhs = -2.0 * m * d * d / k;
    let roots = cubic_real_roots(&[x3 - rhs, -1.0, -x3, 1.0])?;
    // the expanded cubic loses relative accuracy when roots crowd ±1 or x3
    let fdf = |y: f64| {
        let (a, b, c) = (y - 1.0, y + 1.0, y - x3);
        (a * b * c - rhs, b * c + a * c + a * b)
    };
    Ok(roots
        .into_iter()
        .map(|mut y| {
            for _ in 0..3 {
                let (f, df) = fdf(y);
                if df == 0.0 || f == 0.0 {
                    break;
                }
                let next = y - f / df;
                if !(fdf(next).0.abs() < f.abs()) {
                    break;
                }
                y = next;
            }
            y
        })
        .collect())
}

fn candidate(x3: f64, x4: f64, m: f64) -> Result<Configuration> {
    let (u1, _) = linear_unknowns(x3, x4, m);
    let circ = Circulations::new(m);
    let c = center_of_vorticity(&[-1.0, 1.0, x3, x4], &circ)?;
    Configuration::new(x3, x4, c, u1)
}

fn polish(config: &Configuration, m: f64) -> Result<Configuration> {
    let u = refine::newton_polish(m, config.unknowns(), 8);
    Configuration::new(u[2], u[3], u[1], u[0])
}

fn screen_and_polish(x3: f64, m: f64, candidates: &[f64]) -> Vec<Configuration> {
    let mut accepted: Vec<Configuration> = Vec::new();
    for &x4 in candidates {
        let Ok(cfg) = candidate(x3, x4, m) else {
            continue;
        };
        if !(scaled_residual(&cfg, m) < SCREEN_GATE) {
            continue;
        }
        let Ok(cfg) = polish(&cfg, m) else {
            continue;
        };
        let duplicate = accepted
            .iter()
            .any(|a| (a.x4() - cfg.x4()).abs() <= 1e-8 * cfg.x4().abs().max(1.0));
        if scaled_residual(&cfg, m) <= RESIDUAL_GATE && !duplicate {
            accepted.push(cfg);
        }
    }
    accepted
}

/// Completes a root `x3` of the defining polynomial to the unique solution
/// `(x3, x4, c, omega)`.
///
/// Fails with [`Error::Inconsistent`] if no elimination candidate satisfies
/// the full system and with [`Error::Ambiguous`] if more than one does. At
/// `m = 0` every candidate is valid; use [`extend_restricted`] there.
pub fn extend_solution(x3: f64, m: f64) -> Result<Configuration> {
    if m == 0.0 {
        return Err(Error::Domain(
            "x3 does not determine x4 when m = 0; use extend_restricted".into(),
        ));
    }
    let candidates = eliminate_x4(x3, m)?;
    let accepted = screen_and_polish(x3, m, &candidates);
    match accepted.len() {
        0 => Err(Error::Inconsistent { x3, m }),
        1 => Ok(accepted[0]),
        count => Err(Error::Ambiguous { x3, m, count }),
    }
}

/// The four solutions sharing a given `x3` in the restricted problem `m = 0`.
pub fn extend_restricted(x3: f64) -> Result<Vec<Configuration>> {
    let candidates = eliminate_x4(x3, 0.0)?;
    Ok(screen_and_polish(x3, 0.0, &candidates))
}

/// Left-to-right order of the four vortices.
pub fn ordering_of(config: &Configuration) -> Result<Ordering> {
    let mut idx = [0usize, 1, 2, 3];
    idx.sort_by(|&i, &j| config.x[i].total_cmp(&config.x[j]));
    for w in idx.windows(2) {
        if !((config.x[w[1]] - config.x[w[0]]).abs() >= COLLISION_TOL) {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::Collision(a + 1, b + 1));
        }
    }
    Ordering::new(idx.map(|i| i as u8 + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub ordering: Ordering,
    pub config: Configuration,
}

impl Solution {
    pub fn group(&self) -> Group {
        self.ordering.group()
    }
}

/// Every collinear relative equilibrium at one value of `m`, sorted by
/// ordering label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub m: f64,
    pub solutions: Vec<Solution>,
}

impl SolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn get(&self, ordering: Ordering) -> Option<&Solution> {
        self.solutions.iter().find(|s| s.ordering == ordering)
    }

    pub fn by_label(&self, label: &str) -> Option<&Solution> {
        label.parse().ok().and_then(|o| self.get(o))
    }

    pub fn group(&self, group: Group) -> impl Iterator<Item = &Solution> {
        self.solutions.iter().filter(move |s| s.group() == group)
    }

    pub fn orderings(&self) -> Vec<Ordering> {
        self.solutions.iter().map(|s| s.ordering).collect()
    }
}

fn insert(found: &mut BTreeMap<Ordering, Configuration>, config: Configuration, m: f64) -> Result<()> {
    let ordering = ordering_of(&config)?;
    if let Some(prev) = found.get(&ordering) {
        let tol = 1e-7 * prev.x3().abs().max(prev.x4().abs()).max(1.0);
        if (prev.x3() - config.x3()).abs() > tol || (prev.x4() - config.x4()).abs() > tol {
            return Err(Error::Internal(format!(
                "two distinct solutions with ordering {ordering} at m = {m}"
            )));
        }
    } else {
        found.insert(ordering, config);
    }
    Ok(())
}

/// All collinear relative equilibria with circulations `(1, 1, 1, m)`.
///
/// There are 12 solutions (one per ordering) for `m > -1/2`, the six Group I
/// solutions for `-1 < m <= -1/2`, and none for `m <= -1`.
///
/// For each root `rho` of `P1` the largest root of `P2` is extended to a full
/// solution; its symmetry images are then re-extended from their `x3` values
/// and checked against the image `x4`. For `|m|` below [`NEAR_RESTRICTED`]
/// the twelve solutions of `m = 0` are Newton-continued to `m` instead.
pub fn solve_all(m: f64) -> Result<SolutionSet> {
    if !m.is_finite() {
        return Err(Error::Domain(format!("m = {m} is not finite")));
    }
    if m == -3.0 {
        return Err(Error::Domain("total circulation vanishes at m = -3".into()));
    }
    let mut found = BTreeMap::new();
    if m.abs() < NEAR_RESTRICTED {
        // x4 enters the first three equations only through m, so the
        // elimination cubic stops determining it; continue the m = 0 set
        for x3 in p2_roots(0.0) {
            for seed in extend_restricted(x3)? {
                let config = polish(&seed, m)?;
                let res = scaled_residual(&config, m);
                if !(res <= RESIDUAL_GATE) {
                    return Err(Error::Internal(format!(
                        "continuation from m = 0 fails the gate at m = {m} (residual {res:e})"
                    )));
                }
                insert(&mut found, config, m)?;
            }
        }
    } else {
        for root in p1_roots(m) {
            let [r1, _, _] = p2_roots(root.rho);
            let base = extend_solution(r1, m)?;
            insert(&mut found, base, m)?;
            for g in SymmetryElement::ALL.into_iter().skip(1) {
                let (a, b) = g.apply(base.x3(), base.x4())?;
                let image = extend_solution(a, m)?;
                if (image.x4() - b).abs() > 1e-6 * b.abs().max(1.0) {
                    return Err(Error::Internal(format!(
                        "symmetry image {g} of x3 = {r1} at m = {m}: x4 = {} but re-extension gives {}",
                        b,
                        image.x4()
                    )));
                }
                insert(&mut found, image, m)?;
            }
        }
    }
    let solutions: Vec<Solution> = found
        .into_iter()
        .map(|(ordering, config)| Solution { ordering, config })
        .collect();
    if ![0, 6, 12].contains(&solutions.len()) {
        return Err(Error::Internal(format!(
            "found {} solutions at m = {m}",
            solutions.len()
        )));
    }
    Ok(SolutionSet { m, solutions })
}
