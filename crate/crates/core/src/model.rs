//! Circulations, collinear configurations and the physical functionals of the
//! four-vortex problem.
//!
//! Positions are normalized so that `x1 = -1` and `x2 = 1`; a configuration is
//! therefore described by `(x3, x4)` together with its center of vorticity `c`
//! and angular velocity `omega`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::real::Real;
use crate::{Error, Result};

/// Two vortices closer than this are treated as colliding.
pub const COLLISION_TOL: f64 = 1e-9;

/// Index pairs `(i, j)` in the order used by [`pairwise_distances`]:
/// `r12, r13, r14, r23, r24, r34`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Vortex strengths `(1, 1, 1, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circulations {
    pub m: f64,
    pub gamma: [f64; 4],
    /// Total circulation `3 + m`.
    pub total: f64,
    /// Total vortex angular momentum `sum_{i<j} gamma_i gamma_j = 3 + 3m`.
    pub momentum: f64,
}

impl Circulations {
    pub fn new(m: f64) -> Self {
        let gamma = [1.0, 1.0, 1.0, m];
        let total = gamma.iter().sum();
        let momentum = PAIRS.iter().map(|&(i, j)| gamma[i] * gamma[j]).sum();
        Self {
            m,
            gamma,
            total,
            momentum,
        }
    }

    /// `m = 0`: vortex 4 is a passive tracer and needs the restricted solve path.
    pub fn is_restricted(&self) -> bool {
        self.m == 0.0
    }

    /// `m = -1`: the angular momentum vanishes.
    pub fn has_zero_momentum(&self) -> bool {
        self.momentum == 0.0
    }

    fn require_total(&self) -> Result<()> {
        if self.total == 0.0 {
            return Err(Error::Domain(format!(
                "total circulation vanishes at m = {}",
                self.m
            )));
        }
        Ok(())
    }
}

/// A normalized collinear configuration `(-1, 1, x3, x4)` with its center of
/// vorticity and angular velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub x: [f64; 4],
    pub c: f64,
    pub omega: f64,
}

impl Configuration {
    pub fn new(x3: f64, x4: f64, c: f64, omega: f64) -> Result<Self> {
        let config = Self {
            x: [-1.0, 1.0, x3, x4],
            c,
            omega,
        };
        check_collisions(&config.x)?;
        Ok(config)
    }

    /// Builds a configuration from positions alone, filling in `c` and `omega`
    /// from the center-of-vorticity formula and `omega = L / I`.
    pub fn from_positions(x3: f64, x4: f64, circ: &Circulations) -> Result<Self> {
        let x = [-1.0, 1.0, x3, x4];
        check_collisions(&x)?;
        let c = center_of_vorticity(&x, circ)?;
        let mut config = Self { x, c, omega: 0.0 };
        config.omega = angular_velocity(&config, circ)?;
        Ok(config)
    }

    pub fn x3(&self) -> f64 {
        self.x[2]
    }

    pub fn x4(&self) -> f64 {
        self.x[3]
    }

    /// Unknowns of the defining system in the order `(omega, c, x3, x4)`.
    pub fn unknowns(&self) -> [f64; 4] {
        [self.omega, self.c, self.x[2], self.x[3]]
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x = ({}, {}, {}, {}), c = {}, omega = {}",
            self.x[0], self.x[1], self.x[2], self.x[3], self.c, self.omega
        )
    }
}

/// Which of the two symmetry orbits an ordering belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    /// Vortex 4 lies outside the three equal vortices.
    I,
    /// Vortex 4 lies between two of the equal vortices.
    II,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::I => "I",
            Group::II => "II",
        })
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "1" | "i" => Ok(Group::I),
            "II" | "2" | "ii" => Ok(Group::II),
            other => Err(Error::Domain(format!("unknown group {other:?}"))),
        }
    }
}

/// Left-to-right order of the vortex labels along the line, e.g. `1243` means
/// `x1 < x2 < x4 < x3`.
///
/// Only the twelve permutations with vortex 1 to the left of vortex 2 occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Ordering {
    perm: [u8; 4],
}

impl Ordering {
    pub const GROUP_I: [&'static str; 6] = ["1234", "4312", "4123", "1324", "3124", "4132"];
    pub const GROUP_II: [&'static str; 6] = ["1243", "3412", "1423", "1342", "3142", "1432"];

    pub fn new(perm: [u8; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &p in &perm {
            if !(1..=4).contains(&p) || seen[(p - 1) as usize] {
                return Err(Error::Domain(format!("{perm:?} is not a permutation of 1..4")));
            }
            seen[(p - 1) as usize] = true;
        }
        let pos = |label: u8| perm.iter().position(|&p| p == label);
        if pos(1) > pos(2) {
            return Err(Error::Domain(format!(
                "vortex 1 must lie left of vortex 2 in {perm:?}"
            )));
        }
        Ok(Self { perm })
    }

    pub fn perm(&self) -> [u8; 4] {
        self.perm
    }

    pub fn group(&self) -> Group {
        if self.perm[0] == 4 || self.perm[3] == 4 {
            Group::I
        } else {
            Group::II
        }
    }

    /// The twelve admissible orderings, Group I first.
    pub fn all() -> Vec<Ordering> {
        Self::GROUP_I
            .iter()
            .chain(Self::GROUP_II.iter())
            .map(|s| s.parse().expect("static label"))
            .collect()
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.perm {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|ch| !matches!(ch, ' ' | ',' | '<' | '>'))
            .map(|ch| ch.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Domain(format!("bad ordering label {s:?}")))?;
        let perm: [u8; 4] = digits
            .try_into()
            .map_err(|_| Error::Domain(format!("ordering {s:?} must have four labels")))?;
        Self::new(perm)
    }
}

impl From<Ordering> for String {
    fn from(o: Ordering) -> Self {
        o.to_string()
    }
}

impl TryFrom<String> for Ordering {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

pub(crate) fn check_collisions(x: &[f64; 4]) -> Result<()> {
    for &(i, j) in PAIRS.iter() {
        if !((x[i] - x[j]).abs() >= COLLISION_TOL) {
            return Err(Error::Collision(i + 1, j + 1));
        }
    }
    Ok(())
}

/// Mutual distances `r12, r13, r14, r23, r24, r34`.
pub fn pairwise_distances(config: &Configuration) -> [f64; 6] {
    PAIRS.map(|(i, j)| (config.x[i] - config.x[j]).abs())
}

/// `H = -sum_{i<j} gamma_i gamma_j ln r_ij`.
pub fn hamiltonian(config: &Configuration, circ: &Circulations) -> Result<f64> {
    check_collisions(&config.x)?;
    let r = pairwise_distances(config);
    Ok(-PAIRS
        .iter()
        .zip(r.iter())
        .map(|(&(i, j), rij)| circ.gamma[i] * circ.gamma[j] * rij.ln())
        .sum::<f64>())
}

/// Angular impulse from mutual distances, `I = (1/Gamma) sum_{i<j} gamma_i gamma_j r_ij^2`.
pub fn angular_impulse(config: &Configuration, circ: &Circulations) -> Result<f64> {
    circ.require_total()?;
    let r = pairwise_distances(config);
    let sum: f64 = PAIRS
        .iter()
        .zip(r.iter())
        .map(|(&(i, j), rij)| circ.gamma[i] * circ.gamma[j] * rij * rij)
        .sum();
    Ok(sum / circ.total)
}

/// Angular impulse about the center of vorticity, `I = sum_i gamma_i (x_i - c)^2`.
///
/// Agrees with [`angular_impulse`]; kept separate so the identity can be checked.
pub fn angular_impulse_about_center(config: &Configuration, circ: &Circulations) -> Result<f64> {
    let c = center_of_vorticity(&config.x, circ)?;
    Ok(config
        .x
        .iter()
        .zip(circ.gamma.iter())
        .map(|(xi, gi)| gi * (xi - c) * (xi - c))
        .sum())
}

/// `omega = L / I`. Returns `0` when `L = 0` (check [`Circulations::has_zero_momentum`]).
pub fn angular_velocity(config: &Configuration, circ: &Circulations) -> Result<f64> {
    let impulse = angular_impulse(config, circ)?;
    if impulse == 0.0 {
        return Err(Error::Domain("angular impulse vanishes".into()));
    }
    Ok(circ.momentum / impulse)
}

/// `c = (x3 + m x4) / (m + 3)` for normalized positions.
pub fn center_of_vorticity(x: &[f64; 4], circ: &Circulations) -> Result<f64> {
    circ.require_total()?;
    Ok(x.iter()
        .zip(circ.gamma.iter())
        .map(|(xi, gi)| xi * gi)
        .sum::<f64>()
        / circ.total)
}

/// Left-hand sides of the four defining equations at the configuration.
pub fn residuals(config: &Configuration, circ: &Circulations) -> Result<[f64; 4]> {
    check_collisions(&config.x)?;
    circ.require_total()?;
    Ok(residuals_at(
        circ.m,
        config.omega,
        config.c,
        config.x[2],
        config.x[3],
    ))
}

/// The defining system for a relative equilibrium `(-1, 1, x3, x4)`:
///
/// ```text
/// omega(-1 - c) + 1/2 + 1/(x3 + 1) + m/(x4 + 1)               = 0
/// omega( 1 - c) - 1/2 + 1/(x3 - 1) + m/(x4 - 1)               = 0
/// omega(x3 - c) - 1/(x3 + 1) - 1/(x3 - 1) + m/(x4 - x3)       = 0
/// omega(x4 - c) - 1/(x4 + 1) - 1/(x4 - 1) - 1/(x4 - x3)       = 0
/// ```
pub fn residuals_at<R: Real>(m: R, omega: R, c: R, x3: R, x4: R) -> [R; 4] {
    let one = R::one();
    let half = R::from_f64(0.5);
    [
        omega * (-one - c) + half + (x3 + one).recip() + m / (x4 + one),
        omega * (one - c) - half + (x3 - one).recip() + m / (x4 - one),
        omega * (x3 - c) - (x3 + one).recip() - (x3 - one).recip() + m / (x4 - x3),
        omega * (x4 - c) - (x4 + one).recip() - (x4 - one).recip() - (x4 - x3).recip(),
    ]
}

/// Residuals of `omega (x_i - c) + sum_{j != i} gamma_j / (x_j - x_i)` for an
/// arbitrary (not necessarily normalized) collinear configuration.
pub fn collinear_residuals(x: &[f64; 4], c: f64, omega: f64, circ: &Circulations) -> [f64; 4] {
    std::array::from_fn(|i| {
        let mut acc = omega * (x[i] - c);
        for j in (0..4).filter(|&j| j != i) {
            acc += circ.gamma[j] / (x[j] - x[i]);
        }
        acc
    })
}

/// Largest absolute term in each defining equation; used to scale residual gates.
pub fn residual_scales(m: f64, omega: f64, c: f64, x3: f64, x4: f64) -> [f64; 4] {
    let terms = [
        [omega * (-1.0 - c), 0.5, 1.0 / (x3 + 1.0), m / (x4 + 1.0)],
        [omega * (1.0 - c), 0.5, 1.0 / (x3 - 1.0), m / (x4 - 1.0)],
        [
            omega * (x3 - c),
            1.0 / (x3 + 1.0),
            1.0 / (x3 - 1.0),
            m / (x4 - x3),
        ],
        [
            omega * (x4 - c),
            1.0 / (x4 + 1.0),
            1.0 / (x4 - 1.0),
            1.0 / (x4 - x3),
        ],
    ];
    terms.map(|row| row.iter().fold(0.0_f64, |acc, t| acc.max(t.abs())))
}

/// Jacobian of [`residuals_at`] with respect to `(omega, c, x3, x4)`.
pub fn residual_jacobian<R: Real>(m: R, omega: R, c: R, x3: R, x4: R) -> [[R; 4]; 4] {
    let one = R::one();
    let sq = |v: R| v * v;
    let d34 = x4 - x3;
    [
        [-one - c, -omega, -sq(x3 + one).recip(), -m / sq(x4 + one)],
        [one - c, -omega, -sq(x3 - one).recip(), -m / sq(x4 - one)],
        [
            x3 - c,
            -omega,
            omega + sq(x3 + one).recip() + sq(x3 - one).recip() + m / sq(d34),
            -m / sq(d34),
        ],
        [
            x4 - c,
            -omega,
            -sq(d34).recip(),
            omega + sq(x4 + one).recip() + sq(x4 - one).recip() + sq(d34).recip(),
        ],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn example_m1() -> (Configuration, Circulations) {
        let s = 2f64.sqrt() + 6f64.sqrt();
        let circ = Circulations::new(1.0);
        let c = s / 2.0;
        let omega = 3.0 / (6.0 + 2.0 * 3f64.sqrt());
        (Configuration::new(-1.0 + s, 1.0 + s, c, omega).unwrap(), circ)
    }

    #[test]
    fn circulations_invariants() {
        for m in [-2.5, -1.0, 0.0, 0.3, 7.0] {
            let circ = Circulations::new(m);
            assert_eq!(&circ.gamma[..3], &[1.0, 1.0, 1.0]);
            assert_eq!(circ.total, 3.0 + m);
            assert_relative_eq!(circ.momentum, 3.0 + 3.0 * m, epsilon = 1e-15);
        }
        assert!(Circulations::new(0.0).is_restricted());
        assert!(Circulations::new(-1.0).has_zero_momentum());
    }

    #[test]
    fn distances() {
        let (config, _) = example_m1();
        let r = pairwise_distances(&config);
        assert_eq!(r[0], 2.0);
        assert_relative_eq!(r[5], 2.0, epsilon = 1e-14);

        let config = Configuration::new(3.0, 4.228, 0.0, 1.0).unwrap();
        assert_relative_eq!(pairwise_distances(&config)[4], 3.228, epsilon = 1e-14);
    }

    #[test]
    fn collision_rejected() {
        assert_eq!(
            Configuration::new(1.0, 4.0, 0.0, 1.0).unwrap_err(),
            Error::Collision(2, 3)
        );
        assert!(Configuration::new(2.0, 2.0 + 1e-10, 0.0, 1.0).is_err());
        assert!(Configuration::new(2.0, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn hamiltonian_scaling_identity() {
        let (config, circ) = example_m1();
        let h = hamiltonian(&config, &circ).unwrap();
        // positions scaled by k: H shifts by -L ln k
        let k = 2.5;
        let scaled = Configuration {
            x: config.x.map(|v| v * k),
            ..config
        };
        let hs = hamiltonian(&scaled, &circ).unwrap();
        assert_relative_eq!(hs, h - circ.momentum * k.ln(), max_relative = 1e-12);
    }

    #[test]
    fn hamiltonian_zero_for_unit_distances() {
        // only the pair (1, 2) has nonzero log weight when m = 0 and r13 = r23 = 1
        let circ = Circulations::new(0.0);
        let config = Configuration {
            x: [-0.5, 0.5, 0.5 + 1e-3, 7.0],
            c: 0.0,
            omega: 1.0,
        };
        let h = hamiltonian(&config, &circ).unwrap();
        let expected = -(1.0f64.ln() + 1.001f64.ln() + 1e-3f64.ln());
        assert_relative_eq!(h, expected, max_relative = 1e-12);
    }

    #[test]
    fn impulse_hand_sum() {
        let circ = Circulations::new(1.0);
        let config = Configuration::new(3.0, 5.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(angular_impulse(&config, &circ).unwrap(), 20.0, epsilon = 1e-12);
        assert_relative_eq!(
            angular_impulse_about_center(&config, &circ).unwrap(),
            20.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn impulse_restricted_ignores_vortex_four() {
        let circ = Circulations::new(0.0);
        let config = Configuration::new(3.0, 17.0, 0.0, 1.0).unwrap();
        let expected = (4.0 + 16.0 + 4.0) / 3.0;
        assert_relative_eq!(
            angular_impulse(&config, &circ).unwrap(),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn impulse_requires_total_circulation() {
        let circ = Circulations::new(-3.0);
        let config = Configuration::new(3.0, 5.0, 0.0, 1.0).unwrap();
        assert!(matches!(angular_impulse(&config, &circ), Err(Error::Domain(_))));
        assert!(center_of_vorticity(&config.x, &circ).is_err());
    }

    #[test]
    fn example_m1_functionals() {
        let (config, circ) = example_m1();
        let s = 2f64.sqrt() + 6f64.sqrt();
        assert_relative_eq!(
            center_of_vorticity(&config.x, &circ).unwrap(),
            s / 2.0,
            epsilon = 1e-14
        );
        let omega = angular_velocity(&config, &circ).unwrap();
        assert_relative_eq!(omega, 3.0 / (6.0 + 2.0 * 3f64.sqrt()), epsilon = 1e-14);
        let impulse = angular_impulse(&config, &circ).unwrap();
        assert_relative_eq!(omega * impulse, circ.momentum, max_relative = 1e-12);
        let res = residuals(&config, &circ).unwrap();
        assert!(res.iter().all(|r| r.abs() < 1e-10), "{res:?}");
    }

    #[test]
    fn zero_momentum_gives_zero_omega() {
        let circ = Circulations::new(-1.0);
        let config = Configuration::new(3.0, 5.0, 0.0, 1.0).unwrap();
        assert_eq!(angular_velocity(&config, &circ).unwrap(), 0.0);
    }

    #[test]
    fn center_formula_special_cases() {
        let circ = Circulations::new(0.0);
        assert_relative_eq!(center_of_vorticity(&[-1.0, 1.0, 2.4, 9.0], &circ).unwrap(), 0.8);
        // x3 = -m x4 puts the center at the origin
        let circ = Circulations::new(0.5);
        assert_eq!(center_of_vorticity(&[-1.0, 1.0, -2.0, 4.0], &circ).unwrap(), 0.0);
    }

    #[test]
    fn generic_point_has_nonzero_residuals() {
        let circ = Circulations::new(1.0);
        let config = Configuration::new(2.0, 5.0, 0.0, 0.0).unwrap();
        let res = residuals(&config, &circ).unwrap();
        assert!(res.iter().any(|r| r.abs() > 0.1));
    }

    #[test]
    fn residuals_translation_covariant() {
        let (config, circ) = example_m1();
        let base = collinear_residuals(&config.x, config.c, config.omega, &circ);
        let normalized = residuals(&config, &circ).unwrap();
        for s in [-3.0, 0.731, 12.5] {
            let shifted = collinear_residuals(&config.x.map(|v| v + s), config.c + s, config.omega, &circ);
            for i in 0..4 {
                assert_relative_eq!(base[i], normalized[i], epsilon = 1e-14);
                assert!((shifted[i] - base[i]).abs() < 1e-12);
            }
        }
        let generic = Configuration::new(2.0, 5.0, 0.4, 0.3).unwrap();
        let a = collinear_residuals(&generic.x, 0.4, 0.3, &circ);
        let b = collinear_residuals(&generic.x.map(|v| v - 1.7), 0.4 - 1.7, 0.3, &circ);
        for i in 0..4 {
            assert_relative_eq!(a[i], b[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let (m, u) = (0.7, [0.4, 0.9, 2.7, 4.1]);
        let jac = residual_jacobian(m, u[0], u[1], u[2], u[3]);
        let h = 1e-6;
        for k in 0..4 {
            let mut up = u;
            let mut dn = u;
            up[k] += h;
            dn[k] -= h;
            let fu = residuals_at(m, up[0], up[1], up[2], up[3]);
            let fd = residuals_at(m, dn[0], dn[1], dn[2], dn[3]);
            for i in 0..4 {
                let fd_deriv = (fu[i] - fd[i]) / (2.0 * h);
                assert!((jac[i][k] - fd_deriv).abs() < 1e-7, "({i},{k})");
            }
        }
    }

    #[test]
    fn orderings_parse_and_classify() {
        let all = Ordering::all();
        assert_eq!(all.len(), 12);
        let mut labels: Vec<String> = all.iter().map(|o| o.to_string()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 12);
        for o in &all[..6] {
            assert_eq!(o.group(), Group::I);
        }
        for o in &all[6..] {
            assert_eq!(o.group(), Group::II);
        }
        assert_eq!("<1 2 4 3>".parse::<Ordering>().unwrap().to_string(), "1243");
        assert!("2134".parse::<Ordering>().is_err());
        assert!("1123".parse::<Ordering>().is_err());
        assert!("123".parse::<Ordering>().is_err());
        let json = serde_json::to_string(&all[3]).unwrap();
        assert_eq!(json, "\"1324\"");
        assert_eq!(serde_json::from_str::<Ordering>(&json).unwrap(), all[3]);
    }
}
