//! Asymptotic expansions of solutions and of `T`, `D` near the limits of the
//! solution families.
//!
//! | regime | parameter | ordering |
//! |---|---|---|
//! | Group I near `m = -1` | `m = -1 + eps^2` | `1324` |
//! | Group II near `m = -1/2` | `m = -1/2 + eps^2` | `1243` |
//! | Group I, large `m` | `m = 1/eps^2` | `1234` |
//! | Group II, large `m` | `m = 1/eps^2` | `1432` |
//!
//! Coefficients are stored exactly, as `num/den * sqrt(surd)`.

use serde::{Deserialize, Serialize};

use crate::model::Ordering;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    GroupINearMinusOne,
    GroupIINearMinusHalf,
    GroupILargeM,
    GroupIILargeM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    X3,
    X4,
    T,
    D,
    /// `1/rho` for the solution's root `rho` of `P1`.
    Kappa,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::GroupINearMinusOne,
        Regime::GroupIINearMinusHalf,
        Regime::GroupILargeM,
        Regime::GroupIILargeM,
    ];

    /// The value of `m` for a given `eps`.
    pub fn parameter(self, eps: f64) -> f64 {
        match self {
            Regime::GroupINearMinusOne => -1.0 + eps * eps,
            Regime::GroupIINearMinusHalf => -0.5 + eps * eps,
            Regime::GroupILargeM | Regime::GroupIILargeM => 1.0 / (eps * eps),
        }
    }

    /// Ordering of the solution the positional expansions describe.
    pub fn ordering(self) -> Ordering {
        let label = match self {
            Regime::GroupINearMinusOne => "1324",
            Regime::GroupIINearMinusHalf => "1243",
            Regime::GroupILargeM => "1234",
            Regime::GroupIILargeM => "1432",
        };
        label.parse().expect("static label")
    }
}

/// One term `num/den * sqrt(surd) * eps^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Term {
    pub power: i32,
    pub num: i64,
    pub den: i64,
    pub surd: u32,
}

const fn t(power: i32, num: i64, den: i64, surd: u32) -> Term {
    Term {
        power,
        num,
        den,
        surd,
    }
}

impl Term {
    pub fn coefficient<R: Real>(&self) -> R {
        let c = R::from_f64(self.num as f64) / R::from_f64(self.den as f64);
        if self.surd == 1 {
            c
        } else {
            c * R::from_f64(self.surd as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesExpansion {
    pub regime: Regime,
    pub quantity: Quantity,
    /// Contiguous leading terms, ascending in power.
    pub terms: &'static [Term],
    /// Power of the first omitted term: the truncation error is
    /// `O(eps^error_order)`.
    pub error_order: i32,
    /// Higher terms that are known but separated from `terms` by unknown
    /// ones; they are not used in evaluation.
    pub detached: &'static [Term],
}

impl SeriesExpansion {
    pub fn eval<R: Real>(&self, eps: R) -> R {
        self.terms.iter().fold(R::zero(), |acc, term| {
            acc + term.coefficient::<R>() * eps.powi(term.power)
        })
    }

    /// Highest power of `eps` kept in the truncation.
    pub fn highest_power(&self) -> i32 {
        self.terms.iter().map(|t| t.power).max().unwrap_or(0)
    }
}

pub fn series_eval(series: &SeriesExpansion, eps: f64) -> f64 {
    series.eval(eps)
}

macro_rules! series {
    ($regime:ident, $q:ident, $order:expr, [$($term:expr),* $(,)?]) => {
        series!($regime, $q, $order, [$($term),*], [])
    };
    ($regime:ident, $q:ident, $order:expr, [$($term:expr),* $(,)?], [$($tail:expr),* $(,)?]) => {
        SeriesExpansion {
            regime: Regime::$regime,
            quantity: Quantity::$q,
            terms: &[$($term),*],
            error_order: $order,
            detached: &[$($tail),*],
        }
    };
}

const TABLE: &[SeriesExpansion] = &[
    series!(
        GroupINearMinusOne,
        X3,
        5,
        [
            t(0, -1, 1, 1),
            t(1, 2, 1, 2),
            t(2, -2, 1, 1),
            t(3, -3, 1, 2),
            t(4, 7, 1, 1)
        ],
        [t(11, -71179, 16, 2), t(12, 226695, 16, 1)]
    ),
    series!(
        GroupINearMinusOne,
        X4,
        6,
        [
            t(0, 1, 1, 1),
            t(2, 2, 1, 1),
            t(3, -1, 1, 2),
            t(4, -5, 1, 1),
            t(5, 9, 2, 2)
        ],
        [t(11, -24863, 16, 2), t(12, -192805, 16, 1)]
    ),
    series!(
        GroupINearMinusOne,
        T,
        10,
        [
            t(0, 1, 1, 1),
            t(2, 6, 1, 1),
            t(4, -12, 1, 1),
            t(6, 60, 1, 1),
            t(8, -426, 1, 1)
        ]
    ),
    series!(
        GroupINearMinusOne,
        D,
        12,
        [
            t(2, 6, 1, 1),
            t(4, -12, 1, 1),
            t(6, 78, 1, 1),
            t(8, -588, 1, 1),
            t(10, 9453, 2, 1)
        ]
    ),
    series!(
        GroupIINearMinusHalf,
        Kappa,
        7,
        [t(1, 1, 7, 14), t(3, 289, 1029, 14), t(5, 24373, 43218, 14)]
    ),
    series!(
        GroupIINearMinusHalf,
        X3,
        5,
        [
            t(0, 1, 1, 1),
            t(1, 4, 7, 14),
            t(2, 8, 7, 1),
            t(3, -20, 1029, 14),
            t(4, -416, 1029, 1)
        ]
    ),
    series!(
        GroupIINearMinusHalf,
        X4,
        5,
        [
            t(0, 1, 1, 1),
            t(1, 2, 7, 14),
            t(2, 4, 7, 1),
            t(3, -10, 1029, 14),
            t(4, -320, 1029, 1)
        ]
    ),
    series!(GroupIINearMinusHalf, T, 2, [t(-2, 21, 10, 1), t(0, 578, 175, 1)]),
    series!(
        GroupIINearMinusHalf,
        D,
        2,
        [t(-2, 189, 50, 1), t(0, 3459, 875, 1)]
    ),
    series!(
        GroupILargeM,
        X3,
        5,
        [
            t(0, 3, 1, 1),
            t(1, -1, 3, 3),
            t(2, 1, 12, 1),
            t(3, 1025, 1296, 3),
            t(4, -2059, 5184, 1)
        ]
    ),
    series!(
        GroupILargeM,
        X4,
        3,
        [t(-1, 4, 3, 3), t(0, 2, 3, 1), t(1, 35, 27, 3), t(2, 307, 648, 1)]
    ),
    series!(GroupILargeM, T, 4, [t(0, 8, 1, 1), t(2, -45, 4, 1)]),
    series!(GroupILargeM, D, 4, [t(0, 15, 1, 1), t(2, -171, 4, 1)]),
    series!(
        GroupIILargeM,
        X3,
        5,
        [
            t(0, 1, 1, 1),
            t(1, -1, 1, 1),
            t(2, 1, 4, 1),
            t(3, 1, 16, 1),
            t(4, -3, 64, 1)
        ]
    ),
    series!(
        GroupIILargeM,
        X4,
        4,
        [t(1, -1, 4, 1), t(2, -3, 8, 1), t(3, 1, 8, 1)]
    ),
    series!(GroupIILargeM, T, 4, [t(0, 4, 1, 1), t(2, 3, 4, 1)]),
    series!(GroupIILargeM, D, 4, [t(0, 3, 1, 1), t(2, 21, 4, 1)]),
];

/// The expansion of `quantity` in `regime`, if one is known.
pub fn lookup(regime: Regime, quantity: Quantity) -> Option<SeriesExpansion> {
    TABLE
        .iter()
        .find(|s| s.regime == regime && s.quantity == quantity)
        .copied()
}

/// Every stored expansion.
pub fn all() -> &'static [SeriesExpansion] {
    TABLE
}
