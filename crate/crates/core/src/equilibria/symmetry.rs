//! The order-six group acting on normalized collinear solutions.
//!
//! `R` reflects the line about the origin. `S` relabels vortices
//! `1 -> 2 -> 3 -> 1` and renormalizes so that vortices 1 and 2 sit at `-1`
//! and `1` again. Both maps send solutions to solutions, and together they
//! generate a copy of `S3`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::COLLISION_TOL;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryElement {
    E,
    R,
    /// `R` after `S`.
    RS,
    /// `S` after `R`.
    SR,
    S,
    /// `S` applied twice.
    S2,
}

use SymmetryElement::*;

// COMPOSE[g][h] = g after h, indices in `ALL` order
const COMPOSE: [[SymmetryElement; 6]; 6] = [
    [E, R, RS, SR, S, S2],
    [R, E, S, S2, RS, SR],
    [RS, S2, E, S, SR, R],
    [SR, S, S2, E, R, RS],
    [S, SR, R, RS, S2, E],
    [S2, RS, SR, R, E, S],
];

impl SymmetryElement {
    pub const ALL: [SymmetryElement; 6] = [E, R, RS, SR, S, S2];

    fn index(self) -> usize {
        self as usize
    }

    /// `self` after `other`.
    pub fn compose(self, other: Self) -> Self {
        COMPOSE[self.index()][other.index()]
    }

    pub fn inverse(self) -> Self {
        match self {
            S => S2,
            S2 => S,
            g => g,
        }
    }

    /// Image of the solution `(x3, x4) = (a, b)`.
    ///
    /// Elements involving `S` divide by `a - 1` or `a + 1`; those values
    /// correspond to vortex 3 colliding with vortex 2 or 1 and are rejected.
    pub fn apply(self, a: f64, b: f64) -> Result<(f64, f64)> {
        let uses_s = !matches!(self, E | R);
        if uses_s {
            if (a - 1.0).abs() < COLLISION_TOL {
                return Err(Error::Collision(2, 3));
            }
            if (a + 1.0).abs() < COLLISION_TOL {
                return Err(Error::Collision(1, 3));
            }
        }
        Ok(match self {
            E => (a, b),
            R => (-a, -b),
            RS => ((a + 3.0) / (a - 1.0), (-2.0 * b + a + 1.0) / (a - 1.0)),
            SR => ((3.0 - a) / (a + 1.0), (2.0 * b - a + 1.0) / (a + 1.0)),
            S => ((3.0 + a) / (1.0 - a), (-2.0 * b + a + 1.0) / (1.0 - a)),
            S2 => ((a - 3.0) / (a + 1.0), (-2.0 * b + a - 1.0) / (a + 1.0)),
        })
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            E => "e",
            R => "R",
            RS => "RS",
            SR => "SR",
            S => "S",
            S2 => "S^2",
        };
        f.write_str(s)
    }
}
