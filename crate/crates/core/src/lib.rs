//! Collinear relative equilibria of the planar four-vortex problem with
//! circulations `(1, 1, 1, m)`.
//!
//! The crate computes every collinear relative equilibrium for a given `m`,
//! classifies them by vortex ordering, and analyzes their linear stability
//! both analytically (trace and determinant of the reduced stability matrix)
//! and numerically (full ODE integration and dense spectra).
//!
//! Module map:
//!
//! - [`model`]: circulations, configurations, and the physical functionals.
//! - [`rootfind`]: real roots of the small polynomials used by the solver.
//! - [`equilibria`]: the solution pipeline and the `S3` symmetry action.
//! - [`stability`]: analytic stability quantities, bifurcation values and
//!   transcribed asymptotic series.
//! - [`dynamics`]: the planar vortex ODE, Hessians, the scaled stability
//!   matrix and a dense eigenvalue solver, used as an independent check.
//! - [`cli`]: the command surface used by the `collinear-vortex` binary.
//!
//! ```
//! use collinear_vortex::equilibria::solve_all;
//!
//! let set = solve_all(1.0).unwrap();
//! assert_eq!(set.count(), 12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod dynamics;
pub mod equilibria;
mod error;
pub mod model;
pub mod real;
pub mod rootfind;
pub mod stability;

pub use error::{Error, Result};
