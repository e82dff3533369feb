//! The planar `n`-vortex equations, used as an independent check on the
//! collinear solutions and their analytic stability data.
//!
//! State vectors are flattened as `(x1, y1, x2, y2, ...)`. `J` is the 2x2
//! block with `J (a, b) = (b, -a)`, `K = diag(J, ..., J)` and
//! `M = diag(gamma_1 I2, ..., gamma_n I2)`, so the equations of motion read
//! `M z' = K grad H`.

pub mod eigen;
pub mod integrate;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equilibria::refine::newton_polish;
use crate::equilibria::{scaled_residual, RESIDUAL_GATE};
use crate::model::{Circulations, Configuration};
use crate::real::{DoubleDouble, Real};
use crate::stability::stability_report;
use crate::{Error, Result};

pub use eigen::dense_eigenvalues;
pub use integrate::{integrate, Outcome, Trajectory};

/// Positions closer than this count as a collision.
pub const COINCIDENCE_TOL: f64 = 1e-9;
/// Distance allowed between a computed eigenvalue and each of `0, 0, i, -i`.
pub const TRIVIAL_TOL: f64 = 1e-7;
/// Allowed mismatch between computed and analytic nontrivial eigenvalues.
pub const LAMBDA_TOL: f64 = 1e-6;
/// Allowed position deviation after integrating whole periods.
pub const ROTATION_TOL: f64 = 1e-6;
/// Allowed relative drift of `H` and `I`.
pub const DRIFT_TOL: f64 = 1e-8;
/// Eigenvalues of the projected Hessian below `-MORSE_ZERO_BAND` are negative.
pub const MORSE_ZERO_BAND: f64 = 1e-8;

/// Positions and circulations of `n` point vortices in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarState {
    pub positions: Vec<[f64; 2]>,
    pub circulations: Vec<f64>,
}

impl PlanarState {
    pub fn new(positions: Vec<[f64; 2]>, circulations: Vec<f64>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::Domain("at least two vortices are required".into()));
        }
        if positions.len() != circulations.len() {
            return Err(Error::Domain(format!(
                "{} positions but {} circulations",
                positions.len(),
                circulations.len()
            )));
        }
        if positions
            .iter()
            .flatten()
            .chain(&circulations)
            .any(|v| !v.is_finite())
        {
            return Err(Error::Domain("non-finite position or circulation".into()));
        }
        let state = Self {
            positions,
            circulations,
        };
        state.check_collisions()?;
        Ok(state)
    }

    /// Builds a state without validation from flattened positions.
    pub fn from_flat(flat: &[f64], circulations: &[f64]) -> Self {
        Self {
            positions: flat.chunks_exact(2).map(|p| [p[0], p[1]]).collect(),
            circulations: circulations.to_vec(),
        }
    }

    /// The collinear configuration placed on the horizontal axis, optionally
    /// shifted so its center of vorticity sits at the origin.
    pub fn from_configuration(config: &Configuration, circ: &Circulations, centered: bool) -> Result<Self> {
        let shift = if centered { config.c } else { 0.0 };
        Self::new(
            config.x.iter().map(|&x| [x - shift, 0.0]).collect(),
            circ.gamma.to_vec(),
        )
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn flat(&self) -> Vec<f64> {
        self.positions.iter().flatten().copied().collect()
    }

    pub fn total_circulation(&self) -> f64 {
        self.circulations.iter().sum()
    }

    /// Smallest mutual distance.
    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, p) in self.positions.iter().enumerate() {
            for q in &self.positions[i + 1..] {
                best = best.min((p[0] - q[0]).hypot(p[1] - q[1]));
            }
        }
        best
    }

    fn check_collisions(&self) -> Result<()> {
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let (p, q) = (self.positions[i], self.positions[j]);
                if (p[0] - q[0]).hypot(p[1] - q[1]) < COINCIDENCE_TOL {
                    return Err(Error::Collision(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    pub fn center_of_vorticity(&self) -> Result<[f64; 2]> {
        let total = self.total_circulation();
        if total == 0.0 {
            return Err(Error::Domain("total circulation vanishes".into()));
        }
        let mut c = [0.0; 2];
        for (p, g) in self.positions.iter().zip(&self.circulations) {
            c[0] += g * p[0];
            c[1] += g * p[1];
        }
        Ok([c[0] / total, c[1] / total])
    }

    /// The same state translated so the center of vorticity is the origin.
    pub fn centered(&self) -> Result<Self> {
        let c = self.center_of_vorticity()?;
        Ok(Self {
            positions: self
                .positions
                .iter()
                .map(|p| [p[0] - c[0], p[1] - c[1]])
                .collect(),
            circulations: self.circulations.clone(),
        })
    }
}

pub(crate) fn rhs_flat(gamma: &[f64], y: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for i in 0..gamma.len() {
        for j in 0..gamma.len() {
            if i == j {
                continue;
            }
            let dx = y[2 * j] - y[2 * i];
            let dy = y[2 * j + 1] - y[2 * i + 1];
            let r2 = dx * dx + dy * dy;
            out[2 * i] += gamma[j] * dy / r2;
            out[2 * i + 1] -= gamma[j] * dx / r2;
        }
    }
}

/// Velocities `z_i' = J sum_{j != i} gamma_j (z_j - z_i) / r_ij^2`.
pub fn ode_rhs(state: &PlanarState) -> Result<Vec<[f64; 2]>> {
    state.check_collisions()?;
    let mut out = vec![0.0; 2 * state.n()];
    rhs_flat(&state.circulations, &state.flat(), &mut out);
    Ok(out.chunks_exact(2).map(|v| [v[0], v[1]]).collect())
}

/// `H = -sum_{i<j} gamma_i gamma_j ln r_ij`.
pub fn hamiltonian(state: &PlanarState) -> Result<f64> {
    state.check_collisions()?;
    let (z, g) = (&state.positions, &state.circulations);
    let mut h = 0.0;
    for i in 0..state.n() {
        for j in i + 1..state.n() {
            h -= g[i] * g[j] * (z[i][0] - z[j][0]).hypot(z[i][1] - z[j][1]).ln();
        }
    }
    Ok(h)
}

/// `I = sum_i gamma_i |z_i - c|^2`.
pub fn angular_impulse(state: &PlanarState) -> Result<f64> {
    let c = state.center_of_vorticity()?;
    Ok(state
        .positions
        .iter()
        .zip(&state.circulations)
        .map(|(p, g)| g * ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)))
        .sum())
}

/// `grad H`, with entries `-sum_j gamma_i gamma_j (z_i - z_j) / r_ij^2`.
pub fn gradient_h(state: &PlanarState) -> Result<DVector<f64>> {
    state.check_collisions()?;
    let (z, g) = (&state.positions, &state.circulations);
    let mut grad = DVector::zeros(2 * state.n());
    for i in 0..state.n() {
        for j in 0..state.n() {
            if i == j {
                continue;
            }
            let d = [z[i][0] - z[j][0], z[i][1] - z[j][1]];
            let r2 = d[0] * d[0] + d[1] * d[1];
            grad[2 * i] -= g[i] * g[j] * d[0] / r2;
            grad[2 * i + 1] -= g[i] * g[j] * d[1] / r2;
        }
    }
    Ok(grad)
}

fn hessian_rows<R: Real>(z: &[[R; 2]], g: &[R]) -> Vec<Vec<R>> {
    let n = z.len();
    let two = R::from_f64(2.0);
    let mut hess = vec![vec![R::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = [z[i][0] - z[j][0], z[i][1] - z[j][1]];
            let r2 = d[0] * d[0] + d[1] * d[1];
            let s = -(g[i] * g[j]) / (r2 * r2);
            for a in 0..2 {
                for b in 0..2 {
                    let delta = if a == b { r2 } else { R::zero() };
                    let block = s * (delta - two * d[a] * d[b]);
                    hess[2 * i + a][2 * i + b] = hess[2 * i + a][2 * i + b] + block;
                    hess[2 * j + a][2 * j + b] = hess[2 * j + a][2 * j + b] + block;
                    hess[2 * i + a][2 * j + b] = hess[2 * i + a][2 * j + b] - block;
                    hess[2 * j + a][2 * i + b] = hess[2 * j + a][2 * i + b] - block;
                }
            }
        }
    }
    hess
}

/// Rows of `K (omega^-1 M^-1 D^2H + I)`.
fn scaled_rows<R: Real>(z: &[[R; 2]], g: &[R], omega: R) -> Vec<Vec<R>> {
    let mut inner = hessian_rows(z, g);
    for (r, row) in inner.iter_mut().enumerate() {
        let s = (omega * g[r / 2]).recip();
        for v in row.iter_mut() {
            *v = *v * s;
        }
        row[r] = row[r] + R::one();
    }
    let mut out = Vec::with_capacity(inner.len());
    for pair in inner.chunks_exact(2) {
        out.push(pair[1].clone());
        out.push(pair[0].iter().map(|&v| -v).collect());
    }
    out
}

fn to_dmatrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

/// Exact Hessian `D^2 H`.
pub fn hessian_h(state: &PlanarState) -> Result<DMatrix<f64>> {
    state.check_collisions()?;
    Ok(to_dmatrix(&hessian_rows(&state.positions, &state.circulations)))
}

/// `K = diag(J, ..., J)`.
pub fn k_matrix(n: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        k[(2 * i, 2 * i + 1)] = 1.0;
        k[(2 * i + 1, 2 * i)] = -1.0;
    }
    k
}

/// `M = diag(gamma_1, gamma_1, ..., gamma_n, gamma_n)`.
pub fn m_matrix(circulations: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        2 * circulations.len(),
        circulations.iter().flat_map(|&g| [g, g]),
    ))
}

/// `omega^-1 B = K (omega^-1 M^-1 D^2H(z0) + I)` at a state centered on its
/// center of vorticity.
pub fn scaled_stability_matrix(z0: &PlanarState, omega: f64) -> Result<DMatrix<f64>> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain(format!("angular velocity {omega} is not usable")));
    }
    if z0.circulations.contains(&0.0) {
        return Err(Error::Domain("M is singular: a circulation vanishes".into()));
    }
    let c = z0.center_of_vorticity()?;
    let scale = z0
        .positions
        .iter()
        .fold(1.0f64, |a, p| a.max(p[0].abs()).max(p[1].abs()));
    if c[0].hypot(c[1]) > 1e-9 * scale {
        return Err(Error::Domain(
            "state is not centered on its center of vorticity".into(),
        ));
    }
    z0.check_collisions()?;
    Ok(to_dmatrix(&scaled_rows(&z0.positions, &z0.circulations, omega)))
}

/// Eigenvalues of the scaled stability matrix of a collinear relative
/// equilibrium, computed in double-double arithmetic from a double-double
/// refinement of the solution.
///
/// The double eigenvalue `0` belongs to a Jordan block, so in `f64` it is
/// only resolved to about `sqrt(eps * |B|)`; the extended precision brings
/// that well below [`TRIVIAL_TOL`].
pub fn precise_spectrum(solution: &Configuration, circ: &Circulations) -> Result<Vec<Complex64>> {
    if circ.gamma.contains(&0.0) {
        return Err(Error::Domain("M is singular: a circulation vanishes".into()));
    }
    if solution.omega == 0.0 {
        return Err(Error::Domain("angular velocity vanishes".into()));
    }
    let m = DoubleDouble::from_f64(circ.m);
    let [omega, c, x3, x4] = newton_polish(m, solution.unknowns().map(DoubleDouble::from_f64), 8);
    let one = DoubleDouble::one();
    let z: Vec<[DoubleDouble; 2]> = [-one, one, x3, x4]
        .iter()
        .map(|&x| [x - c, DoubleDouble::zero()])
        .collect();
    let g = circ.gamma.map(DoubleDouble::from_f64);
    eigen::eigenvalues_in(scaled_rows(&z, &g, omega))
}

/// Eigenvalues of a scaled stability matrix split into trivial and
/// nontrivial parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    /// Each of `0, 0, i, -i` was matched by a distinct eigenvalue within
    /// [`TRIVIAL_TOL`].
    pub trivial_found: bool,
    /// Largest distance in the trivial matching.
    pub trivial_error: f64,
    /// Eigenvalues left after removing the trivial matches.
    pub nontrivial: Vec<Complex64>,
    /// Largest distance from an eigenvalue to the nearest negated eigenvalue.
    pub pairing_error: f64,
}

fn nearest(pool: &[Complex64], used: &[bool], target: Complex64) -> Option<(usize, f64)> {
    pool.iter()
        .enumerate()
        .filter(|(k, _)| !used[*k])
        .map(|(k, z)| (k, (z - target).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Splits `eigenvalues` into the trivial `{0, 0, i, -i}` and the rest.
pub fn analyze_spectrum(eigenvalues: Vec<Complex64>) -> SpectrumReport {
    let mut used = vec![false; eigenvalues.len()];
    let mut trivial_error = 0.0f64;
    let mut trivial_found = true;
    let i = Complex64::i();
    for target in [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), i, -i] {
        match nearest(&eigenvalues, &used, target) {
            Some((k, d)) if d <= TRIVIAL_TOL => {
                used[k] = true;
                trivial_error = trivial_error.max(d);
            }
            Some((_, d)) => {
                trivial_found = false;
                trivial_error = trivial_error.max(d);
            }
            None => {
                trivial_found = false;
                trivial_error = f64::INFINITY;
            }
        }
    }
    let nontrivial = eigenvalues
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(z, _)| *z)
        .collect();
    let pairing_error = eigenvalues
        .iter()
        .map(|z| {
            eigenvalues
                .iter()
                .map(|w| (z + w).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    SpectrumReport {
        eigenvalues,
        trivial_found,
        trivial_error,
        nontrivial,
        pairing_error,
    }
}

/// Largest distance in a greedy one-to-one matching of `a` against `b`
/// (infinite when the lengths differ).
pub fn match_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &z in a {
        let (k, d) = nearest(b, &used, z).expect("lengths agree");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Unit roundoff amplified by `exp(MAX_EFOLDS)` reaches [`ROTATION_TOL`].
pub const MAX_EFOLDS: f64 = 22.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not meaningful for this solution; the measured value is still reported.
    Skipped,
}

/// One named check with its measured value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            status: if value <= tolerance {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            note: None,
        }
    }

    fn skip_if(mut self, skip: bool, note: impl FnOnce() -> String) -> Self {
        if skip {
            self.status = CheckStatus::Skipped;
            self.note = Some(note());
        }
        self
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Number of rotation periods to integrate.
    pub periods: f64,
    /// Integrator tolerance (relative and absolute).
    pub tol: f64,
    pub samples_per_period: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            periods: 1.0,
            tol: 1e-10,
            samples_per_period: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub m: f64,
    pub omega: f64,
    pub period: f64,
    pub periods: f64,
    pub outcome: Outcome,
    /// Largest `|z_i(t) - R(omega t) z_i(0)|` over the samples.
    pub rotation_deviation: f64,
    /// Largest `|z_i(T) - R(omega T) z_i(0)|` at the final time `T`.
    pub return_deviation: f64,
    /// Largest `|H(t) - H(0)|` relative to `max(|H(0)|, sum |gamma_i gamma_j|)`.
    pub h_drift: f64,
    /// Largest `|I(t) - I(0)| / I(0)`.
    pub i_drift: f64,
    /// Largest `|z_i' + omega J z_i|` at the start, relative to the largest speed.
    pub velocity_deviation: f64,
    /// `max Re(lambda) * |omega| * t_end`: how many times a perturbation can
    /// grow by `e` over the integration.
    pub efolds: f64,
    pub spectrum: SpectrumReport,
    pub analytic_lambdas: [Complex64; 4],
    pub lambda_error: f64,
    pub checks: Vec<Check>,
}

impl VerificationRecord {
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }
}

/// Integrates, diagonalizes and cross-checks a relative equilibrium with
/// default options.
pub fn verify_relative_equilibrium(
    solution: &Configuration,
    circ: &Circulations,
) -> Result<VerificationRecord> {
    verify_with(solution, circ, VerifyOptions::default())
}

pub fn verify_with(
    solution: &Configuration,
    circ: &Circulations,
    opts: VerifyOptions,
) -> Result<VerificationRecord> {
    if !(opts.periods > 0.0) || !(opts.tol > 0.0) || opts.samples_per_period == 0 {
        return Err(Error::Domain(
            "periods, tolerance and sampling must be positive".into(),
        ));
    }
    let res = scaled_residual(solution, circ.m);
    if !(res <= RESIDUAL_GATE) {
        return Err(Error::Domain(format!(
            "configuration fails the residual gate at m = {} (residual {res:e})",
            circ.m
        )));
    }
    let omega = solution.omega;
    if omega == 0.0 {
        return Err(Error::Domain("angular velocity vanishes".into()));
    }
    let z0 = PlanarState::from_configuration(solution, circ, true)?;
    let flat0 = z0.flat();

    let vel = ode_rhs(&z0)?;
    let speed = vel
        .iter()
        .map(|v| v[0].hypot(v[1]))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let velocity_deviation = vel
        .iter()
        .zip(&z0.positions)
        .map(|(v, p)| (v[0] + omega * p[1]).hypot(v[1] - omega * p[0]))
        .fold(0.0, f64::max)
        / speed;

    let period = 2.0 * PI / omega.abs();
    let t_end = opts.periods * period;
    let samples = ((opts.periods * opts.samples_per_period as f64).ceil() as usize).max(1);
    let traj = integrate(&z0, t_end, opts.tol, samples)?;

    let h0 = hamiltonian(&z0)?;
    let i0 = angular_impulse(&z0)?;
    // H vanishes for some configurations; sum |gamma_i gamma_j| is its unit
    // (rescaling lengths by k shifts H by -L ln k)
    let g = &z0.circulations;
    let pair_sum: f64 = (0..g.len())
        .flat_map(|i| (i + 1..g.len()).map(move |j| (g[i] * g[j]).abs()))
        .sum();
    let h_scale = h0.abs().max(pair_sum);
    let (mut h_drift, mut i_drift, mut rotation_deviation) = (0.0f64, 0.0f64, 0.0f64);
    for (t, y) in traj.times.iter().zip(&traj.samples) {
        let s = PlanarState::from_flat(y, &z0.circulations);
        h_drift = h_drift.max((hamiltonian(&s)? - h0).abs() / h_scale);
        i_drift = i_drift.max((angular_impulse(&s)? - i0).abs() / i0.abs());
        let (sn, cs) = (omega * t).sin_cos();
        for (p, q) in flat0.chunks_exact(2).zip(y.chunks_exact(2)) {
            let rx = cs * p[0] - sn * p[1];
            let ry = sn * p[0] + cs * p[1];
            rotation_deviation = rotation_deviation.max((q[0] - rx).hypot(q[1] - ry));
        }
    }
    let last = traj.samples.last().expect("initial sample");
    let return_deviation = if traj.is_complete() {
        let (sn, cs) = (omega * t_end).sin_cos();
        flat0
            .chunks_exact(2)
            .zip(last.chunks_exact(2))
            .map(|(p, q)| (q[0] - (cs * p[0] - sn * p[1])).hypot(q[1] - (sn * p[0] + cs * p[1])))
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };

    let spectrum = analyze_spectrum(precise_spectrum(solution, circ)?);
    let analytic = stability_report(circ.m, solution)?;
    let lambda_error = match_error(&spectrum.nontrivial, &analytic.lambdas);
    let efolds = analytic.lambdas.iter().map(|l| l.re).fold(0.0, f64::max) * omega.abs() * t_end;
    let unstable = efolds > MAX_EFOLDS;
    let why = || format!("roundoff grows by e^{efolds:.1} over the run");

    let checks = vec![
        Check::new(
            "integration completed",
            if traj.is_complete() { 0.0 } else { 1.0 },
            0.0,
        ),
        Check::new("rigid rotation of the velocity field", velocity_deviation, 1e-9),
        Check::new("return after integration", return_deviation, ROTATION_TOL).skip_if(unstable, why),
        Check::new("deviation from rigid rotation", rotation_deviation, ROTATION_TOL).skip_if(unstable, why),
        Check::new("relative drift of H", h_drift, DRIFT_TOL),
        Check::new("relative drift of I", i_drift, DRIFT_TOL),
        Check::new(
            "trivial eigenvalues 0, 0, +i, -i",
            spectrum.trivial_error,
            TRIVIAL_TOL,
        ),
        Check::new("pairing of eigenvalues", spectrum.pairing_error, TRIVIAL_TOL),
        Check::new("nontrivial eigenvalues vs analytic", lambda_error, LAMBDA_TOL),
    ];
    Ok(VerificationRecord {
        m: circ.m,
        omega,
        period,
        periods: opts.periods,
        outcome: traj.outcome,
        rotation_deviation,
        return_deviation,
        h_drift,
        i_drift,
        velocity_deviation,
        efolds,
        spectrum,
        analytic_lambdas: analytic.lambdas,
        lambda_error,
        checks,
    })
}

/// Hessian of `H + (omega/2) I` at a centered relative equilibrium, projected
/// onto the complement of `grad I`, the two translations and the rotation
/// direction `K z0`. Returns the eigenvalues in ascending order.
pub fn projected_hessian_eigenvalues(solution: &Configuration, circ: &Circulations) -> Result<Vec<f64>> {
    if circ.total == 0.0 || circ.momentum == 0.0 {
        return Err(Error::Domain(format!(
            "total circulation and angular momentum must be nonzero (m = {})",
            circ.m
        )));
    }
    let z0 = PlanarState::from_configuration(solution, circ, true)?;
    let n = z0.n();
    let dim = 2 * n;
    let gamma = &z0.circulations;
    let omega = solution.omega;

    let mut hess = hessian_h(&z0)?;
    let mut d2i = m_matrix(gamma) * 2.0;
    for i in 0..n {
        for j in 0..n {
            for a in 0..2 {
                d2i[(2 * i + a, 2 * j + a)] -= 2.0 * gamma[i] * gamma[j] / circ.total;
            }
        }
    }
    hess += d2i * (omega / 2.0);

    let z = DVector::from_vec(z0.flat());
    let grad_i = DVector::from_iterator(dim, (0..dim).map(|k| 2.0 * gamma[k / 2] * z[k]));
    let tx = DVector::from_iterator(dim, (0..dim).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }));
    let ty = DVector::from_iterator(dim, (0..dim).map(|k| if k % 2 == 1 { 1.0 } else { 0.0 }));
    let rot = k_matrix(n) * &z;

    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in [grad_i, tx, ty, rot] {
        let norm0 = v.norm();
        let mut w = v;
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&w);
                w -= q * proj;
            }
        }
        let norm = w.norm();
        if !(norm > 1e-10 * norm0) {
            return Err(Error::Domain(
                "degenerate projection: constraint directions are linearly dependent".into(),
            ));
        }
        basis.push(w / norm);
    }
    let mut proj = DMatrix::identity(dim, dim);
    for q in &basis {
        proj -= q * q.transpose();
    }
    let reduced = &proj * hess * &proj;
    let sym = (&reduced + reduced.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Number of negative directions of `H` restricted to a level set of `I`,
/// modulo translations and rotation.
pub fn morse_index(solution: &Configuration, circ: &Circulations) -> Result<usize> {
    Ok(projected_hessian_eigenvalues(solution, circ)?
        .iter()
        .filter(|&&e| e < -MORSE_ZERO_BAND)
        .count())
}
