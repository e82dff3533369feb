//! Shared oracles and invariant checks for the integration tests and the
//! acceptance harness.
#![allow(dead_code, clippy::needless_range_loop)]

use collinear_vortex::dynamics::{analyze_spectrum, dense_eigenvalues, scaled_stability_matrix, PlanarState};
use collinear_vortex::equilibria::refine::newton_polish;
use collinear_vortex::equilibria::{p2_roots, solve_all, symmetric_functions, SymmetryElement};
use collinear_vortex::model::Circulations;
use collinear_vortex::real::{DoubleDouble, Real};
use collinear_vortex::rootfind::RealPolynomial;
use collinear_vortex::stability::invariants_at;
use collinear_vortex::stability::series::{Quantity, SeriesExpansion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Multi-start Newton oracle on the raw defining system.

/// Residuals of `omega (x_i - c) = sum_{j != i} gamma_j / (x_i - x_j)` with
/// `x1 = -1`, `x2 = 1`, unknowns `u = (omega, c, x3, x4)`, each divided by the
/// largest term of its equation.
pub fn oracle_residual(m: f64, u: [f64; 4]) -> [f64; 4] {
    let [omega, c, x3, x4] = u;
    let x = [-1.0, 1.0, x3, x4];
    let g = [1.0, 1.0, 1.0, m];
    std::array::from_fn(|i| {
        let lhs = omega * (x[i] - c);
        let mut rhs = 0.0;
        let mut scale = lhs.abs().max(1.0);
        for j in 0..4 {
            if j != i {
                let t = g[j] / (x[i] - x[j]);
                rhs += t;
                scale = scale.max(t.abs());
            }
        }
        (lhs - rhs) / scale
    })
}

fn unscaled(m: f64, u: [f64; 4]) -> [f64; 4] {
    let [omega, c, x3, x4] = u;
    let x = [-1.0, 1.0, x3, x4];
    let g = [1.0, 1.0, 1.0, m];
    std::array::from_fn(|i| {
        let mut r = omega * (x[i] - c);
        for j in (0..4).filter(|&j| j != i) {
            r -= g[j] / (x[i] - x[j]);
        }
        r
    })
}

fn norm(v: &[f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn gauss_solve(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn fd_jacobian(m: f64, u: [f64; 4]) -> [[f64; 4]; 4] {
    let mut jac = [[0.0; 4]; 4];
    for k in 0..4 {
        let h = 1e-7 * (1.0 + u[k].abs());
        let mut up = u;
        let mut dn = u;
        up[k] += h;
        dn[k] -= h;
        let (fp, fm) = (unscaled(m, up), unscaled(m, dn));
        for i in 0..4 {
            jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

fn admissible(u: &[f64; 4]) -> bool {
    let x = [-1.0, 1.0, u[2], u[3]];
    let mut ok = u.iter().all(|v| v.is_finite() && v.abs() < 1e4);
    for i in 0..4 {
        for j in i + 1..4 {
            ok &= (x[i] - x[j]).abs() > 1e-5;
        }
    }
    ok
}

/// Damped Newton from one start; `None` unless it converges to a scaled
/// residual below 1e-12.
pub fn oracle_newton(m: f64, mut u: [f64; 4]) -> Option<[f64; 4]> {
    let mut f = unscaled(m, u);
    for _ in 0..100 {
        if !admissible(&u) {
            return None;
        }
        if norm(&oracle_residual(m, u)) < 1e-13 {
            break;
        }
        let step = gauss_solve(fd_jacobian(m, u), f.map(|v| -v))?;
        let mut t = 1.0;
        loop {
            let trial: [f64; 4] = std::array::from_fn(|k| u[k] + t * step[k]);
            if admissible(&trial) {
                let ft = unscaled(m, trial);
                if norm(&ft) < norm(&f) || t < 1e-3 {
                    u = trial;
                    f = ft;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return None;
            }
        }
    }
    (admissible(&u) && norm(&oracle_residual(m, u)) < 1e-12).then_some(u)
}

/// Distinct solutions found from `starts` random starts with `x3, x4` in
/// `[-7, 7]`, `omega` in `[0.05, 6]` and `c` in `[-4, 4]`.
pub fn oracle_solutions(m: f64, starts: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<[f64; 4]> = Vec::new();
    for _ in 0..starts {
        let u0 = [
            rng.gen_range(0.05..6.0),
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-7.0..7.0),
            rng.gen_range(-7.0..7.0),
        ];
        if let Some(u) = oracle_newton(m, u0) {
            let dup = found
                .iter()
                .any(|v| (0..4).all(|k| (u[k] - v[k]).abs() <= 1e-6 * v[k].abs().max(1.0)));
            if !dup {
                found.push(u);
            }
        }
    }
    found
}

/// Compares the oracle set with `solve_all(m)`; returns the number of matched
/// solutions or a description of the mismatch.
pub fn oracle_agrees(m: f64, starts: usize, seed: u64) -> Result<usize, String> {
    let set = solve_all(m).map_err(|e| e.to_string())?;
    let oracle = oracle_solutions(m, starts, seed);
    let ours: Vec<[f64; 4]> = set.solutions.iter().map(|s| s.config.unknowns()).collect();
    let close =
        |a: &[f64; 4], b: &[f64; 4]| (0..4).all(|k| (a[k] - b[k]).abs() <= 1e-7 * b[k].abs().max(1.0));
    for o in &oracle {
        if !ours.iter().any(|s| close(s, o)) {
            return Err(format!(
                "oracle solution {o:?} missing from the solver at m = {m}"
            ));
        }
    }
    for s in &ours {
        if !oracle.iter().any(|o| close(s, o)) {
            return Err(format!(
                "solver solution {s:?} not found by the oracle at m = {m}"
            ));
        }
    }
    if oracle.len() != ours.len() {
        return Err(format!(
            "oracle found {} solutions, solver {}",
            oracle.len(),
            ours.len()
        ));
    }
    Ok(ours.len())
}

// ---------------------------------------------------------------------------
// Series evaluation against double-double solutions.

type DD = DoubleDouble;

/// Errors at each `eps` and the observed orders between consecutive ones.
/// The difference is formed in double-double before rounding.
pub fn series_errors(s: &SeriesExpansion, eps: &[f64]) -> Result<(Vec<f64>, Vec<f64>), String> {
    let label = s.regime.ordering().to_string();
    let mut errs = Vec::new();
    for &e in eps {
        let m = s.regime.parameter(e);
        let set = solve_all(m).map_err(|er| er.to_string())?;
        let sol = set
            .by_label(&label)
            .ok_or_else(|| format!("no {label} at m = {m}"))?;
        let [omega, _, x3, x4] = newton_polish(DD::from_f64(m), sol.config.unknowns().map(DD::from_f64), 8);
        let gamma = Circulations::new(m).gamma.map(DD::from_f64);
        let one = DD::one();
        let (t, _, d) = invariants_at(gamma, [-one, one, x3, x4], omega);
        let exact = match s.quantity {
            Quantity::X3 => x3,
            Quantity::X4 => x4,
            Quantity::T => t,
            Quantity::D => d,
            Quantity::Kappa => (x3 * x3 - one) / (x3 * (DD::from_f64(9.0) - x3 * x3)),
        };
        errs.push((exact - s.eval(DD::from_f64(e))).abs().to_f64());
    }
    let ratio = eps[0] / eps[1];
    let orders = errs.windows(2).map(|w| (w[0] / w[1]).ln() / ratio.ln()).collect();
    Ok((errs, orders))
}

// ---------------------------------------------------------------------------
// Invariants shared by the property tests and the acceptance harness.

/// Builds a polynomial from well-separated roots and checks `real_roots`
/// recovers them, each with a small backward residual.
pub fn check_root_recovery(roots: &[f64], lead: f64) -> Result<(), String> {
    let mut sorted = roots.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut p = RealPolynomial::new(vec![lead]);
    for &r in &sorted {
        p = p.mul(&RealPolynomial::new(vec![-r, 1.0]));
    }
    let found = p.real_roots().map_err(|e| e.to_string())?;
    if found.len() != sorted.len() {
        return Err(format!(
            "expected {} roots, found {found:?} for {sorted:?}",
            sorted.len()
        ));
    }
    for (&got, &want) in found.iter().zip(&sorted) {
        let bound: f64 = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * got.abs().powi(k as i32))
            .sum();
        if p.eval(got).abs() > 1e-11 * bound {
            return Err(format!("residual {} at root {got}", p.eval(got)));
        }
        if (got - want).abs() > 1e-7 * want.abs().max(1.0) {
            return Err(format!("root {got} differs from {want}"));
        }
    }
    Ok(())
}

/// `sigma + rho = 0` and `tau = -9` for the roots of `P2(x; rho)`.
pub fn check_symmetric_functions(rho: f64) -> Result<(), String> {
    let roots = p2_roots(rho);
    let f = symmetric_functions(roots);
    let scale = 1.0 + rho.abs();
    if (f.sigma + f.rho).abs() > 1e-9 * scale * scale {
        return Err(format!("sigma + rho = {} at rho = {rho}", f.sigma + f.rho));
    }
    if (f.tau + 9.0).abs() > 1e-9 * scale * scale {
        return Err(format!("tau = {} at rho = {rho}", f.tau));
    }
    Ok(())
}

/// Composition table agrees with the action, and the action maps solutions
/// to solutions.
pub fn check_group_law(g: SymmetryElement, h: SymmetryElement, m: f64) -> Result<(), String> {
    let set = solve_all(m).map_err(|e| e.to_string())?;
    for sol in &set.solutions {
        let (a, b) = (sol.config.x3(), sol.config.x4());
        let composed = g.compose(h).apply(a, b).map_err(|e| e.to_string())?;
        let (p, q) = h.apply(a, b).map_err(|e| e.to_string())?;
        let sequential = g.apply(p, q).map_err(|e| e.to_string())?;
        let tol = 1e-8 * composed.0.abs().max(composed.1.abs()).max(1.0);
        if (composed.0 - sequential.0).abs() > tol || (composed.1 - sequential.1).abs() > tol {
            return Err(format!(
                "{g} after {h} differs from the composed action at m = {m}"
            ));
        }
        let hit = set
            .solutions
            .iter()
            .any(|s| (s.config.x3() - composed.0).abs() <= tol && (s.config.x4() - composed.1).abs() <= tol);
        if !hit {
            return Err(format!(
                "image {composed:?} of {} under {} is not a solution at m = {m}",
                sol.ordering,
                g.compose(h)
            ));
        }
    }
    Ok(())
}

pub fn check_no_coincident_pair(m: f64) -> Result<(), String> {
    let set = solve_all(m).map_err(|e| e.to_string())?;
    for s in &set.solutions {
        if (s.config.x3() - s.config.x4()).abs() < 1e-6 {
            return Err(format!("x3 = x4 for {} at m = {m}", s.ordering));
        }
    }
    Ok(())
}

/// The spectrum of the scaled stability matrix is symmetric under negation.
pub fn check_hamiltonian_pairing(m: f64, index: usize) -> Result<(), String> {
    let set = solve_all(m).map_err(|e| e.to_string())?;
    if set.is_empty() {
        return Ok(());
    }
    let sol = &set.solutions[index % set.count()];
    let circ = Circulations::new(m);
    let state = PlanarState::from_configuration(&sol.config, &circ, true).map_err(|e| e.to_string())?;
    let b = scaled_stability_matrix(&state, sol.config.omega).map_err(|e| e.to_string())?;
    let eig = dense_eigenvalues(&b).map_err(|e| e.to_string())?;
    let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let report = analyze_spectrum(eig);
    if report.pairing_error > 1e-6 * scale {
        return Err(format!(
            "pairing error {:e} at m = {m}, {}",
            report.pairing_error, sol.ordering
        ));
    }
    Ok(())
}
