//! The roots of `Psi` against a direct scan of `D - T^2/4` along Group I.

use collinear_vortex::equilibria::solve_all;
use collinear_vortex::model::Group;
use collinear_vortex::rootfind::bracketed_root;
use collinear_vortex::stability::{psi, psi_bifurcation_roots, stability_report};

fn discriminant(m: f64) -> f64 {
    let set = solve_all(m).expect("solvable");
    let sol = set.group(Group::I).next().expect("Group I exists for m > -1");
    let rep = stability_report(m, &sol.config).expect("stability data");
    rep.det - rep.trace * rep.trace / 4.0
}

pub fn run() -> collinear_vortex::Result<()> {
    let roots = psi_bifurcation_roots()?;
    println!("negative roots of Psi: {:?}", roots.all_roots);
    println!("m* = {:.12}  (Psi = {:.1e})", roots.m_star, psi(roots.m_star));
    println!("m_c = {:.12}  (Psi = {:.1e})", roots.m_c, psi(roots.m_c));

    let n = 2000;
    let grid: Vec<f64> = (1..=n).map(|k| -1.0 + 2.0 * k as f64 / n as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&m| discriminant(m)).collect();
    for k in 1..n {
        if values[k - 1].signum() != values[k].signum() {
            let m = bracketed_root(discriminant, grid[k - 1], grid[k], 1e-13)?;
            println!("D - T^2/4 changes sign at m = {m:.12}");
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
