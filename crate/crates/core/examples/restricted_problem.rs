//! `m = 0`: vortex 4 is a passive tracer in the field of three equal vortices.
//! The three primaries sit at the roots of `x (x^2 - 9)` and the tracer has
//! four positions for each.

use collinear_vortex::equilibria::{extend_restricted, p2_roots, solve_all};
use collinear_vortex::stability::stability_report;

pub fn run() -> collinear_vortex::Result<()> {
    for x3 in p2_roots(0.0) {
        let tracers: Vec<String> = extend_restricted(x3)?
            .iter()
            .map(|c| format!("{:.9}", c.x4()))
            .collect();
        println!("x3 = {x3:>3}: x4 in {{{}}}", tracers.join(", "));
    }

    let set = solve_all(0.0)?;
    println!("\n{} solutions", set.count());
    for sol in &set.solutions {
        let rep = stability_report(0.0, &sol.config)?;
        println!(
            "{} ({:<2}) T = {:>9.6} D = {:>10.6} lambda = {:.6}, {:.6}",
            sol.ordering,
            sol.group(),
            rep.trace,
            rep.det,
            rep.lambdas[0],
            rep.lambdas[2]
        );
    }
    let s57 = 57f64.sqrt();
    println!(
        "\nexpected: sqrt 3 = {:.9}, (1/4) sqrt(266 - 30 sqrt 57) = {:.9}, (1/4) sqrt(266 + 30 sqrt 57) = {:.9}",
        3f64.sqrt(),
        (266.0 - 30.0 * s57).sqrt() / 4.0,
        (266.0 + 30.0 * s57).sqrt() / 4.0
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
