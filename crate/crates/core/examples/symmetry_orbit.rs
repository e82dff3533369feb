//! The `S3` action on `(x3, x4)` permutes the solutions of each group; this
//! example maps the `1234` and `1243` solutions through every group element.

use collinear_vortex::equilibria::symmetry::SymmetryElement;
use collinear_vortex::equilibria::{ordering_of, solve_all};
use collinear_vortex::model::{Circulations, Configuration};
use collinear_vortex::stability::stability_report;

pub fn run() -> collinear_vortex::Result<()> {
    let m = 0.3;
    let circ = Circulations::new(m);
    let set = solve_all(m)?;
    for label in ["1234", "1243"] {
        let base = set.by_label(label).expect("twelve solutions for m > -1/2").config;
        println!("orbit of {label} at m = {m}");
        for g in SymmetryElement::ALL {
            let (a, b) = g.apply(base.x3(), base.x4())?;
            let image = Configuration::from_positions(a, b, &circ)?;
            let ordering = ordering_of(&image)?;
            let found = set.get(ordering).expect("image is a solution");
            let rep = stability_report(m, &found.config)?;
            println!(
                "  {:<4} -> {ordering}  x3 = {:>11.7} (solver {:>11.7})  T = {:.9}  D = {:.9}",
                g.to_string(),
                a,
                found.config.x3(),
                rep.trace,
                rep.det
            );
        }
    }
    use SymmetryElement::*;
    println!(
        "R o S = {}, S o R = {}, R^3 = {}",
        R.compose(S),
        S.compose(R),
        R.compose(R).compose(R)
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
