//! All twelve collinear relative equilibria for four equal vortices, checked
//! against the closed form of the `1234` solution.

use collinear_vortex::equilibria::{scaled_residual, solve_all};
use collinear_vortex::model::{hamiltonian, Circulations};

pub fn run() -> collinear_vortex::Result<()> {
    let m = 1.0;
    let circ = Circulations::new(m);
    let set = solve_all(m)?;
    println!("{} solutions at m = {m}", set.count());
    println!("ordering group        x3            x4             c         omega   residual");
    for sol in &set.solutions {
        let cf = &sol.config;
        println!(
            "{}     {:<3} {:>13.9} {:>13.9} {:>13.9} {:>10.7} {:>9.1e}",
            sol.ordering,
            sol.group(),
            cf.x3(),
            cf.x4(),
            cf.c,
            cf.omega,
            scaled_residual(cf, m)
        );
    }

    let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    let sol = set.by_label("1234").expect("present for m > -1/2");
    let exact = [
        -1.0 + s2 + s6,
        1.0 + s2 + s6,
        (s2 + s6) / 2.0,
        3.0 / (6.0 + 2.0 * s3),
    ];
    let err = sol
        .config
        .unknowns()
        .iter()
        .zip([exact[3], exact[2], exact[0], exact[1]])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("1234 against the closed form: max error {err:.1e}");

    println!("H(1234) = {:.12}", hamiltonian(&sol.config, &circ)?);
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
