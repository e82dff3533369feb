//! The polynomial layer on its own: the quadratic `P1` in `rho^2`, the cubic
//! `P2` whose roots are the `x3` values of one symmetry orbit, and the
//! symmetric functions of those roots.

use collinear_vortex::equilibria::{p1_roots, p2, p2_roots, symmetric_functions};
use collinear_vortex::rootfind::{cubic_real_roots, RealPolynomial};

pub fn run() -> collinear_vortex::Result<()> {
    for m in [1.0, 0.25, -0.25, -0.75] {
        println!("m = {m}");
        for root in p1_roots(m) {
            let xs = p2_roots(root.rho);
            let sf = symmetric_functions(xs);
            let worst = xs.iter().map(|&x| p2(x, root.rho).abs()).fold(0.0, f64::max);
            println!(
                "  rho = {:>10.6}: x3 in {:>9.5?}, |P2| <= {worst:.1e}, sigma + rho = {:.1e}, tau = {}",
                root.rho,
                xs,
                sf.sigma + sf.rho,
                sf.tau
            );
        }
    }

    // a cubic with a double root and a generic quintic
    println!("{:?}", cubic_real_roots(&[-4.0, 8.0, -5.0, 1.0])?);
    let p = RealPolynomial::new(vec![1.0, -3.0, 0.0, 2.0, 0.0, 0.5]);
    for x in p.real_roots()? {
        println!("root {x:.15}, residual {:.1e}", p.eval(x));
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
