//! Solver output against the truncated expansions near the ends of each
//! solution family, with the empirical convergence order of the error.

use collinear_vortex::equilibria::refine::newton_polish;
use collinear_vortex::equilibria::solve_all;
use collinear_vortex::model::Circulations;
use collinear_vortex::real::{DoubleDouble, Real};
use collinear_vortex::stability::invariants_at;
use collinear_vortex::stability::series::{all, Quantity};

type DD = DoubleDouble;

/// The quantity at `m`, refined and evaluated in double-double.
fn exact(q: Quantity, m: f64, label: &str) -> collinear_vortex::Result<DD> {
    let set = solve_all(m)?;
    let sol = set.by_label(label).expect("ordering exists in this regime");
    let [omega, _, x3, x4] = newton_polish(DD::from_f64(m), sol.config.unknowns().map(DD::from_f64), 8);
    let gamma = Circulations::new(m).gamma.map(DD::from_f64);
    let one = DD::one();
    let (t, _, d) = invariants_at(gamma, [-one, one, x3, x4], omega);
    Ok(match q {
        Quantity::X3 => x3,
        Quantity::X4 => x4,
        Quantity::T => t,
        Quantity::D => d,
        Quantity::Kappa => {
            let x = x3;
            (x * x - one) / (x * (DD::from_f64(9.0) - x * x))
        }
    })
}

pub fn run() -> collinear_vortex::Result<()> {
    let eps = [0.1, 0.05, 0.025];
    for s in all() {
        let label = s.regime.ordering().to_string();
        let mut errs = Vec::new();
        for &e in &eps {
            let m = s.regime.parameter(e);
            let got = exact(s.quantity, m, &label)?;
            let approx = s.eval(DD::from_f64(e));
            errs.push((got - approx).abs().to_f64());
        }
        let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        println!(
            "{:<22} {:<6} error order {:>3}: errors {:.2e} {:.2e} {:.2e}, observed orders {:.2} {:.2}",
            format!("{:?}", s.regime),
            format!("{:?}", s.quantity),
            s.error_order,
            errs[0],
            errs[1],
            errs[2],
            orders[0],
            orders[1]
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
