//! Trace, determinant and verdict of both groups across `m`, showing the
//! stable window of Group I next to `m = -1`.

use collinear_vortex::equilibria::solve_all;
use collinear_vortex::model::Group;
use collinear_vortex::stability::stability_report;

pub fn run() -> collinear_vortex::Result<()> {
    let samples = [-0.99, -0.95, -0.9, -0.8, -0.5, -0.25, -0.1, -0.01, 0.5, 1.0, 5.0];
    println!("    m  group         T           D    D - T^2/4  region          verdict");
    for m in samples {
        let set = solve_all(m)?;
        for group in [Group::I, Group::II] {
            // T and D are shared by the whole group
            let Some(sol) = set.group(group).next() else {
                continue;
            };
            let rep = stability_report(m, &sol.config)?;
            println!(
                "{m:>5}  {:<3} {:>11.5} {:>11.5} {:>12.5}  {:<15} {}",
                group.to_string(),
                rep.trace,
                rep.det,
                rep.det - rep.trace * rep.trace / 4.0,
                rep.region.to_string(),
                rep.verdict
            );
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
