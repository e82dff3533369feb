//! Writes the CSV data behind the standard plots: `x4` against `x3` along
//! `1234` and `1324`, and the `(T, D)` curve of Group I. Usage:
//! `cargo run --example figure_sweeps -- [output directory]`.

use std::path::PathBuf;

use collinear_vortex::cli::{sweep_grid, sweep_rows, SweepRow, CSV_HEADER};
use collinear_vortex::equilibria::solve_all;
use collinear_vortex::model::{Group, Ordering};

fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

/// `(file name, csv)` for each data set.
pub fn run() -> collinear_vortex::Result<Vec<(&'static str, String)>> {
    let set = solve_all(-0.25)?;
    println!("configurations at m = -0.25:");
    for sol in &set.solutions {
        println!(
            "  {}  x3 = {:>8.4}  x4 = {:>8.4}",
            sol.ordering,
            sol.config.x3(),
            sol.config.x4()
        );
    }

    let o1234: Ordering = "1234".parse()?;
    let o1324: Ordering = "1324".parse()?;
    let outward = sweep_rows(&sweep_grid(-0.5, 10.0, 400), Some(o1234), None)?;
    // the left end m = -1 has no solutions
    let inward = sweep_rows(&sweep_grid(-0.999, -0.5, 400), Some(o1324), None)?;
    let trace_det = sweep_rows(&sweep_grid(-1.0, 1.0, 801), Some(o1234), Some(Group::I))?;

    for (name, rows) in [("1234", &outward), ("1324", &inward)] {
        let (first, last) = (rows.first().expect("rows"), rows.last().expect("rows"));
        println!(
            "{name}: m from {} to {}: (x3, x4) from ({:.4}, {:.4}) to ({:.4}, {:.4})",
            first.m, last.m, first.x3, first.x4, last.x3, last.x4
        );
    }
    let crossings = trace_det
        .windows(2)
        .filter(|w| {
            let f = |r: &SweepRow| r.det - r.trace * r.trace / 4.0;
            f(&w[0]).signum() != f(&w[1]).signum()
        })
        .map(|w| format!("({}, {})", w[0].m, w[1].m))
        .collect::<Vec<_>>();
    println!("(T, D) crosses D = T^2/4 in {}", crossings.join(" and "));

    Ok(vec![
        ("x3_x4_1234.csv", to_csv(&outward)),
        ("x3_x4_1324.csv", to_csv(&inward)),
        ("trace_det_group_i.csv", to_csv(&trace_det)),
    ])
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    let files = match run() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    std::fs::create_dir_all(&dir).expect("output directory");
    for (name, csv) in files {
        let path = dir.join(name);
        std::fs::write(&path, csv).expect("writable output");
        println!("wrote {}", path.display());
    }
}
