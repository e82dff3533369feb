//! Full planar integration and the dense spectrum of the scaled stability
//! matrix, cross-checked against the analytic eigenvalues, plus the Morse
//! index of each solution.

use collinear_vortex::dynamics::{morse_index, verify_relative_equilibrium};
use collinear_vortex::equilibria::solve_all;
use collinear_vortex::model::Circulations;

pub fn run() -> collinear_vortex::Result<()> {
    for (m, label) in [(1.0, "1234"), (-0.25, "1243"), (-0.9, "1324"), (-0.5, "1234")] {
        let circ = Circulations::new(m);
        let set = solve_all(m)?;
        let sol = set.by_label(label).expect("ordering exists");
        let rec = verify_relative_equilibrium(&sol.config, &circ)?;
        println!(
            "m = {m}, ordering {label}: {}",
            if rec.passed() { "passed" } else { "FAILED" }
        );
        println!(
            "  return {:.1e}, H drift {:.1e}, I drift {:.1e}, trivial {:.1e}, lambda mismatch {:.1e}",
            rec.return_deviation, rec.h_drift, rec.i_drift, rec.spectrum.trivial_error, rec.lambda_error
        );
        let nontrivial: Vec<String> = rec
            .spectrum
            .nontrivial
            .iter()
            .map(|z| format!("{z:.6}"))
            .collect();
        println!("  nontrivial spectrum: {}", nontrivial.join("  "));
        let indices: Vec<usize> = set
            .solutions
            .iter()
            .map(|s| morse_index(&s.config, &circ))
            .collect::<Result<_, _>>()?;
        println!("  Morse indices of all {} solutions: {:?}", set.count(), indices);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
