//! Command surface of the `collinear-vortex` binary.
//!
//! Every subcommand is a pure function from arguments to a [`CmdOutput`]; the
//! binary only parses arguments, prints and exits. Exit codes:
//!
//! | code | meaning |
//! |---|---|
//! | 0 | success |
//! | 1 | usage error |
//! | 2 | empty result |
//! | 3 | verification failure |

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{verify_with, CheckStatus, VerificationRecord, VerifyOptions};
use crate::equilibria::{scaled_residual, solve_all, Solution};
use crate::model::{Circulations, Group, Ordering};
use crate::stability::{psi_bifurcation_roots, stability_report, StabilityReport};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Header of every CSV file written by `solve` and `sweep`.
pub const CSV_HEADER: &str = "m,ordering,group,x3,x4,c,omega,T,D,l1_re,l1_im,l2_re,l2_im,region,verdict";

#[derive(Debug, Parser)]
#[command(
    name = "collinear-vortex",
    version,
    about = "Collinear relative equilibria of four point vortices with circulations (1, 1, 1, m)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All solutions at one value of m, with their stability data.
    Solve(SolveArgs),
    /// Solutions and stability data over a uniform grid in m.
    Sweep(SweepArgs),
    /// Eigenvalue bifurcation values and solution-count boundaries.
    Bifurcations(BifurcationArgs),
    /// Integrate one solution and cross-check its spectrum.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Filter {
    /// Keep only this ordering, e.g. 1243.
    #[arg(long)]
    pub ordering: Option<String>,
    /// Keep only this group (I or II).
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Circulation of vortex 4
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[command(flatten)]
    pub filter: Filter,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// First grid value of m
    #[arg(long, allow_negative_numbers = true)]
    pub m_min: f64,
    /// Last grid value of m
    #[arg(long, allow_negative_numbers = true)]
    pub m_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub filter: Filter,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BifurcationArgs {
    /// Text report unless json is requested.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Circulation of vortex 4
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    /// Ordering label of the solution to verify, e.g. 1234
    #[arg(long)]
    pub ordering: String,
    /// Rotation periods to integrate.
    #[arg(long, default_value_t = 1.0)]
    pub periods: f64,
    /// Integrator tolerance, relative and absolute.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Text report unless json is requested.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// What a subcommand prints and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {}\n", message.into()),
            code: EXIT_USAGE,
        }
    }
}

/// Runs a parsed command line, writing to `--out` when given.
pub fn run(cli: &Cli) -> CmdOutput {
    let mut out = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Bifurcations(a) => cmd_bifurcations(a),
        Command::Verify(a) => cmd_verify(a),
    };
    if let Some(path) = &cli.out {
        if out.code == EXIT_USAGE {
            return out;
        }
        if let Err(e) = std::fs::write(path, &out.stdout) {
            return CmdOutput::usage(format!("cannot write {}: {e}", path.display()));
        }
        out.stdout.clear();
    }
    out
}

/// `v` with 12 significant digits, no exponent for moderate magnitudes and
/// no trailing zeros.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn parse_filter(filter: &Filter) -> Result<(Option<Ordering>, Option<Group>), String> {
    let ordering = filter
        .ordering
        .as_deref()
        .map(|s| s.parse::<Ordering>().map_err(|e| e.to_string()))
        .transpose()?;
    let group = filter
        .group
        .as_deref()
        .map(|s| s.parse::<Group>().map_err(|e| e.to_string()))
        .transpose()?;
    Ok((ordering, group))
}

fn keep(sol: &Solution, ordering: Option<Ordering>, group: Option<Group>) -> bool {
    ordering.is_none_or(|o| o == sol.ordering) && group.is_none_or(|g| g == sol.group())
}

/// One solution at one `m` with its stability data; the row type of the CSV
/// output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: f64,
    pub ordering: Ordering,
    pub group: Group,
    pub x3: f64,
    pub x4: f64,
    pub c: f64,
    pub omega: f64,
    #[serde(rename = "T")]
    pub trace: f64,
    #[serde(rename = "D")]
    pub det: f64,
    /// `lambda_1` and `lambda_2`; the remaining two are their negatives.
    pub lambdas: [Complex64; 2],
    pub region: String,
    pub verdict: String,
}

impl SweepRow {
    pub fn new(m: f64, sol: &Solution, report: &StabilityReport) -> Self {
        Self {
            m,
            ordering: sol.ordering,
            group: sol.group(),
            x3: sol.config.x3(),
            x4: sol.config.x4(),
            c: sol.config.c,
            omega: sol.config.omega,
            trace: report.trace,
            det: report.det,
            lambdas: [report.lambdas[0], report.lambdas[2]],
            region: report.region.to_string(),
            verdict: report.verdict.to_string(),
        }
    }

    pub fn to_csv(&self) -> String {
        let nums = [
            self.m,
            self.x3,
            self.x4,
            self.c,
            self.omega,
            self.trace,
            self.det,
            self.lambdas[0].re,
            self.lambdas[0].im,
            self.lambdas[1].re,
            self.lambdas[1].im,
        ]
        .map(format_sig);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            nums[0],
            self.ordering,
            self.group,
            nums[1],
            nums[2],
            nums[3],
            nums[4],
            nums[5],
            nums[6],
            nums[7],
            nums[8],
            nums[9],
            nums[10],
            self.region,
            self.verdict
        )
    }
}

fn rows_at(m: f64, ordering: Option<Ordering>, group: Option<Group>) -> crate::Result<Vec<SweepRow>> {
    let set = solve_all(m)?;
    set.solutions
        .iter()
        .filter(|s| keep(s, ordering, group))
        .map(|s| Ok(SweepRow::new(m, s, &stability_report(m, &s.config)?)))
        .collect()
}

fn csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SolvedSolution<'a> {
    ordering: Ordering,
    group: Group,
    x: [f64; 4],
    c: f64,
    omega: f64,
    residual: f64,
    stability: &'a StabilityReport,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    m: f64,
    count: usize,
    solutions: Vec<SolvedSolution<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    notice: Option<String>,
}

fn no_solutions(m: f64) -> String {
    format!("no collinear relative equilibria for m = {m}")
}

pub fn cmd_solve(args: &SolveArgs) -> CmdOutput {
    let m = args.m;
    if m == -3.0 {
        return CmdOutput::usage("m = -3 is excluded: the total circulation vanishes");
    }
    let (ordering, group) = match parse_filter(&args.filter) {
        Ok(f) => f,
        Err(e) => return CmdOutput::usage(e),
    };
    let set = match solve_all(m) {
        Ok(s) => s,
        Err(e) => return CmdOutput::usage(e.to_string()),
    };
    let kept: Vec<&Solution> = set
        .solutions
        .iter()
        .filter(|s| keep(s, ordering, group))
        .collect();
    let reports = match kept
        .iter()
        .map(|s| stability_report(m, &s.config))
        .collect::<Result<Vec<_>, Error>>()
    {
        Ok(r) => r,
        Err(e) => return CmdOutput::usage(e.to_string()),
    };
    let notice = kept.is_empty().then(|| no_solutions(m));
    let stdout = match args.format {
        Format::Csv => csv(&kept
            .iter()
            .zip(&reports)
            .map(|(s, r)| SweepRow::new(m, s, r))
            .collect::<Vec<_>>()),
        Format::Json => json(&SolveReport {
            m,
            count: kept.len(),
            solutions: kept
                .iter()
                .zip(&reports)
                .map(|(s, r)| SolvedSolution {
                    ordering: s.ordering,
                    group: s.group(),
                    x: s.config.x,
                    c: s.config.c,
                    omega: s.config.omega,
                    residual: scaled_residual(&s.config, m),
                    stability: r,
                })
                .collect(),
            notice: notice.clone(),
        }),
    };
    CmdOutput {
        stdout,
        stderr: notice.map(|n| n + "\n").unwrap_or_default(),
        code: if kept.is_empty() { EXIT_EMPTY } else { EXIT_OK },
    }
}

/// The uniform grid `m_min, ..., m_max` with `steps` points.
pub fn sweep_grid(m_min: f64, m_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| {
            if k + 1 == steps {
                m_max
            } else {
                m_min + (m_max - m_min) * k as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Rows for every grid point and surviving solution, in grid order.
pub fn sweep_rows(
    grid: &[f64],
    ordering: Option<Ordering>,
    group: Option<Group>,
) -> crate::Result<Vec<SweepRow>> {
    let per_m: Vec<crate::Result<Vec<SweepRow>>> = grid
        .par_iter()
        .map(|&m| {
            if m == -3.0 {
                Ok(vec![])
            } else {
                rows_at(m, ordering, group)
            }
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_m {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn cmd_sweep(args: &SweepArgs) -> CmdOutput {
    if !(args.m_min < args.m_max) || !args.m_min.is_finite() || !args.m_max.is_finite() {
        return CmdOutput::usage("--m-min must be smaller than --m-max");
    }
    if args.steps < 2 {
        return CmdOutput::usage("--steps must be at least 2");
    }
    let (ordering, group) = match parse_filter(&args.filter) {
        Ok(f) => f,
        Err(e) => return CmdOutput::usage(e),
    };
    let rows = match sweep_rows(&sweep_grid(args.m_min, args.m_max, args.steps), ordering, group) {
        Ok(r) => r,
        Err(e) => return CmdOutput::usage(e.to_string()),
    };
    let stdout = match args.format {
        Format::Csv => csv(&rows),
        Format::Json => json(&rows),
    };
    if rows.is_empty() {
        return CmdOutput {
            stdout,
            stderr: "no collinear relative equilibria on this grid\n".into(),
            code: EXIT_EMPTY,
        };
    }
    CmdOutput::ok(stdout)
}

#[derive(Serialize)]
struct BifurcationReport {
    m_star: f64,
    m_c: f64,
    psi_negative_roots: Vec<f64>,
    no_solutions_up_to: f64,
    group_ii_exists_above: f64,
    group_i_stable_window: [f64; 2],
}

pub fn cmd_bifurcations(args: &BifurcationArgs) -> CmdOutput {
    let roots = match psi_bifurcation_roots() {
        Ok(r) => r,
        Err(e) => return CmdOutput::usage(e.to_string()),
    };
    let report = BifurcationReport {
        m_star: roots.m_star,
        m_c: roots.m_c,
        psi_negative_roots: roots.all_roots.clone(),
        no_solutions_up_to: -1.0,
        group_ii_exists_above: -0.5,
        group_i_stable_window: [-1.0, roots.m_star],
    };
    match args.format {
        Some(Format::Json) => return CmdOutput::ok(json(&report)),
        Some(Format::Csv) => return CmdOutput::usage("bifurcations supports text or json output"),
        None => {}
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "eigenvalue bifurcations (roots of Psi closest to the solution range)"
    );
    let _ = writeln!(s, "  m* = {:.9}", roots.m_star);
    let _ = writeln!(s, "  m_c = {:.9}", roots.m_c);
    let all: Vec<String> = roots.all_roots.iter().map(|r| format!("{r:.9}")).collect();
    let _ = writeln!(s, "  negative real roots of Psi: {}", all.join(", "));
    let _ = writeln!(s, "solution counts");
    let _ = writeln!(s, "  m <= -1: no collinear relative equilibria");
    let _ = writeln!(s, "  -1 < m <= -1/2: 6 solutions, Group I only");
    let _ = writeln!(s, "  m > -1/2: 12 solutions; Group II exists only for m > -1/2");
    let _ = writeln!(s, "stability of Group I");
    let _ = writeln!(
        s,
        "  (-1, {:.9}): linearly stable, all normalized eigenvalues imaginary",
        roots.m_star
    );
    let _ = writeln!(
        s,
        "  ({:.9}, {:.9}): unstable, complex quartuplet",
        roots.m_star, roots.m_c
    );
    let _ = writeln!(s, "  ({:.9}, infinity): unstable, two real pairs", roots.m_c);
    let _ = writeln!(s, "stability of Group II");
    let _ = writeln!(s, "  (-1/2, infinity): unstable, two real pairs");
    CmdOutput::ok(s)
}

fn fmt_complex(z: Complex64) -> String {
    let re = if z.re.abs() < 1e-12 { 0.0 } else { z.re };
    let im = if z.im.abs() < 1e-12 { 0.0 } else { z.im };
    if im == 0.0 {
        format!("{re:.10}")
    } else if re == 0.0 {
        format!("{im:.10}i")
    } else {
        format!("{re:.10}{:+.10}i", im)
    }
}

fn verify_text(ordering: Ordering, rec: &VerificationRecord, verdict: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verification of ordering {ordering} at m = {}", rec.m);
    let _ = writeln!(
        s,
        "  omega = {}, period = {}, periods = {}",
        format_sig(rec.omega),
        format_sig(rec.period),
        rec.periods
    );
    for c in &rec.checks {
        let tag = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        let _ = write!(
            s,
            "  [{tag}] {}: {:.3e} (tolerance {:.0e})",
            c.name, c.value, c.tolerance
        );
        match &c.note {
            Some(note) => {
                let _ = writeln!(s, ", {note}");
            }
            None => s.push('\n'),
        }
    }
    let spec: Vec<String> = rec.spectrum.eigenvalues.iter().map(|z| fmt_complex(*z)).collect();
    let _ = writeln!(s, "  spectrum: {}", spec.join(", "));
    let nontriv: Vec<String> = rec.spectrum.nontrivial.iter().map(|z| fmt_complex(*z)).collect();
    let _ = writeln!(s, "  nontrivial: {}", nontriv.join(", "));
    let _ = writeln!(s, "  analytic verdict: {verdict}");
    let skipped = rec
        .checks
        .iter()
        .filter(|c| c.status == CheckStatus::Skipped)
        .count();
    let verdict_line = match (rec.passed(), skipped) {
        (false, _) => "verification FAILED".to_string(),
        (true, 0) => "all checks passed".to_string(),
        (true, k) => format!("all applicable checks passed ({k} skipped)"),
    };
    let _ = writeln!(s, "{verdict_line}");
    s
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    ordering: Ordering,
    passed: bool,
    verdict: String,
    record: &'a VerificationRecord,
}

pub fn cmd_verify(args: &VerifyArgs) -> CmdOutput {
    let m = args.m;
    if m == -3.0 {
        return CmdOutput::usage("m = -3 is excluded: the total circulation vanishes");
    }
    if args.format == Some(Format::Csv) {
        return CmdOutput::usage("verify supports text or json output");
    }
    let ordering: Ordering = match args.ordering.parse() {
        Ok(o) => o,
        Err(e) => return CmdOutput::usage(format!("{e}")),
    };
    let set = match solve_all(m) {
        Ok(s) => s,
        Err(e) => return CmdOutput::usage(e.to_string()),
    };
    let Some(sol) = set.get(ordering) else {
        let available: Vec<String> = set.orderings().iter().map(|o| o.to_string()).collect();
        let list = if available.is_empty() {
            "none: there are no collinear relative equilibria at this m".to_string()
        } else {
            available.join(", ")
        };
        return CmdOutput::usage(format!(
            "no solution with ordering {ordering} at m = {m}; available orderings: {list}"
        ));
    };
    let circ = Circulations::new(m);
    let opts = VerifyOptions {
        periods: args.periods,
        tol: args.tol,
        ..VerifyOptions::default()
    };
    let rec = match verify_with(&sol.config, &circ, opts) {
        Ok(r) => r,
        Err(e) => return CmdOutput::usage(e.to_string()),
    };
    let verdict = match stability_report(m, &sol.config) {
        Ok(r) => format!("{} ({})", r.verdict, r.region),
        Err(e) => return CmdOutput::usage(e.to_string()),
    };
    let stdout = match args.format {
        Some(Format::Json) => json(&VerifyReport {
            ordering,
            passed: rec.passed(),
            verdict,
            record: &rec,
        }),
        _ => verify_text(ordering, &rec, &verdict),
    };
    CmdOutput {
        stdout,
        stderr: String::new(),
        code: if rec.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED },
    }
}
