//! Command-line driver for torsion computations, verification suites and spectrum dumps.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 audit or verification failure.

mod suites;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use conetorsion_core::base_spectrum::{coclosed_spectrum, read_spectrum_file, spectrum_file_text, BaseManifold};
use conetorsion_core::precision_math::Precision;
use conetorsion_core::torsion::{torsion_report, TorsionReport};
use rug::Float;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "conetorsion", version, about = "Analytic torsion of even-dimensional bounded cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Grid {
    Small,
    Full,
}

#[derive(clap::Args, Debug)]
struct BaseArgs {
    /// Base manifold: sphere:n, torus:n or torus:r1,r2,...
    #[arg(long, conflicts_with = "spectrum_file")]
    base: Option<String>,
    /// Spectrum file describing the base.
    #[arg(long)]
    spectrum_file: Option<PathBuf>,
    /// Rank of the trivial flat bundle.
    #[arg(long, default_value_t = 1)]
    rank: u64,
}

#[derive(clap::Args, Debug)]
struct CommonArgs {
    /// Working precision in decimal digits.
    #[arg(long, env = "CONETORSION_PRECISION", default_value_t = 50)]
    precision: u32,
    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cone torsion breakdown with internal audits.
    Torsion {
        #[command(flatten)]
        base: BaseArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// ε values for the ε-independence audit.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.25])]
        eps: Vec<f64>,
    },
    /// Run verification suites.
    Verify {
        /// Suites to run (comma separated, or "all").
        #[arg(long, value_delimiter = ',', default_values_t = ["all".to_string()])]
        suite: Vec<String>,
        /// Largest Olver index for the DM suite.
        #[arg(long, default_value_t = 9)]
        rmax: usize,
        /// Grid size for the determinant-ratio oracle suite.
        #[arg(long, value_enum, default_value_t = Grid::Small)]
        grid: Grid,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write the coclosed spectra of a base in the spectrum file format.
    Spectrum {
        #[command(flatten)]
        base: BaseArgs,
        /// Cutoff in ν = √(η + A_k²).
        #[arg(long, default_value_t = 10.0)]
        cutoff: f64,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_base(args: &BaseArgs) -> Result<BaseManifold> {
    match (&args.base, &args.spectrum_file) {
        (Some(d), None) => Ok(BaseManifold::parse(d, args.rank)?),
        (None, Some(path)) => read_spectrum_file(path).with_context(|| format!("reading {}", path.display())),
        _ => bail!("exactly one of --base or --spectrum-file is required"),
    }
}

fn precision(digits: u32) -> Result<Precision> {
    if digits < 20 {
        bail!("precision must be at least 20 digits, got {digits}");
    }
    Ok(Precision::new(digits)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn torsion_table(r: &TorsionReport) -> String {
    let dash = || "n/a".to_string();
    let b = &r.breakdown;
    let mut s = String::new();
    s.push_str(&format!("base {} (n={}, rank={}, {} digits){}\n", r.base, r.n, r.rank, r.precision, if r.approximate { " [approximate]" } else { "" }));
    for (name, v) in [("top", &b.top), ("tors", &b.tors), ("res_spectral", &b.res_spectral), ("res_anomaly", &b.res_anomaly), ("total", &b.total)] {
        s.push_str(&format!("  {name:<13} {}\n", v.clone().unwrap_or_else(dash)));
    }
    s.push_str(&format!("  eps_cancel    {}\n", r.audits.eps_cancel.clone().unwrap_or_else(dash)));
    s.push_str(&format!("  headline_gap  {}\n", r.audits.headline_gap.clone().unwrap_or_else(dash)));
    for u in &r.unavailable {
        s.push_str(&format!("  unavailable: {u}\n"));
    }
    s.push_str(&format!("  audits {}\n", if r.audits.passed { "passed" } else { "FAILED" }));
    s
}

fn cmd_torsion(base: &BaseArgs, common: &CommonArgs, eps: &[f64]) -> Result<ExitCode> {
    let p = precision(common.precision)?;
    let base = load_base(base)?;
    for e in eps {
        if !(*e > 0.0 && *e < 1.0) {
            bail!("ε must lie in (0,1), got {e}");
        }
    }
    let eps: Vec<Float> = eps.iter().map(|e| Float::with_val(p.bits(), *e)).collect();
    let report = torsion_report(&base, &eps, p)?;
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Table => torsion_table(&report),
    };
    emit(&common.out, &text)?;
    Ok(if report.audits.passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_verify(suite: &[String], rmax: usize, grid: Grid, common: &CommonArgs) -> Result<ExitCode> {
    let opts = suites::SuiteOptions { precision: precision(common.precision)?, rmax, full_grid: grid == Grid::Full };
    let names: Vec<String> = if suite.iter().any(|s| s == "all") {
        suites::SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        suite.to_vec()
    };
    for n in &names {
        if !suites::SUITES.contains(&n.as_str()) {
            bail!("unknown suite '{n}'; expected one of {}", suites::SUITES.join(", "));
        }
    }
    let mut text = String::new();
    let mut all_pass = true;
    for n in &names {
        for c in suites::run(n, &opts)? {
            all_pass &= c.pass;
            match common.format {
                Format::Json => text.push_str(&(c.to_json().to_string() + "\n")),
                Format::Table => text.push_str(&format!(
                    "{:<4} {:<10} {:<60} {:>14} (tol {})\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.suite,
                    c.check,
                    c.value,
                    c.tolerance
                )),
            }
        }
    }
    emit(&common.out, &text)?;
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_spectrum(base: &BaseArgs, cutoff: f64, out: &Option<PathBuf>) -> Result<ExitCode> {
    let base = load_base(base)?;
    let text = spectrum_file_text(&base, cutoff)?;
    let n = base.dim();
    let mut dual = true;
    for k in 0..n {
        let a = coclosed_spectrum(&base, k, cutoff)?;
        let b = coclosed_spectrum(&base, n - 1 - k, cutoff)?;
        dual &= a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.eta == y.eta && x.multiplicity == y.multiplicity);
    }
    emit(out, &text)?;
    eprintln!("duality check: {}", if dual { "pass" } else { "FAIL" });
    Ok(if dual { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Torsion { base, common, eps } => cmd_torsion(base, common, eps),
        Command::Verify { suite, rmax, grid, common } => cmd_verify(suite, *rmax, *grid, common),
        Command::Spectrum { base, cutoff, out } => cmd_spectrum(base, *cutoff, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli).map_err(|e| anyhow!(e)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
