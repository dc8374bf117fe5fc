//! `morita`: check, solve and regenerate instance files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use morita_core::fusion::{self, PivotalAssignment};
use morita_core::modulecat;
use morita_core::numerics::Tolerance;
use morita_core::runner::{self, RunReport, Suite, TierMode};
use morita_core::schema::{self, Instance};
use morita_core::{instances, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NO_SOLUTION: u8 = 3;

#[derive(Parser)]
#[command(name = "morita", version, about = "Coherence, duality and pivotal checks for skeletal tensor category data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveTarget {
    Pivotal,
    ModulePivotal,
}

#[derive(clap::Args)]
struct Common {
    /// Absolute tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol_abs: f64,
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol_rel: f64,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Drop unknown fields with a warning instead of rejecting the file.
    #[arg(long)]
    lenient: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites on instance files.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Comma-separated suite names; all applicable suites by default.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        /// auto, dimension or structure.
        #[arg(long, default_value = "auto")]
        tier: String,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also rerun every suite on a randomly relabeled copy and compare verdicts.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate pivotal or module pivotal structures.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveTarget::Pivotal)]
        target: SolveTarget,
        #[command(flatten)]
        common: Common,
    },
    /// Regenerate the bundled corpus files.
    Corpus {
        /// Output directory.
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { paths, suites, tier, jobs, seed, common } => check(&paths, &suites, &tier, jobs, seed, &common),
        Command::Solve { path, target, common } => solve(&path, target, &common),
        Command::Corpus { dir } => corpus(&dir),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn emit(common: &Common, text: String, json: impl Serialize) -> Result<(), Error> {
    let body = match common.emit {
        Emit::Text => text,
        Emit::Json => serde_json::to_string_pretty(&json).map_err(|e| Error::Schema(e.to_string()))? + "\n",
    };
    match &common.out {
        Some(p) => std::fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn load(path: &Path, lenient: bool) -> Result<Instance, Error> {
    schema::load(path, !lenient).map_err(|e| match e {
        Error::Io(io) => Error::Schema(format!("{}: {io}", path.display())),
        other => other,
    })
}

fn check(paths: &[PathBuf], suites: &[String], tier: &str, jobs: usize, seed: Option<u64>, common: &Common) -> Result<u8, Error> {
    let tol = Tolerance::new(common.tol_abs, common.tol_rel);
    let tier = TierMode::parse(tier)?;
    let suites: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|s| Suite::parse(s.trim())).collect::<Result<_, _>>()?
    };
    let instances: Vec<Instance> = paths.iter().map(|p| load(p, common.lenient)).collect::<Result<_, _>>()?;
    let mut report = runner::run(&instances, &suites, tier, tol, jobs)?;
    if let Some(seed) = seed {
        relabel_check(&instances, &suites, tier, tol, jobs, seed, &mut report)?;
    }
    let code = if report.pass { 0 } else { EXIT_FAIL };
    emit(common, report.to_text(), &report)?;
    Ok(code)
}

/// Reruns every suite on a relabeled copy of each instance and records a failure for each
/// report whose verdict or instance count changed.
fn relabel_check(
    instances: &[Instance],
    suites: &[Suite],
    tier: TierMode,
    tol: Tolerance,
    jobs: usize,
    seed: u64,
    report: &mut RunReport,
) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm = |n: usize| {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        p
    };
    let relabeled: Vec<Instance> = instances
        .iter()
        .map(|i| schema::build(&schema::reorder(&i.to_file(), &mut perm)))
        .collect::<Result<_, _>>()?;
    let again = runner::run(&relabeled, suites, tier, tol, jobs)?;
    let mut check = morita_core::report::CheckReport::new("relabel", &format!("seed {seed}"), morita_core::report::Tier::Dimension, tol);
    let mut acc = morita_core::report::FamilyAcc::new("verdict-invariance");
    for (a, b) in report.reports.iter().zip(&again.reports) {
        acc.check(|| vec![a.suite.clone(), a.target.clone()], a.pass == b.pass && a.checked() == b.checked());
    }
    acc.check(|| vec!["report-count".into()], report.reports.len() == again.reports.len());
    check.push(acc.finish());
    report.pass &= check.pass;
    report.reports.push(check);
    Ok(())
}

#[derive(Serialize)]
struct Solution {
    target: String,
    base: Option<PivotalAssignment>,
    values: PivotalAssignment,
    spherical: bool,
}

fn solve(path: &Path, target: SolveTarget, common: &Common) -> Result<u8, Error> {
    let tol = Tolerance::new(common.tol_abs, common.tol_rel);
    let inst = load(path, common.lenient)?;
    let mut sols = Vec::new();
    match target {
        SolveTarget::Pivotal => {
            for f in &inst.fusion {
                let dd = fusion::double_dual_structure(f, tol)?;
                for p in fusion::solve_pivotal(f, tol)? {
                    let v = fusion::check_spherical_tensor(f, &p, &dd.radford, tol)?;
                    sols.push(Solution { target: f.name.clone(), base: None, spherical: v.radford && v.trace, values: p });
                }
            }
        }
        SolveTarget::ModulePivotal => {
            for m in &inst.modules {
                for p in fusion::solve_pivotal(&m.base, tol)? {
                    for pt in modulecat::solve_module_pivotal(m, &p, tol)?.raw {
                        let spherical = modulecat::check_spherical_module(m, &p, &pt, tol)?.pass;
                        sols.push(Solution { target: m.name.clone(), base: Some(p.clone()), values: pt, spherical });
                    }
                }
            }
        }
    }
    let mut text = String::new();
    for s in &sols {
        let over = s.base.as_ref().map(|b| format!(" over {}", b.describe())).unwrap_or_default();
        text.push_str(&format!("{}: {}{over} spherical={}\n", s.target, s.values.describe(), s.spherical));
    }
    text.push_str(&format!("{} solution(s)\n", sols.len()));
    emit(common, text, &sols)?;
    Ok(if sols.is_empty() { EXIT_NO_SOLUTION } else { 0 })
}

fn corpus(dir: &Path) -> Result<u8, Error> {
    for p in instances::write_corpus(dir)? {
        println!("wrote {}", p.display());
    }
    Ok(0)
}
