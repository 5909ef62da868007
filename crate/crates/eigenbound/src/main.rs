use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eigenbound::commands::{self, Status};
use eigenbound::ensemble::{EnsembleKind, EnsembleSpec};
use eigenbound::report::{self, CompareRow};
use eigenbound::source::MatrixSource;
use eigenbound::{Error, Result};
use eigenbound_core::analysis::{AnalysisOptions, TPolicy};

#[derive(Parser)]
#[command(name = "eigenbound", version, about = "Trace-centered eigenvalue inclusion bounds, checked against a dense eigensolver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one matrix and print its bound report.
    Analyze(AnalyzeArgs),
    /// Check every inequality over a seeded ensemble sweep and print a summary.
    Verify(SweepArgs),
    /// Write per-cluster bound comparisons for a seeded sweep as CSV.
    Compare(CompareArgs),
}

#[derive(Args)]
struct Tolerances {
    /// Multiplicity policy: oracle, 1 or cluster-size.
    #[arg(long = "t", value_name = "POLICY", default_value = "oracle")]
    t_policy: TPolicy,
    /// Relative singular value cutoff for numerical rank.
    #[arg(long, value_name = "R", default_value_t = 1e-10)]
    tol_rank: f64,
    /// Relative containment tolerance, scaled by 1 + ‖A‖.
    #[arg(long, value_name = "V", default_value_t = 1e-7)]
    tol_verify: f64,
}

impl Tolerances {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            t_policy: self.t_policy,
            rank_rel_tol: self.tol_rank,
            verify_rel_tol: self.tol_verify,
            ..AnalysisOptions::default()
        }
    }
}

#[derive(Args)]
struct EnsembleArgs {
    /// Ensemble kind.
    #[arg(long, value_name = "KIND")]
    ensemble: EnsembleKind,
    /// Matrix dimension.
    #[arg(long, value_name = "N")]
    n: usize,
    /// Base seed.
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Entry standard deviation.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Repetition count for diagonal_repeated.
    #[arg(long)]
    repeat: Option<usize>,
}

impl EnsembleArgs {
    fn spec(&self) -> EnsembleSpec {
        EnsembleSpec {
            kind: self.ensemble,
            n: self.n,
            seed: self.seed,
            scale: self.scale,
            repeat: self.repeat,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Matrix Market file.
    #[arg(value_name = "PATH", conflicts_with_all = ["ensemble", "literal"])]
    path: Option<PathBuf>,
    /// Ensemble kind to draw from instead of a file.
    #[arg(long, value_name = "KIND", requires = "n", conflicts_with = "literal")]
    ensemble: Option<EnsembleKind>,
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    repeat: Option<usize>,
    /// JSON rows, entries as numbers or [re, im].
    #[arg(long, value_name = "JSON")]
    literal: Option<String>,
    #[command(flatten)]
    tol: Tolerances,
    /// Print the JSON report (default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Print per-cluster CSV rows instead.
    #[arg(long)]
    csv: bool,
    /// Write null instead of the generation time.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Number of trials.
    #[arg(long, value_name = "T")]
    trials: u64,
    #[command(flatten)]
    tol: Tolerances,
    /// Worker threads; overrides EIGENBOUND_THREADS.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long, value_name = "T")]
    trials: u64,
    /// Output CSV file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    #[command(flatten)]
    tol: Tolerances,
    #[arg(long)]
    threads: Option<usize>,
}

fn analyze(args: AnalyzeArgs) -> Result<Status> {
    let source = match (&args.path, args.ensemble, &args.literal) {
        (Some(p), None, None) => MatrixSource::File(p.clone()),
        (None, Some(kind), None) => MatrixSource::Ensemble(EnsembleSpec {
            kind,
            n: args.n.unwrap_or(0),
            seed: args.seed,
            scale: args.scale,
            repeat: args.repeat,
        }),
        (None, None, Some(text)) => MatrixSource::Literal(text.clone()),
        _ => {
            return Err(Error::Literal(
                "give exactly one of PATH, --ensemble or --literal".into(),
            ))
        }
    };
    let report = commands::cmd_analyze(&source, &args.tol.options(), !args.no_timestamp)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.csv {
        let (seed, kind) = match &source {
            MatrixSource::Ensemble(s) => (Some(s.seed), Some(s.kind.as_str().to_string())),
            _ => (None, None),
        };
        report::write_csv(&mut out, &CompareRow::from_report(0, seed, kind, &report))?;
    } else {
        writeln!(out, "{}", report.to_json()?).map_err(|e| Error::io("<stdout>", e))?;
    }
    for c in report.verdict.checks.iter().filter(|c| !c.pass) {
        eprintln!(
            "violated: {}{} slack {:e} below -{:e}",
            c.name,
            c.index.map(|i| format!("[{i}]")).unwrap_or_default(),
            c.slack,
            c.tolerance
        );
    }
    Ok(Status::from_counts(report.verdict.failures, 0))
}

fn verify(args: SweepArgs) -> Result<Status> {
    let summary = commands::cmd_verify(
        &args.ensemble.spec(),
        args.trials,
        &args.tol.options(),
        args.threads,
        !args.no_timestamp,
    )?;
    writeln!(io::stdout().lock(), "{}", summary.to_json()?).map_err(|e| Error::io("<stdout>", e))?;
    Ok(summary.status())
}

fn compare(args: CompareArgs) -> Result<Status> {
    let out = commands::cmd_compare(
        &args.ensemble.spec(),
        args.trials,
        &args.tol.options(),
        args.threads,
    )?;
    let file = File::create(&args.out).map_err(|e| Error::io(&args.out, e))?;
    report::write_csv(BufWriter::new(file), &out.rows)?;
    for e in &out.errors {
        eprintln!("trial {} (seed {}): {}", e.trial, e.seed, e.message);
    }
    if out.violations > 0 {
        eprintln!("{} trial(s) violated at least one inequality", out.violations);
    }
    Ok(out.status())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => verify(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Failed.code())
        }
    }
}
