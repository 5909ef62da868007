//! The three CLI commands as library functions.

use std::time::{SystemTime, UNIX_EPOCH};

use eigenbound_core::analysis::{analyze, AnalysisOptions};

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::report::{BoundReport, CompareRow, OptionsMeta, TrialError, TrialOutcome, VerifySummary};
use crate::source::MatrixSource;
use crate::sweep;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Every inequality held.
    Verified,
    /// At least one inequality was violated beyond its tolerance.
    Violated,
    /// Parse, generation or oracle failure.
    Failed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Verified => 0,
            Status::Violated => 1,
            Status::Failed => 2,
        }
    }

    /// Violations take precedence over operational errors.
    pub fn from_counts(violations: usize, errors: usize) -> Self {
        if violations > 0 {
            Status::Violated
        } else if errors > 0 {
            Status::Failed
        } else {
            Status::Verified
        }
    }
}

pub fn options_meta(opts: &AnalysisOptions) -> OptionsMeta {
    OptionsMeta {
        t_policy: opts.t_policy,
        tol_rank: opts.rank_rel_tol,
        tol_verify: opts.verify_rel_tol,
        tol_cluster: opts.cluster_rel_tol,
        max_iters: opts.max_iters,
    }
}

pub fn timestamp(enabled: bool) -> Option<u64> {
    enabled.then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    })
}

pub fn cmd_analyze(
    source: &MatrixSource,
    opts: &AnalysisOptions,
    with_timestamp: bool,
) -> Result<BoundReport> {
    let a = source.load()?;
    let analysis = analyze(&a, opts)?;
    Ok(BoundReport::new(
        analysis,
        source.clone(),
        options_meta(opts),
        timestamp(with_timestamp),
    ))
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::Ensemble("trials must be at least 1".into()));
    }
    Ok(())
}

/// Analyzes every trial of the sweep, in trial order.
pub fn run_trials(
    spec: &EnsembleSpec,
    trials: u64,
    opts: &AnalysisOptions,
    threads: Option<usize>,
) -> Result<Vec<TrialOutcome>> {
    check_trials(trials)?;
    spec.validate()?;
    sweep::run(spec, trials, threads, |trial, s| {
        let seed = s.seed;
        let result = cmd_analyze(&MatrixSource::Ensemble(s), opts, false).map_err(|e| e.to_string());
        TrialOutcome { trial, seed, result }
    })
}

pub fn cmd_verify(
    spec: &EnsembleSpec,
    trials: u64,
    opts: &AnalysisOptions,
    threads: Option<usize>,
    with_timestamp: bool,
) -> Result<VerifySummary> {
    let outcomes = run_trials(spec, trials, opts, threads)?;
    Ok(VerifySummary::from_outcomes(
        spec.clone(),
        options_meta(opts),
        timestamp(with_timestamp),
        &outcomes,
    ))
}

impl VerifySummary {
    pub fn status(&self) -> Status {
        Status::from_counts(self.trials_failed, self.trials_errored)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareOutput {
    pub rows: Vec<CompareRow>,
    pub errors: Vec<TrialError>,
    /// Trials with at least one violated inequality.
    pub violations: usize,
}

impl CompareOutput {
    pub fn status(&self) -> Status {
        Status::from_counts(self.violations, self.errors.len())
    }
}

pub fn cmd_compare(
    spec: &EnsembleSpec,
    trials: u64,
    opts: &AnalysisOptions,
    threads: Option<usize>,
) -> Result<CompareOutput> {
    let outcomes = run_trials(spec, trials, opts, threads)?;
    let kind = spec.kind.as_str().to_string();
    let mut out = CompareOutput {
        rows: Vec::new(),
        errors: Vec::new(),
        violations: 0,
    };
    for o in outcomes {
        match o.result {
            Ok(report) => {
                if !report.verdict.pass {
                    out.violations += 1;
                }
                out.rows
                    .extend(CompareRow::from_report(o.trial, Some(o.seed), Some(kind.clone()), &report));
            }
            Err(message) => out.errors.push(TrialError {
                trial: o.trial,
                seed: o.seed,
                message,
            }),
        }
    }
    Ok(out)
}
