//! Serialized forms: the per-matrix JSON report, the sweep summary and the
//! comparison CSV.
//!
//! JSON keys are the same for every matrix; values that do not apply are
//! written as `null`. Floats go through `serde_json`, which prints the
//! shortest decimal that parses back to the same `f64`.

use std::io::Write;

use eigenbound_core::analysis::{
    Analysis, ClassicalReport, InequalityCheck, LemmaReport, PartAnalysis, TPolicy,
};
use eigenbound_core::oracle::Cluster;
use eigenbound_core::Complex;
use serde::Serialize;

use crate::ensemble::EnsembleSpec;
use crate::error::Result;
use crate::source::MatrixSource;

pub const SCHEMA_VERSION: u32 = 1;

/// Frozen column order of the comparison CSV. New columns go at the end.
pub const CSV_COLUMNS: [&str; 17] = [
    "trial",
    "seed",
    "kind",
    "n",
    "cluster",
    "t",
    "q",
    "delta",
    "theorem1_radius",
    "envelope_radius",
    "classical_width",
    "actual_distance",
    "sharpness_ratio",
    "t_policy",
    "cluster_size",
    "lambda_re",
    "lambda_im",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptionsMeta {
    pub t_policy: TPolicy,
    pub tol_rank: f64,
    pub tol_verify: f64,
    pub tol_cluster: f64,
    pub max_iters: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixMeta {
    pub n: usize,
    pub source: MatrixSource,
    pub frobenius_norm: f64,
    pub frob_sq: f64,
    pub trace: Complex,
    pub center: Complex,
    pub q: f64,
    pub delta: f64,
    /// `Δ/‖A‖⁴`, null for the zero matrix.
    pub delta_over_norm4: Option<f64>,
    /// `Δ/q²`, null when `q = 0`.
    pub delta_over_q_sq: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub eigenvalues: Vec<Complex>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub zero_tolerance: f64,
    pub cluster_tolerance: f64,
    pub clusters: Vec<Cluster>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerCluster {
    pub cluster: usize,
    pub representative: Complex,
    pub cluster_size: usize,
    pub t: usize,
    pub t_policy: TPolicy,
    pub oracle_t: Option<usize>,
    pub rank_tolerance_used: Option<f64>,
    pub rank_borderline: bool,
    pub t_fallback: bool,
    pub theorem1_center: Complex,
    pub theorem1_radius: f64,
    pub envelope_radius: f64,
    pub classical_width: f64,
    pub actual_distance: f64,
    pub slack: f64,
    pub envelope_slack: f64,
    pub sharpness_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HermitianParts {
    pub real: PartAnalysis,
    pub imag: PartAnalysis,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub failures: usize,
    pub checks: Vec<InequalityCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub schema_version: u32,
    /// Unix seconds; null when timestamps are disabled.
    pub generated_at: Option<u64>,
    pub matrix: MatrixMeta,
    pub options: OptionsMeta,
    pub oracle: OracleReport,
    pub per_cluster: Vec<PerCluster>,
    pub hermitian_parts: HermitianParts,
    pub classical: ClassicalReport,
    pub lemma_checks: LemmaReport,
    pub verdict: Verdict,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

impl BoundReport {
    pub fn new(
        analysis: Analysis,
        source: MatrixSource,
        options: OptionsMeta,
        generated_at: Option<u64>,
    ) -> Self {
        let inp = &analysis.inputs;
        let matrix = MatrixMeta {
            n: inp.n,
            source,
            frobenius_norm: analysis.frobenius_norm,
            frob_sq: inp.frob_sq,
            trace: inp.trace,
            center: inp.center(),
            q: inp.q,
            delta: inp.delta,
            delta_over_norm4: ratio(inp.delta, inp.frob_sq * inp.frob_sq),
            delta_over_q_sq: ratio(inp.delta, inp.q * inp.q),
        };
        let spec = &analysis.spectrum;
        let oracle = OracleReport {
            eigenvalues: spec.eigenvalues.clone(),
            residuals: spec.residuals.clone(),
            max_residual: spec.max_residual(),
            zero_tolerance: spec.zero_tolerance,
            cluster_tolerance: spec.cluster_tolerance,
            clusters: spec.clusters(),
        };
        let per_cluster = analysis
            .clusters
            .iter()
            .map(|c| {
                let (r, cmp) = (&c.resolution, &c.comparison);
                PerCluster {
                    cluster: cmp.cluster_id,
                    representative: cmp.representative,
                    cluster_size: cmp.cluster_size,
                    t: cmp.t,
                    t_policy: r.policy,
                    oracle_t: r.oracle_t,
                    rank_tolerance_used: r.rank_of_shift.as_ref().map(|e| e.tolerance_used),
                    rank_borderline: r.rank_borderline,
                    t_fallback: r.fallback,
                    theorem1_center: cmp.theorem1.center,
                    theorem1_radius: cmp.theorem1.radius,
                    envelope_radius: cmp.envelope_radius,
                    classical_width: cmp.classical_width,
                    actual_distance: cmp.distance,
                    slack: cmp.slack,
                    envelope_slack: cmp.envelope_slack,
                    sharpness_ratio: cmp.sharpness_ratio,
                }
            })
            .collect();
        let failures = analysis.failures().count();
        Self {
            schema_version: SCHEMA_VERSION,
            generated_at,
            matrix,
            options,
            oracle,
            per_cluster,
            hermitian_parts: HermitianParts {
                real: analysis.real_part,
                imag: analysis.imag_part,
            },
            classical: analysis.classical,
            lemma_checks: analysis.lemmas,
            verdict: Verdict {
                pass: failures == 0,
                failures,
                checks: analysis.checks,
            },
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// One row of the comparison CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub trial: u64,
    pub seed: Option<u64>,
    pub kind: Option<String>,
    pub n: usize,
    pub cluster: usize,
    pub t: usize,
    pub q: f64,
    pub delta: f64,
    pub theorem1_radius: f64,
    pub envelope_radius: f64,
    pub classical_width: f64,
    pub actual_distance: f64,
    pub sharpness_ratio: Option<f64>,
    pub t_policy: TPolicy,
    pub cluster_size: usize,
    pub lambda: Complex,
}

impl CompareRow {
    pub fn from_report(trial: u64, seed: Option<u64>, kind: Option<String>, r: &BoundReport) -> Vec<Self> {
        r.per_cluster
            .iter()
            .map(|c| CompareRow {
                trial,
                seed,
                kind: kind.clone(),
                n: r.matrix.n,
                cluster: c.cluster,
                t: c.t,
                q: r.matrix.q,
                delta: r.matrix.delta,
                theorem1_radius: c.theorem1_radius,
                envelope_radius: c.envelope_radius,
                classical_width: c.classical_width,
                actual_distance: c.actual_distance,
                sharpness_ratio: c.sharpness_ratio,
                t_policy: c.t_policy,
                cluster_size: c.cluster_size,
                lambda: c.representative,
            })
            .collect()
    }

    fn record(&self) -> Vec<String> {
        let f = |x: f64| format!("{x:.16e}");
        vec![
            self.trial.to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.kind.clone().unwrap_or_default(),
            self.n.to_string(),
            self.cluster.to_string(),
            self.t.to_string(),
            f(self.q),
            f(self.delta),
            f(self.theorem1_radius),
            f(self.envelope_radius),
            f(self.classical_width),
            f(self.actual_distance),
            self.sharpness_ratio.map(f).unwrap_or_default(),
            self.t_policy.as_str().to_string(),
            self.cluster_size.to_string(),
            f(self.lambda.re),
            f(self.lambda.im),
        ]
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[CompareRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn csv_string(rows: &[CompareRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Aggregate over one inequality across a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_slack: f64,
    /// Smallest `slack / tolerance`; below −1 means a violation.
    pub worst_slack_over_tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailingTrial {
    pub trial: u64,
    pub seed: u64,
    pub checks: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialError {
    pub trial: u64,
    pub seed: u64,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn extend(slot: &mut Option<Range>, x: Option<f64>) {
        let Some(x) = x else { return };
        match slot {
            Some(r) => {
                r.min = r.min.min(x);
                r.max = r.max.max(x);
            }
            None => *slot = Some(Range { min: x, max: x }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub schema_version: u32,
    pub generated_at: Option<u64>,
    pub ensemble: EnsembleSpec,
    pub trials: u64,
    pub options: OptionsMeta,
    pub pass: bool,
    pub trials_passed: usize,
    pub trials_failed: usize,
    pub trials_errored: usize,
    pub checks: Vec<CheckSummary>,
    pub failing_seeds: Vec<FailingTrial>,
    pub errors: Vec<TrialError>,
    pub delta_over_q_sq: Option<Range>,
    pub delta_over_norm4: Option<Range>,
}

/// Outcome of a single sweep trial.
pub struct TrialOutcome {
    pub trial: u64,
    pub seed: u64,
    pub result: std::result::Result<BoundReport, String>,
}

impl VerifySummary {
    /// Folds trial outcomes, which must already be in trial order.
    pub fn from_outcomes(
        ensemble: EnsembleSpec,
        options: OptionsMeta,
        generated_at: Option<u64>,
        outcomes: &[TrialOutcome],
    ) -> Self {
        let mut checks: Vec<CheckSummary> = Vec::new();
        let mut failing_seeds = Vec::new();
        let mut errors = Vec::new();
        let (mut passed, mut failed) = (0, 0);
        let mut dq = None;
        let mut dn = None;

        for o in outcomes {
            let report = match &o.result {
                Ok(r) => r,
                Err(message) => {
                    errors.push(TrialError {
                        trial: o.trial,
                        seed: o.seed,
                        message: message.clone(),
                    });
                    continue;
                }
            };
            Range::extend(&mut dq, report.matrix.delta_over_q_sq);
            Range::extend(&mut dn, report.matrix.delta_over_norm4);
            let mut failing = Vec::new();
            for c in &report.verdict.checks {
                let idx = match checks.iter().position(|s| s.name == c.name) {
                    Some(i) => i,
                    None => {
                        checks.push(CheckSummary {
                            name: c.name,
                            checked: 0,
                            passed: 0,
                            failed: 0,
                            worst_slack: f64::INFINITY,
                            worst_slack_over_tolerance: None,
                        });
                        checks.len() - 1
                    }
                };
                let s = &mut checks[idx];
                s.checked += 1;
                if c.pass {
                    s.passed += 1;
                } else {
                    s.failed += 1;
                    if !failing.contains(&c.name) {
                        failing.push(c.name);
                    }
                }
                s.worst_slack = s.worst_slack.min(c.slack);
                if c.tolerance > 0.0 {
                    let r = c.slack / c.tolerance;
                    s.worst_slack_over_tolerance =
                        Some(s.worst_slack_over_tolerance.map_or(r, |w: f64| w.min(r)));
                }
            }
            if failing.is_empty() {
                passed += 1;
            } else {
                failed += 1;
                failing_seeds.push(FailingTrial {
                    trial: o.trial,
                    seed: o.seed,
                    checks: failing,
                });
            }
        }

        Self {
            schema_version: SCHEMA_VERSION,
            generated_at,
            ensemble,
            trials: outcomes.len() as u64,
            options,
            pass: failed == 0 && errors.is_empty(),
            trials_passed: passed,
            trials_failed: failed,
            trials_errored: errors.len(),
            checks,
            failing_seeds,
            errors,
            delta_over_q_sq: dq,
            delta_over_norm4: dn,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
