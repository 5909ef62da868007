//! End-to-end check of one matrix: oracle spectrum, multiplicities, every
//! disc and interval, the lemma gaps and the shift identities, each recorded
//! as an auditable inequality.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bounds::{
    self, BoundInputs, ClassicalInterval, ClusterComparison, ClusterMultiplicity, Disc, DiscSource,
};
use crate::error::{Error, Result};
use crate::matrix::{Complex, DenseMatrix};
use crate::oracle::{self, Cluster, RankEstimate, Spectrum};

/// How the multiplicity `t` of each eigenvalue cluster is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize), serde(rename_all = "kebab-case"))]
pub enum TPolicy {
    /// `n − rank(λI − A)` at the cluster representative.
    #[default]
    Oracle,
    /// `t = 1`, valid for every eigenvalue.
    One,
    /// The cluster size, an upper bound on the true multiplicity.
    ClusterSize,
}

impl TPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            TPolicy::Oracle => "oracle",
            TPolicy::One => "1",
            TPolicy::ClusterSize => "cluster-size",
        }
    }
}

impl core::str::FromStr for TPolicy {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "oracle" => Ok(TPolicy::Oracle),
            "1" | "one" => Ok(TPolicy::One),
            "cluster-size" | "cluster_size" => Ok(TPolicy::ClusterSize),
            other => Err(format!(
                "unknown t policy `{other}` (expected oracle, 1 or cluster-size)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions {
    pub t_policy: TPolicy,
    /// Relative rank tolerance for multiplicities and `rank(A)`.
    pub rank_rel_tol: f64,
    /// Containment tolerance is `verify_rel_tol · (1 + ‖A‖)`; lemma
    /// tolerances are `verify_rel_tol · ‖A‖²`.
    pub verify_rel_tol: f64,
    /// Cluster tolerance is `cluster_rel_tol · (1 + ‖A‖)`.
    pub cluster_rel_tol: f64,
    pub max_iters: usize,
    /// Shifts probed on top of the cluster representatives, the center and 0.
    pub extra_shift_probes: Vec<Complex>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            t_policy: TPolicy::Oracle,
            rank_rel_tol: oracle::DEFAULT_RANK_TOL,
            verify_rel_tol: 1e-7,
            cluster_rel_tol: oracle::DEFAULT_CLUSTER_REL_TOL,
            max_iters: oracle::DEFAULT_MAX_ITERS,
            extra_shift_probes: Vec::new(),
        }
    }
}

/// Tolerance for the ordering `theorem1 ≤ envelope` and the classical
/// projection; relative to the larger side, floored at 1.
pub const ORDERING_TOL: f64 = 1e-12;
/// Relative tolerance on the proof identities at each shift.
pub const IDENTITY_TOL: f64 = 1e-10;
/// `Σ|λ|² ≤ ‖A‖²` and `Σλ = tr A` checks.
pub const SCHUR_INEQUALITY_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-9;

/// One inequality `lhs ≤ rhs` with its verdict. `slack = rhs − lhs` and the
/// check passes iff `slack ≥ −tolerance`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InequalityCheck {
    pub name: &'static str,
    /// Cluster id (or probe index) the check refers to, if any.
    pub index: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl InequalityCheck {
    pub fn new(name: &'static str, index: Option<usize>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name,
            index,
            lhs,
            rhs,
            slack,
            tolerance,
            pass: slack >= -tolerance,
        }
    }
}

/// How `t` was settled for one cluster.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MultiplicityResolution {
    pub cluster_id: usize,
    pub representative: Complex,
    pub cluster_size: usize,
    pub t: usize,
    pub policy: TPolicy,
    /// `n − rank(λI − A)`, when the oracle was asked.
    pub oracle_t: Option<usize>,
    pub rank_of_shift: Option<RankEstimate>,
    /// Some singular value of `λI − A` sits near the rank tolerance.
    pub rank_borderline: bool,
    /// The oracle could not certify `λ` as an eigenvalue and `t = 1` was used.
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClusterReport {
    pub resolution: MultiplicityResolution,
    pub comparison: ClusterComparison,
}

/// Per-cluster disc for one Hermitian part.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PartCluster {
    pub resolution: MultiplicityResolution,
    pub disc: Disc,
    pub distance: f64,
    pub slack: f64,
}

/// Theorem 2 analysis of `Re_A` or `Im_A`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PartAnalysis {
    pub source: DiscSource,
    pub inputs: BoundInputs,
    pub spectrum: Spectrum,
    pub clusters: Vec<PartCluster>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassicalReport {
    pub interval: ClassicalInterval,
    pub lambda_max: f64,
    /// `|tr A|/n + theorem1_radius(t = 1)`.
    pub t1_projection: f64,
    pub lower_slack: f64,
    pub upper_slack: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LemmaReport {
    pub rank: RankEstimate,
    pub lemma1_gap: f64,
    pub lemma2_gap: f64,
    pub shift_probes: usize,
    /// Largest `|gap_sq_norm| / (1 + ‖A‖² + n|λ|²)` over the probes.
    pub shift_identity_max_rel_gap: f64,
    /// Largest trace-side identity gap over its scale.
    pub shift_trace_max_rel_gap: f64,
    /// Largest `|Δ(λI − A) − Δ(A)| / (1 + ‖A‖² + n|λ|²)²`.
    pub delta_shift_max_rel_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Analysis {
    pub inputs: BoundInputs,
    pub frobenius_norm: f64,
    pub spectrum: Spectrum,
    pub clusters: Vec<ClusterReport>,
    pub real_part: PartAnalysis,
    pub imag_part: PartAnalysis,
    pub classical: ClassicalReport,
    pub lemmas: LemmaReport,
    /// `verify_rel_tol · (1 + ‖A‖)`.
    pub tol_verify: f64,
    pub checks: Vec<InequalityCheck>,
}

impl Analysis {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InequalityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Runs the full pipeline on `a`.
pub fn analyze(a: &DenseMatrix, opts: &AnalysisOptions) -> Result<Analysis> {
    for tol in [opts.rank_rel_tol, opts.verify_rel_tol, opts.cluster_rel_tol] {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Error::InvalidTolerance(tol));
        }
    }
    let inputs = BoundInputs::from_matrix(a)?;
    let norm = inputs.frobenius_norm();
    let tol_verify = opts.verify_rel_tol * (1.0 + norm);
    let mut checks = Vec::new();

    let spectrum = spectrum_of(a, opts)?;
    checks.push(InequalityCheck::new(
        "schur_inequality",
        None,
        spectrum.sum_abs_sq(),
        inputs.frob_sq,
        SCHUR_INEQUALITY_TOL * inputs.frob_sq,
    ));
    checks.push(InequalityCheck::new(
        "trace_preservation",
        None,
        (spectrum.sum() - inputs.trace).norm(),
        0.0,
        TRACE_TOL * (1.0 + inputs.trace.norm()),
    ));

    // Theorem 1 per cluster.
    let resolutions = resolve_all(a, &spectrum, opts)?;
    let multiplicities: Vec<ClusterMultiplicity> = spectrum
        .clusters()
        .into_iter()
        .zip(&resolutions)
        .map(|(cluster, r)| ClusterMultiplicity { cluster, t: r.t })
        .collect();
    let comparisons = bounds::compare_bounds(&inputs, &spectrum, &multiplicities)?;
    for c in &comparisons {
        checks.push(InequalityCheck::new(
            "theorem1_containment",
            Some(c.cluster_id),
            c.distance,
            c.theorem1.radius,
            tol_verify,
        ));
        checks.push(InequalityCheck::new(
            "theorem1_envelope",
            Some(c.cluster_id),
            c.theorem1.radius,
            c.envelope_radius,
            ORDERING_TOL * c.envelope_radius.max(1.0),
        ));
    }
    let clusters: Vec<ClusterReport> = resolutions
        .into_iter()
        .zip(comparisons)
        .map(|(resolution, comparison)| ClusterReport {
            resolution,
            comparison,
        })
        .collect();

    // Theorem 2 on both Hermitian parts.
    let real_part = part_analysis(&a.hermitian_real_part(), DiscSource::Theorem2Re, opts)?;
    let imag_part = part_analysis(&a.hermitian_imag_part(), DiscSource::Theorem2Im, opts)?;
    for (part, name) in [
        (&real_part, "theorem2_re_containment"),
        (&imag_part, "theorem2_im_containment"),
    ] {
        for pc in &part.clusters {
            checks.push(InequalityCheck::new(
                name,
                Some(pc.resolution.cluster_id),
                pc.distance,
                pc.disc.radius,
                tol_verify,
            ));
        }
    }

    // Classical interval.
    let interval = bounds::classical_interval(&inputs);
    let lambda_max = spectrum.max_modulus();
    let t1_projection = interval.lower + bounds::theorem1_radius(&inputs, 1)?.radius;
    checks.push(InequalityCheck::new(
        "classical_lower",
        None,
        interval.lower,
        lambda_max,
        tol_verify,
    ));
    checks.push(InequalityCheck::new(
        "classical_upper",
        None,
        lambda_max,
        interval.upper,
        tol_verify,
    ));
    checks.push(InequalityCheck::new(
        "classical_projection_t1",
        None,
        t1_projection,
        interval.upper,
        ORDERING_TOL * interval.upper.max(1.0),
    ));
    let classical = ClassicalReport {
        interval,
        lambda_max,
        t1_projection,
        lower_slack: lambda_max - interval.lower,
        upper_slack: interval.upper - lambda_max,
    };

    // Lemmas.
    let rank = oracle::numerical_rank(a, opts.rank_rel_tol)?;
    let lemma_tol = opts.verify_rel_tol * inputs.frob_sq;
    let root = inputs.lemma_root();
    let lemma1_gap = bounds::lemma1_gap(&inputs, &spectrum);
    let lemma2_gap = bounds::lemma2_gap(&inputs, &rank);
    checks.push(InequalityCheck::new(
        "lemma1",
        None,
        spectrum.sum_abs_sq(),
        root,
        lemma_tol,
    ));
    checks.push(InequalityCheck::new(
        "lemma2",
        None,
        inputs.trace.norm_sqr(),
        rank.rank as f64 * root,
        lemma_tol,
    ));

    // Proof identities at each probe shift.
    let mut probes: Vec<Complex> = clusters.iter().map(|c| c.comparison.representative).collect();
    probes.push(inputs.center());
    probes.push(Complex::new(0.0, 0.0));
    probes.extend_from_slice(&opts.extra_shift_probes);
    let mut worst_norm = (0.0f64, 0usize);
    let mut worst_trace = (0.0f64, 0usize);
    let mut worst_delta = (0.0f64, 0usize);
    for (k, &lambda) in probes.iter().enumerate() {
        let id = bounds::shift_identity_gap(a, lambda);
        let scale = id.norm_scale(&inputs);
        let tscale = id.trace_scale(&inputs);
        let rel_norm = id.gap_sq_norm.abs().max(id.sigma_gap.abs()) / scale;
        let rel_trace = id.trace_gap.abs().max(id.trace_sigma_gap.abs()) / tscale;
        let rel_delta = (a.shifted(lambda).commutator_defect() - inputs.delta).abs() / (scale * scale);
        if rel_norm >= worst_norm.0 {
            worst_norm = (rel_norm, k);
        }
        if rel_trace >= worst_trace.0 {
            worst_trace = (rel_trace, k);
        }
        if rel_delta >= worst_delta.0 {
            worst_delta = (rel_delta, k);
        }
    }
    for (name, (rel, k)) in [
        ("shift_identity_norm", worst_norm),
        ("shift_identity_trace", worst_trace),
        ("delta_shift_invariance", worst_delta),
    ] {
        checks.push(InequalityCheck::new(name, Some(k), rel, 0.0, IDENTITY_TOL));
    }
    let lemmas = LemmaReport {
        rank,
        lemma1_gap,
        lemma2_gap,
        shift_probes: probes.len(),
        shift_identity_max_rel_gap: worst_norm.0,
        shift_trace_max_rel_gap: worst_trace.0,
        delta_shift_max_rel_gap: worst_delta.0,
    };

    Ok(Analysis {
        inputs,
        frobenius_norm: norm,
        spectrum,
        clusters,
        real_part,
        imag_part,
        classical,
        lemmas,
        tol_verify,
        checks,
    })
}

fn spectrum_of(a: &DenseMatrix, opts: &AnalysisOptions) -> Result<Spectrum> {
    let form = oracle::schur_decompose(a, opts.max_iters)?;
    let spectrum = oracle::spectrum_from_schur(a, &form);
    let tol = opts.cluster_rel_tol * (1.0 + a.frobenius_norm());
    let mut spectrum = oracle::cluster_eigenvalues(&spectrum, tol)?;
    spectrum.zero_tolerance = tol;
    spectrum.nonzero_count = spectrum.eigenvalues.iter().filter(|z| z.norm() > tol).count();
    Ok(spectrum)
}

fn resolve_all(
    a: &DenseMatrix,
    spectrum: &Spectrum,
    opts: &AnalysisOptions,
) -> Result<Vec<MultiplicityResolution>> {
    spectrum
        .clusters()
        .iter()
        .map(|c| resolve(a, spectrum, c, opts))
        .collect()
}

/// Settles `t` for one cluster under the configured policy.
///
/// Under the oracle policy the representative is tried first, then each
/// member; when none of them registers as an eigenvalue at the rank
/// tolerance, `t = 1` is used and the cluster is flagged. The oracle value is
/// capped at the cluster size.
pub fn resolve(
    a: &DenseMatrix,
    spectrum: &Spectrum,
    cluster: &Cluster,
    opts: &AnalysisOptions,
) -> Result<MultiplicityResolution> {
    let mut out = MultiplicityResolution {
        cluster_id: cluster.id,
        representative: cluster.representative,
        cluster_size: cluster.size(),
        t: 1,
        policy: opts.t_policy,
        oracle_t: None,
        rank_of_shift: None,
        rank_borderline: false,
        fallback: false,
    };
    match opts.t_policy {
        TPolicy::One => return Ok(out),
        TPolicy::ClusterSize => {
            out.t = cluster.size();
            return Ok(out);
        }
        TPolicy::Oracle => {}
    }

    let candidates = core::iter::once(cluster.representative)
        .chain(cluster.members.iter().map(|&i| spectrum.eigenvalues[i]));
    let mut last_borderline = false;
    for lambda in candidates {
        match oracle::geometric_multiplicity(a, lambda, opts.rank_rel_tol) {
            Ok(m) => {
                out.oracle_t = Some(m.t);
                out.t = m.t.min(cluster.size());
                out.rank_borderline = m.rank_of_shift.is_borderline();
                out.rank_of_shift = Some(m.rank_of_shift);
                return Ok(out);
            }
            Err(Error::NotAnEigenvalue { .. }) => {}
            Err(Error::BorderlineRank { .. }) => last_borderline = true,
            Err(e) => return Err(e),
        }
    }
    out.fallback = true;
    out.rank_borderline = last_borderline;
    Ok(out)
}

fn part_analysis(part: &DenseMatrix, source: DiscSource, opts: &AnalysisOptions) -> Result<PartAnalysis> {
    let inputs = BoundInputs::from_matrix(part)?;
    let spectrum = spectrum_of(part, opts)?;
    let clusters = spectrum
        .clusters()
        .iter()
        .map(|c| {
            let resolution = resolve(part, &spectrum, c, opts)?;
            let disc = bounds::normal_case_radius(&inputs, resolution.t, source)?;
            let distance = c
                .members
                .iter()
                .map(|&i| disc.distance(spectrum.eigenvalues[i]))
                .fold(0.0, f64::max);
            Ok(PartCluster {
                resolution,
                disc,
                distance,
                slack: disc.radius - distance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartAnalysis {
        source,
        inputs,
        spectrum,
        clusters,
    })
}
