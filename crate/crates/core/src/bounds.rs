//! Trace-centered localization radii and the inequalities behind them.
//!
//! With `c = tr(A)/n`, `q_A = ‖A‖² − |tr A|²/n` and
//! `Δ_A = ‖AA* − A*A‖²/2`, an eigenvalue `λ` of geometric multiplicity `t`
//! satisfies
//!
//! ```text
//! |λ − c| ≤ √((n−t)/((2n−t)t)) · √((n−t)/n · q_A + √(q_A² − (2n−t)t/n² · Δ_A))
//! ```
//!
//! For normal matrices (`Δ_A = 0`) this collapses to `√((n−t)/(nt) · q_A)`,
//! which is what the Hermitian parts `Re_A` and `Im_A` get. Both radii are
//! compared with the classical modulus interval
//! `|tr A|/n ≤ |λ|_max ≤ |tr A|/n + √((n−1)/n · q_A)`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{Complex, DenseMatrix};
use crate::oracle::{Cluster, RankEstimate, Spectrum};

/// Relative width of the window in which a slightly negative discriminant
/// is clamped to zero instead of rejected.
pub const DISCRIMINANT_CLAMP_REL: f64 = 1e-10;

/// Relative width of the window in which a slightly negative `q_A` is
/// clamped to zero instead of rejected.
pub const SPREAD_CLAMP_REL: f64 = 1e-12;

/// Scalar statistics every radius is built from.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundInputs {
    pub n: usize,
    pub trace: Complex,
    /// `‖A‖²`.
    pub frob_sq: f64,
    /// `q_A`, clamped at zero.
    pub q: f64,
    /// `Δ_A`.
    pub delta: f64,
}

impl BoundInputs {
    pub fn from_matrix(a: &DenseMatrix) -> Result<Self> {
        let n = a.n();
        let trace = a.trace();
        let frob_sq = a.frobenius_norm_sq();
        let q = frob_sq - trace.norm_sqr() / n as f64;
        if q < -SPREAD_CLAMP_REL * frob_sq {
            return Err(Error::NegativeSpread { q, frob_sq });
        }
        Ok(Self {
            n,
            trace,
            frob_sq,
            q: q.max(0.0),
            delta: a.commutator_defect(),
        })
    }

    /// Disc center `tr(A)/n`.
    pub fn center(&self) -> Complex {
        self.trace / self.n as f64
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.frob_sq)
    }

    /// `√(‖A‖⁴ − Δ_A)`, the common right-hand side of both lemmas.
    pub fn lemma_root(&self) -> f64 {
        math::sqrt((self.frob_sq * self.frob_sq - self.delta).max(0.0))
    }

    fn check_t(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.n {
            return Err(Error::InvalidMultiplicity { t, n: self.n });
        }
        Ok(())
    }
}

/// See [`BoundInputs::from_matrix`].
pub fn bound_inputs(a: &DenseMatrix) -> Result<BoundInputs> {
    BoundInputs::from_matrix(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize), serde(rename_all = "snake_case"))]
pub enum DiscSource {
    Theorem1,
    Theorem2Re,
    Theorem2Im,
    /// Modulus-axis width of the classical interval, drawn as a disc.
    Classical,
}

/// Closed disc `{z : |z − center| ≤ radius}`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Disc {
    pub center: Complex,
    pub radius: f64,
    pub source: DiscSource,
    pub t_used: Option<usize>,
}

impl Disc {
    pub fn distance(&self, z: Complex) -> f64 {
        (z - self.center).norm()
    }

    /// `radius − |z − center|`; nonnegative iff `z` lies in the disc.
    pub fn slack(&self, z: Complex) -> f64 {
        self.radius - self.distance(z)
    }

    pub fn contains(&self, z: Complex, tol: f64) -> bool {
        self.slack(z) >= -tol
    }
}

/// Disc around `tr(A)/n` containing every eigenvalue of geometric
/// multiplicity at least `t`.
///
/// A discriminant below zero by less than `1e-10·max(q², 1)` is treated as
/// rounding and clamped; anything more negative means `t` cannot be the
/// multiplicity of any eigenvalue of this matrix.
pub fn theorem1_radius(inp: &BoundInputs, t: usize) -> Result<Disc> {
    inp.check_t(t)?;
    let disc = Disc {
        center: inp.center(),
        radius: 0.0,
        source: DiscSource::Theorem1,
        t_used: Some(t),
    };
    if t == inp.n {
        return Ok(disc);
    }
    let n = inp.n as f64;
    let t_f = t as f64;
    let rest = n - t_f;
    let weight = (2.0 * n - t_f) * t_f;
    let q = inp.q;

    let discriminant = q * q - weight / (n * n) * inp.delta;
    let clamp = DISCRIMINANT_CLAMP_REL * (q * q).max(1.0);
    if discriminant < -clamp {
        return Err(Error::NegativeDiscriminant {
            t,
            discriminant,
            clamp,
        });
    }
    let inner = rest / n * q + math::sqrt(discriminant.max(0.0));
    Ok(Disc {
        radius: math::sqrt(rest / weight) * math::sqrt(inner),
        ..disc
    })
}

/// `√((n−t)/(nt) · q)`: the radius for normal matrices, and an upper
/// envelope of [`theorem1_radius`] in general.
pub fn normal_case_radius(inp: &BoundInputs, t: usize, source: DiscSource) -> Result<Disc> {
    inp.check_t(t)?;
    let n = inp.n as f64;
    let t_f = t as f64;
    Ok(Disc {
        center: inp.center(),
        radius: math::sqrt((n - t_f) / (n * t_f) * inp.q.max(0.0)),
        source,
        t_used: Some(t),
    })
}

/// Radius of [`normal_case_radius`] without the disc wrapper.
pub fn envelope_radius(inp: &BoundInputs, t: usize) -> Result<f64> {
    normal_case_radius(inp, t, DiscSource::Theorem1).map(|d| d.radius)
}

/// Discs for the eigenvalues of `Re_A` (multiplicity `t_re`) and `Im_A`
/// (multiplicity `t_im`). Both centers are real.
pub fn theorem2_discs(a: &DenseMatrix, t_re: usize, t_im: usize) -> Result<(Disc, Disc)> {
    let re = BoundInputs::from_matrix(&a.hermitian_real_part())?;
    let im = BoundInputs::from_matrix(&a.hermitian_imag_part())?;
    Ok((
        normal_case_radius(&re, t_re, DiscSource::Theorem2Re)?,
        normal_case_radius(&im, t_im, DiscSource::Theorem2Im)?,
    ))
}

/// Classical bracket on the spectral radius.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassicalInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ClassicalInterval {
    /// `√((n−1)/n · q)`.
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn classical_interval(inp: &BoundInputs) -> ClassicalInterval {
    let n = inp.n as f64;
    let lower = inp.trace.norm() / n;
    ClassicalInterval {
        lower,
        upper: lower + classical_width(inp),
    }
}

/// Width of the classical interval, computed directly rather than as
/// `upper − lower` so no cancellation creeps in.
pub fn classical_width(inp: &BoundInputs) -> f64 {
    let n = inp.n as f64;
    math::sqrt((n - 1.0) / n * inp.q.max(0.0))
}

/// `√(‖A‖⁴ − Δ_A) − Σ|λ_j|²`; nonnegative in exact arithmetic.
pub fn lemma1_gap(inp: &BoundInputs, spec: &Spectrum) -> f64 {
    inp.lemma_root() - spec.sum_abs_sq()
}

/// `rank(A)·√(‖A‖⁴ − Δ_A) − |tr A|²`; nonnegative in exact arithmetic.
pub fn lemma2_gap(inp: &BoundInputs, rank: &RankEstimate) -> f64 {
    rank.rank as f64 * inp.lemma_root() - inp.trace.norm_sqr()
}

/// Quantities from expanding `λI − A` around the trace.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DerivationProbe {
    pub lambda: Complex,
    /// `s = |λ − tr(A)/n|²`.
    pub s: f64,
    /// `σ = n|λ|² − λ·tr(A*) − λ̄·tr(A)`, real part.
    pub sigma: f64,
    /// Imaginary part left over when `σ` is formed in complex arithmetic.
    pub sigma_imag: f64,
}

/// Residuals of the expansion identities at one shift `λ`:
///
/// * `|tr(λI − A)|² = nσ + |tr A|²`
/// * `‖λI − A‖² = σ + ‖A‖²`
/// * `|tr(λI − A)|² = n²s`
/// * `‖λI − A‖² = ns + q_A`
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ShiftIdentity {
    pub probe: DerivationProbe,
    /// `‖λI − A‖²` from the explicit shifted matrix.
    pub shifted_frob_sq: f64,
    /// `‖λI − A‖² − (ns + q_A)`.
    pub gap_sq_norm: f64,
    /// `‖λI − A‖² − (σ + ‖A‖²)`.
    pub sigma_gap: f64,
    /// `|tr(λI − A)|² − n²s`.
    pub trace_gap: f64,
    /// `|tr(λI − A)|² − (nσ + |tr A|²)`.
    pub trace_sigma_gap: f64,
}

impl ShiftIdentity {
    /// Scale `1 + ‖A‖² + n|λ|²` the Frobenius-side gaps are measured against.
    pub fn norm_scale(&self, inp: &BoundInputs) -> f64 {
        1.0 + inp.frob_sq + inp.n as f64 * self.probe.lambda.norm_sqr()
    }

    /// Scale for the trace-side gaps, `n` times [`Self::norm_scale`].
    pub fn trace_scale(&self, inp: &BoundInputs) -> f64 {
        inp.n as f64 * self.norm_scale(inp)
    }
}

pub fn shift_identity_gap(a: &DenseMatrix, lambda: Complex) -> ShiftIdentity {
    let n = a.n() as f64;
    let trace = a.trace();
    let frob_sq = a.frobenius_norm_sq();
    let q = frob_sq - trace.norm_sqr() / n;
    let s = (lambda - trace / n).norm_sqr();
    let sigma_c = lambda.norm_sqr() * n - lambda * trace.conj() - lambda.conj() * trace;

    let shifted = a.shifted(lambda);
    let shifted_frob_sq = shifted.frobenius_norm_sq();
    let shifted_trace_sq = shifted.trace().norm_sqr();

    ShiftIdentity {
        probe: DerivationProbe {
            lambda,
            s,
            sigma: sigma_c.re,
            sigma_imag: sigma_c.im,
        },
        shifted_frob_sq,
        gap_sq_norm: shifted_frob_sq - (n * s + q),
        sigma_gap: shifted_frob_sq - (sigma_c.re + frob_sq),
        trace_gap: shifted_trace_sq - n * n * s,
        trace_sigma_gap: shifted_trace_sq - (n * sigma_c.re + trace.norm_sqr()),
    }
}

/// Multiplicity assigned to one eigenvalue cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterMultiplicity {
    pub cluster: Cluster,
    pub t: usize,
}

/// Per-cluster comparison of the trace-centered radii with the oracle.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClusterComparison {
    pub cluster_id: usize,
    pub representative: Complex,
    pub cluster_size: usize,
    pub t: usize,
    pub theorem1: Disc,
    /// `√((n−t)/(nt) · q)`.
    pub envelope_radius: f64,
    /// `√((n−1)/n · q)`.
    pub classical_width: f64,
    /// Largest `|λ − tr(A)/n|` over the cluster members.
    pub distance: f64,
    /// `theorem1.radius − distance`.
    pub slack: f64,
    /// `envelope_radius − theorem1.radius`.
    pub envelope_slack: f64,
    /// `theorem1.radius / classical_width`, only for `t = 1` and a nonzero width.
    pub sharpness_ratio: Option<f64>,
}

/// Evaluates the Theorem 1 disc, its normal-case envelope and the classical
/// width for every cluster and measures them against the oracle spectrum.
pub fn compare_bounds(
    inp: &BoundInputs,
    spectrum: &Spectrum,
    clusters: &[ClusterMultiplicity],
) -> Result<Vec<ClusterComparison>> {
    let width = classical_width(inp);
    clusters
        .iter()
        .map(|cm| {
            let wrap = |e: Error| Error::InCluster {
                cluster: cm.cluster.id,
                representative: cm.cluster.representative,
                source: Box::new(e),
            };
            let theorem1 = theorem1_radius(inp, cm.t).map_err(wrap)?;
            let envelope = envelope_radius(inp, cm.t).map_err(wrap)?;
            let distance = cm
                .cluster
                .members
                .iter()
                .map(|&i| theorem1.distance(spectrum.eigenvalues[i]))
                .fold(0.0, f64::max);
            Ok(ClusterComparison {
                cluster_id: cm.cluster.id,
                representative: cm.cluster.representative,
                cluster_size: cm.cluster.size(),
                t: cm.t,
                theorem1,
                envelope_radius: envelope,
                classical_width: width,
                distance,
                slack: theorem1.radius - distance,
                envelope_slack: envelope - theorem1.radius,
                sharpness_ratio: (cm.t == 1 && width > 0.0).then(|| theorem1.radius / width),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn real(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_real_rows(rows).unwrap()
    }

    fn jordan2() -> DenseMatrix {
        real(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    fn skew2() -> DenseMatrix {
        real(&[&[0.0, 1.0], &[-1.0, 0.0]])
    }

    fn diag_pm() -> DenseMatrix {
        real(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn inputs_examples() {
        let i = BoundInputs::from_matrix(&DenseMatrix::identity(3)).unwrap();
        assert_eq!((i.n, i.trace, i.frob_sq, i.q, i.delta), (3, Complex::new(3.0, 0.0), 3.0, 0.0, 0.0));
        let j = BoundInputs::from_matrix(&jordan2()).unwrap();
        assert_eq!((j.n, j.trace, j.frob_sq, j.q, j.delta), (2, Complex::new(0.0, 0.0), 1.0, 1.0, 1.0));
        let s = BoundInputs::from_matrix(&skew2()).unwrap();
        assert_eq!((s.trace.norm(), s.frob_sq, s.q, s.delta), (0.0, 2.0, 2.0, 0.0));
    }

    #[test]
    fn theorem1_examples() {
        let i = BoundInputs::from_matrix(&DenseMatrix::identity(3)).unwrap();
        let d = theorem1_radius(&i, 3).unwrap();
        assert_eq!((d.radius, d.center), (0.0, Complex::new(1.0, 0.0)));

        let j = BoundInputs::from_matrix(&jordan2()).unwrap();
        let d = theorem1_radius(&j, 1).unwrap();
        assert!(close(d.radius, (1.0f64 / 3.0).sqrt(), 1e-15));
        assert!(close(d.radius, 0.577350, 1e-6));
        assert_eq!(d.source, DiscSource::Theorem1);
        assert_eq!(d.t_used, Some(1));

        let s = BoundInputs::from_matrix(&skew2()).unwrap();
        let d = theorem1_radius(&s, 1).unwrap();
        assert!(close(d.radius, 1.0, 1e-15));
        assert!(close(d.slack(Complex::new(0.0, 1.0)), 0.0, 1e-15));
        assert!(close(d.slack(Complex::new(0.0, -1.0)), 0.0, 1e-15));
    }

    #[test]
    fn theorem1_rejects_bad_inputs() {
        let j = BoundInputs::from_matrix(&jordan2()).unwrap();
        assert!(matches!(theorem1_radius(&j, 0), Err(Error::InvalidMultiplicity { t: 0, n: 2 })));
        assert!(matches!(theorem1_radius(&j, 3), Err(Error::InvalidMultiplicity { .. })));
        // Δ inflated past q², which no actual matrix can produce.
        let bad = BoundInputs { delta: 4.0, ..j };
        assert!(matches!(theorem1_radius(&bad, 1), Err(Error::NegativeDiscriminant { t: 1, .. })));
        // Inside the clamp window: D = 1 − 3/4·Δ = −1e-12.
        let edge = BoundInputs { delta: (1.0 + 1e-12) * 4.0 / 3.0, ..j };
        let d = theorem1_radius(&edge, 1).unwrap();
        assert!(close(d.radius, (1.0f64 / 6.0).sqrt(), 1e-12));
    }

    #[test]
    fn normal_case_examples() {
        let p = BoundInputs::from_matrix(&diag_pm()).unwrap();
        let d = normal_case_radius(&p, 1, DiscSource::Theorem2Re).unwrap();
        assert!(close(d.radius, 1.0, 1e-15));
        assert!(close(d.slack(Complex::new(1.0, 0.0)), 0.0, 1e-15));
        assert_eq!(normal_case_radius(&p, 2, DiscSource::Theorem2Re).unwrap().radius, 0.0);

        let synthetic = BoundInputs {
            n: 3,
            trace: Complex::new(0.0, 0.0),
            frob_sq: 6.0,
            q: 6.0,
            delta: 0.0,
        };
        let d = normal_case_radius(&synthetic, 1, DiscSource::Theorem2Im).unwrap();
        assert!(close(d.radius, 2.0, 1e-15));
        assert_eq!(d.source, DiscSource::Theorem2Im);
    }

    #[test]
    fn theorem2_examples() {
        let h = real(&[&[2.0, 1.0], &[1.0, -1.0]]);
        let (_, im) = theorem2_discs(&h, 1, 2).unwrap();
        assert_eq!((im.center, im.radius), (Complex::new(0.0, 0.0), 0.0));

        let (re, im) = theorem2_discs(&jordan2(), 1, 1).unwrap();
        assert!(close(re.radius, 0.5, 1e-15));
        assert!(close(im.radius, 0.5, 1e-15));
        assert_eq!(re.center.im, 0.0);
        assert_eq!(im.center.im, 0.0);
        // Eigenvalues of Re_A are ±1/2, exactly on the boundary.
        assert!(close(re.slack(Complex::new(0.5, 0.0)), 0.0, 1e-15));
    }

    #[test]
    fn classical_examples() {
        let i = classical_interval(&BoundInputs::from_matrix(&DenseMatrix::identity(4)).unwrap());
        assert_eq!((i.lower, i.upper), (1.0, 1.0));
        let j = classical_interval(&BoundInputs::from_matrix(&jordan2()).unwrap());
        assert_eq!(j.lower, 0.0);
        assert!(close(j.upper, 0.5f64.sqrt(), 1e-15));
        let p = classical_interval(&BoundInputs::from_matrix(&diag_pm()).unwrap());
        assert_eq!((p.lower, p.upper), (0.0, 1.0));
    }

    #[test]
    fn lemma_examples() {
        for (a, expected1, expected2) in [
            (jordan2(), 0.0, 0.0),
            (skew2(), 0.0, 4.0),
            (DenseMatrix::identity(2), 0.0, 0.0),
            (diag_pm(), 0.0, 4.0),
        ] {
            let inp = BoundInputs::from_matrix(&a).unwrap();
            let spec = oracle::eigenvalues(&a).unwrap();
            let rank = oracle::numerical_rank(&a, oracle::DEFAULT_RANK_TOL).unwrap();
            assert!(close(lemma1_gap(&inp, &spec), expected1, 1e-9), "{a:?}");
            assert!(close(lemma2_gap(&inp, &rank), expected2, 1e-9), "{a:?}");
        }
    }

    #[test]
    fn shift_identity_examples() {
        let a = real(&[&[1.0, 2.0], &[-3.0, 0.5]]);
        let inp = BoundInputs::from_matrix(&a).unwrap();
        let centered = shift_identity_gap(&a, inp.center());
        assert_eq!(centered.probe.s, 0.0);
        assert!(close(centered.shifted_frob_sq, inp.q, 1e-13));

        let j = shift_identity_gap(&jordan2(), Complex::new(1.0, 0.0));
        assert_eq!(j.probe.s, 1.0);
        assert_eq!(j.shifted_frob_sq, 3.0);
        assert_eq!(j.gap_sq_norm, 0.0);
        assert_eq!(j.trace_gap, 0.0);

        let zero = shift_identity_gap(&a, Complex::new(0.0, 0.0));
        assert!(close(zero.gap_sq_norm, 0.0, 1e-13));
        assert_eq!(zero.probe.sigma, 0.0);
    }

    #[test]
    fn compare_examples() {
        let a = jordan2();
        let inp = BoundInputs::from_matrix(&a).unwrap();
        let spec = oracle::eigenvalues(&a).unwrap();
        let cl = spec.clusters();
        let rows = compare_bounds(&inp, &spec, &[ClusterMultiplicity { cluster: cl[0].clone(), t: 1 }])
            .unwrap();
        let r = &rows[0];
        assert!(r.theorem1.radius < r.classical_width);
        assert!(close(r.sharpness_ratio.unwrap(), (2.0f64 / 3.0).sqrt(), 1e-15));
        assert_eq!(r.distance, 0.0);

        let c = DenseMatrix::scalar(3, Complex::new(2.0, -1.0));
        let inp = BoundInputs::from_matrix(&c).unwrap();
        let spec = oracle::eigenvalues(&c).unwrap();
        let cl = spec.clusters();
        let rows = compare_bounds(&inp, &spec, &[ClusterMultiplicity { cluster: cl[0].clone(), t: 3 }])
            .unwrap();
        assert_eq!((rows[0].theorem1.radius, rows[0].distance, rows[0].classical_width), (0.0, 0.0, 0.0));
        assert_eq!(rows[0].sharpness_ratio, None);
    }

    #[test]
    fn compare_tags_failing_cluster() {
        let inp = BoundInputs {
            n: 2,
            trace: Complex::new(0.0, 0.0),
            frob_sq: 1.0,
            q: 1.0,
            delta: 10.0,
        };
        let spec = oracle::eigenvalues(&jordan2()).unwrap();
        let cl = spec.clusters()[0].clone();
        let err = compare_bounds(&inp, &spec, &[ClusterMultiplicity { cluster: cl, t: 1 }]).unwrap_err();
        assert!(matches!(err, Error::InCluster { cluster: 0, .. }));
    }
}
