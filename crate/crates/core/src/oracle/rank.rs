//! Singular values, numerical rank and geometric multiplicity.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{Complex, DenseMatrix, ZERO};

/// Default relative rank tolerance.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 60;

/// Numerical rank together with the evidence it was read from.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RankEstimate {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Absolute threshold: singular values strictly above it count.
    pub tolerance_used: f64,
}

impl RankEstimate {
    /// True when some singular value lies within three orders of magnitude
    /// of the threshold, so the rank reading depends on the tolerance choice.
    pub fn is_borderline(&self) -> bool {
        let tol = self.tolerance_used;
        tol > 0.0
            && self
                .singular_values
                .iter()
                .any(|&s| s > tol * 1e-3 && s < tol * 1e3)
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }
}

/// Geometric multiplicity `t = n − rank(λI − A)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MultiplicityEstimate {
    pub eigenvalue: Complex,
    pub t: usize,
    pub rank_of_shift: RankEstimate,
}

/// Singular values in descending order.
///
/// One-sided Jacobi: plane rotations orthogonalize the columns of a working
/// copy, and the singular values are the final column norms. Zero singular
/// values come out at the `ε‖A‖` level.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    let n = a.n();
    // Column-major working copy.
    let mut w: Vec<Complex> = (0..n * n).map(|k| a.get(k % n, k / n)).collect();
    let eps = f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (head, tail) = w.split_at_mut(q * n);
                let cp = &mut head[p * n..(p + 1) * n];
                let cq = &mut tail[..n];
                let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let mut gamma = ZERO;
                for (x, y) in cp.iter().zip(cq.iter()) {
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g <= eps * math::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (math::abs(zeta) + math::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    // Rotate x against the phase-aligned y·conj(phase).
                    let u = *y * phase.conj();
                    let nx = *x * c - u * s;
                    let nu = *x * s + u * c;
                    *x = nx;
                    *y = nu;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = w
        .chunks_exact(n)
        .map(|col| math::sqrt(col.iter().map(|z| z.norm_sqr()).sum::<f64>()))
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Counts singular values above `rel_tol · σ_max · n`.
pub fn numerical_rank(a: &DenseMatrix, rel_tol: f64) -> Result<RankEstimate> {
    if !rel_tol.is_finite() || rel_tol <= 0.0 {
        return Err(Error::InvalidTolerance(rel_tol));
    }
    rank_above(a, rel_tol, 0.0)
}

/// Rank with cutoff `rel_tol · max(σ_max, scale) · n`.
fn rank_above(a: &DenseMatrix, rel_tol: f64, scale: f64) -> Result<RankEstimate> {
    if !rel_tol.is_finite() || rel_tol <= 0.0 {
        return Err(Error::InvalidTolerance(rel_tol));
    }
    let singular_values = singular_values(a);
    let tolerance_used = rel_tol * singular_values[0].max(scale) * a.n() as f64;
    let rank = singular_values.iter().filter(|&&s| s > tolerance_used).count();
    Ok(RankEstimate {
        rank,
        singular_values,
        tolerance_used,
    })
}

/// `t = n − rank(λI − A)`.
///
/// The rank cutoff is measured against `max(σ_max(λI − A), ‖A‖)`, so a
/// shift that cancels `A` down to rounding noise (as for a rotated `cI`)
/// still counts as rank zero.
///
/// Fails when `λI − A` has full numerical rank. The error separates a
/// `λ` that is clearly not an eigenvalue from one whose smallest singular
/// value sits near the tolerance.
pub fn geometric_multiplicity(
    a: &DenseMatrix,
    lambda: Complex,
    rel_tol: f64,
) -> Result<MultiplicityEstimate> {
    let rank_of_shift = rank_above(&a.shifted(lambda), rel_tol, a.frobenius_norm())?;
    let t = a.n() - rank_of_shift.rank;
    if t == 0 {
        let smallest = rank_of_shift.smallest();
        let tolerance = rank_of_shift.tolerance_used;
        return Err(if smallest <= 1e3 * tolerance {
            Error::BorderlineRank {
                lambda,
                smallest_singular_value: smallest,
                tolerance,
            }
        } else {
            Error::NotAnEigenvalue {
                lambda,
                smallest_singular_value: smallest,
                tolerance,
            }
        });
    }
    Ok(MultiplicityEstimate {
        eigenvalue: lambda,
        t,
        rank_of_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;

    fn real(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn singular_value_examples() {
        assert_eq!(singular_values(&DenseMatrix::identity(4)), alloc::vec![1.0; 4]);

        let sv = singular_values(&real(&[&[1.0, 2.0], &[2.0, 4.0]]));
        assert!((sv[0] - 5.0).abs() < 1e-14);
        assert!(sv[1].abs() < 1e-14);

        let sv = singular_values(&real(&[&[0.0, 1.0], &[0.0, 0.0]]));
        assert_eq!(sv, alloc::vec![1.0, 0.0]);
    }

    #[test]
    fn singular_values_of_complex_matrix() {
        // [[1, i], [i, 1]] = I + iJ has singular values |1 ± i| = √2.
        let a = DenseMatrix::from_rows(&[
            &[ONE, Complex::new(0.0, 1.0)],
            &[Complex::new(0.0, 1.0), ONE],
        ])
        .unwrap();
        for s in singular_values(&a) {
            assert!((s - 2f64.sqrt()).abs() < 1e-14);
        }
        // [[1, 1], [0, 1]]: σ² are roots of x² − 3x + 1.
        let sv = singular_values(&real(&[&[1.0, 1.0], &[0.0, 1.0]]));
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((sv[0] - golden).abs() < 1e-14);
        assert!((sv[1] - 1.0 / golden).abs() < 1e-14);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&DenseMatrix::zeros(3), 1e-10).unwrap().rank, 0);
        let r = numerical_rank(&real(&[&[1.0, 2.0], &[2.0, 4.0]]), 1e-10).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.tolerance_used, 1e-10 * r.singular_values[0] * 2.0);
        assert_eq!(numerical_rank(&DenseMatrix::identity(3), 1e-10).unwrap().rank, 3);
        assert!(matches!(
            numerical_rank(&DenseMatrix::identity(3), 0.0),
            Err(Error::InvalidTolerance(_))
        ));
    }

    #[test]
    fn multiplicity_examples() {
        let m = geometric_multiplicity(&DenseMatrix::identity(3), ONE, 1e-10).unwrap();
        assert_eq!(m.t, 3);
        let m = geometric_multiplicity(&real(&[&[0.0, 1.0], &[0.0, 0.0]]), ZERO, 1e-10).unwrap();
        assert_eq!(m.t, 1);
        let d = real(&[&[2.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 5.0]]);
        let m = geometric_multiplicity(&d, Complex::new(2.0, 0.0), 1e-10).unwrap();
        assert_eq!(m.t, 2);
        assert_eq!(m.rank_of_shift.rank, 1);
    }

    #[test]
    fn multiplicity_errors_distinguish_causes() {
        let d = real(&[&[2.0, 0.0], &[0.0, 5.0]]);
        assert!(matches!(
            geometric_multiplicity(&d, Complex::new(3.0, 0.0), 1e-10),
            Err(Error::NotAnEigenvalue { .. })
        ));
        // Off by 1e-8: σ_min = 1e-8 vs tolerance 1e-10·√29·2 ≈ 1.08e-9.
        assert!(matches!(
            geometric_multiplicity(&d, Complex::new(2.0 + 1e-8, 0.0), 1e-10),
            Err(Error::BorderlineRank { .. })
        ));
    }

    #[test]
    fn borderline_flag() {
        let r = RankEstimate {
            rank: 1,
            singular_values: alloc::vec![1.0, 1e-11],
            tolerance_used: 1e-10,
        };
        assert!(r.is_borderline());
        let r = RankEstimate {
            rank: 1,
            singular_values: alloc::vec![1.0, 0.0],
            tolerance_used: 1e-10,
        };
        assert!(!r.is_borderline());
    }
}
