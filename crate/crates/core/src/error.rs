use alloc::boxed::Box;
use core::fmt;

use crate::matrix::Complex;
use crate::oracle::SchurForm;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone)]
pub enum Error {
    /// A matrix needs at least one row.
    EmptyMatrix,
    /// Entry count does not match `n * n`.
    NotSquare { n: usize, len: usize },
    /// NaN or infinity at the given (row, col).
    NonFinite { row: usize, col: usize },
    DimensionMismatch { left: usize, right: usize },
    /// The QR iteration stalled. `partial` holds the last iterate: the
    /// similarity is still exact, only the trailing block is not triangular.
    NonConvergence {
        partial: Box<SchurForm>,
        /// Number of eigenvalues deflated before giving up.
        converged: usize,
        iterations: usize,
    },
    /// `λI − A` has full numerical rank and its smallest singular value is far
    /// above the rank tolerance.
    NotAnEigenvalue {
        lambda: Complex,
        smallest_singular_value: f64,
        tolerance: f64,
    },
    /// `λI − A` has full numerical rank but its smallest singular value sits
    /// close to the tolerance; `λ` is plausibly an eigenvalue and the rank
    /// tolerance is too tight to see it.
    BorderlineRank {
        lambda: Complex,
        smallest_singular_value: f64,
        tolerance: f64,
    },
    /// Multiplicity outside `1..=n`.
    InvalidMultiplicity { t: usize, n: usize },
    /// The inner square root of the Theorem 1 radius went negative beyond the
    /// clamp window, so `t` is inconsistent with the matrix.
    NegativeDiscriminant { t: usize, discriminant: f64, clamp: f64 },
    /// `q_A = ‖A‖² − |tr A|²/n` came out negative beyond rounding.
    NegativeSpread { q: f64, frob_sq: f64 },
    InvalidTolerance(f64),
    /// A per-cluster computation failed; `source` says why.
    InCluster {
        cluster: usize,
        representative: Complex,
        source: Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyMatrix => write!(f, "matrix dimension must be at least 1"),
            Error::NotSquare { n, len } => {
                write!(f, "expected {} entries for a {n}x{n} matrix, got {len}", n * n)
            }
            Error::NonFinite { row, col } => {
                write!(f, "non-finite entry at ({row}, {col})")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::NonConvergence {
                converged,
                iterations,
                partial,
            } => write!(
                f,
                "QR iteration did not converge after {iterations} sweeps \
                 ({converged} of {} eigenvalues deflated)",
                partial.upper_triangular.n()
            ),
            Error::NotAnEigenvalue {
                lambda,
                smallest_singular_value,
                tolerance,
            } => write!(
                f,
                "{lambda} is not an eigenvalue at this tolerance: smallest singular value \
                 of the shift is {smallest_singular_value:e} (tolerance {tolerance:e})"
            ),
            Error::BorderlineRank {
                lambda,
                smallest_singular_value,
                tolerance,
            } => write!(
                f,
                "rank tolerance too tight at {lambda}: smallest singular value \
                 {smallest_singular_value:e} is within 1e3 of the tolerance {tolerance:e}"
            ),
            Error::InvalidMultiplicity { t, n } => {
                write!(f, "multiplicity t = {t} outside 1..={n}")
            }
            Error::NegativeDiscriminant {
                t,
                discriminant,
                clamp,
            } => write!(
                f,
                "discriminant negative ({discriminant:e} < -{clamp:e}): \
                 t = {t} inconsistent with Theorem 1 premises for this matrix"
            ),
            Error::NegativeSpread { q, frob_sq } => write!(
                f,
                "q_A = {q:e} is negative beyond rounding (‖A‖² = {frob_sq:e})"
            ),
            Error::InvalidTolerance(tol) => write!(f, "tolerance must be positive, got {tol}"),
            Error::InCluster {
                cluster,
                representative,
                source,
            } => write!(f, "cluster {cluster} (eigenvalue {representative}): {source}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::InCluster { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
