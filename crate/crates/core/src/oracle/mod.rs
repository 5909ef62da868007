//! Independent spectral ground truth: Schur decomposition, eigenvalues,
//! singular values, numerical rank and geometric multiplicity.
//!
//! Nothing here uses the bound formulas, so the bounds can be checked
//! against it.

mod rank;
mod schur;
mod spectrum;

pub use rank::{
    geometric_multiplicity, numerical_rank, singular_values, MultiplicityEstimate, RankEstimate,
    DEFAULT_RANK_TOL,
};
pub use schur::{schur, schur_decompose, SchurForm, DEFAULT_MAX_ITERS, DEFLATION_EPS};
pub use spectrum::{
    cluster_eigenvalues, default_cluster_tolerance, eigenvalues, spectrum_from_schur, Cluster,
    Spectrum, DEFAULT_CLUSTER_REL_TOL,
};
