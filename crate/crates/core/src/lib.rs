//! Trace-centered eigenvalue localization for dense complex matrices.
//!
//! Every eigenvalue `λ` of an `n × n` complex matrix `A` with geometric
//! multiplicity `t` lies in a disc centered at `tr(A)/n` whose radius depends
//! only on `n`, `t`, `q_A = ‖A‖² − |tr A|²/n` and the commutator defect
//! `Δ_A = ‖AA* − A*A‖²/2`. This crate computes those discs, the simpler
//! radii for the Hermitian real and imaginary parts, the classical
//! trace/Frobenius modulus interval, and checks all of them against an
//! independent dense eigensolver.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, random
//! ensembles and the command line live in the companion `eigenbound` crate.
//!
//! ```
//! use eigenbound_core::{bounds, DenseMatrix};
//!
//! let jordan = DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
//! let inp = bounds::BoundInputs::from_matrix(&jordan).unwrap();
//! let disc = bounds::theorem1_radius(&inp, 1).unwrap();
//! assert!((disc.radius - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
//! ```
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod bounds;
mod error;
mod math;
pub mod matrix;
pub mod oracle;

pub use error::{Error, Result};
pub use matrix::{Complex, DenseMatrix};
