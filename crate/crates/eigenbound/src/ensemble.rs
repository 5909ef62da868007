//! Seeded random matrix ensembles.
//!
//! Every draw comes from a ChaCha8 stream seeded through
//! `SeedableRng::seed_from_u64`. Uniforms take the top 53 bits of each
//! 64-bit word and Gaussians use the Box–Muller transform evaluated with
//! `libm`, so a given `(kind, n, seed, scale)` yields bitwise-identical
//! matrices on every platform.
//!
//! Trial `i` of a sweep with base seed `s` uses [`trial_seed`]`(s, i)`, the
//! `i + 1`-th output of a SplitMix64 generator started at `s`.

use std::fmt;
use std::str::FromStr;

use eigenbound_core::{Complex, DenseMatrix};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// i.i.d. complex Gaussian entries.
    GinibreComplex,
    /// i.i.d. real Gaussian entries.
    GaussianReal,
    /// `(G + G*)/2` of a complex Ginibre draw.
    Hermitian,
    /// `U·D·U*` with Gaussian diagonal `D` and a Householder-product unitary `U`.
    NormalConjugated,
    /// Single nilpotent Jordan block, superdiagonal equal to `scale`.
    JordanNilpotent,
    /// Diagonal matrix with one value repeated `t` times.
    DiagonalRepeated,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 6] = [
        EnsembleKind::GinibreComplex,
        EnsembleKind::GaussianReal,
        EnsembleKind::Hermitian,
        EnsembleKind::NormalConjugated,
        EnsembleKind::JordanNilpotent,
        EnsembleKind::DiagonalRepeated,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::GinibreComplex => "ginibre_complex",
            EnsembleKind::GaussianReal => "gaussian_real",
            EnsembleKind::Hermitian => "hermitian",
            EnsembleKind::NormalConjugated => "normal_conjugated",
            EnsembleKind::JordanNilpotent => "jordan_nilpotent",
            EnsembleKind::DiagonalRepeated => "diagonal_repeated",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.replace('-', "_");
        EnsembleKind::ALL
            .into_iter()
            .find(|k| k.as_str() == wanted)
            .ok_or_else(|| Error::Ensemble(format!("unknown ensemble kind `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub seed: u64,
    /// Entry standard deviation (`E|a_ij|² = scale²`).
    pub scale: f64,
    /// Repetition count for `diagonal_repeated`; drawn from the seed when absent.
    pub repeat: Option<usize>,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            seed,
            scale: 1.0,
            repeat: None,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_repeat(mut self, repeat: usize) -> Self {
        self.repeat = Some(repeat);
        self
    }

    /// Same spec with the seed of trial `trial`.
    pub fn for_trial(&self, trial: u64) -> Self {
        Self {
            seed: trial_seed(self.seed, trial),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Ensemble("n must be at least 1".into()));
        }
        if !self.scale.is_finite() || self.scale <= 0.0 {
            return Err(Error::Ensemble(format!(
                "scale must be positive and finite, got {}",
                self.scale
            )));
        }
        if let Some(t) = self.repeat {
            if t == 0 || t > self.n {
                return Err(Error::Ensemble(format!(
                    "repeat must lie in 1..={}, got {t}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// A generated matrix together with whatever the construction pins down.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub matrix: DenseMatrix,
    /// Exact eigenvalues (as a multiset) when the construction fixes them.
    pub eigenvalues: Option<Vec<Complex>>,
    /// `(value, t)` for `diagonal_repeated`.
    pub repeated: Option<(Complex, usize)>,
}

pub fn generate(spec: &EnsembleSpec) -> Result<DenseMatrix> {
    Ok(sample(spec)?.matrix)
}

pub fn sample(spec: &EnsembleSpec) -> Result<Sample> {
    spec.validate()?;
    let n = spec.n;
    let scale = spec.scale;
    let mut g = Gaussian::new(spec.seed);
    let plain = |matrix| Sample {
        matrix,
        eigenvalues: None,
        repeated: None,
    };

    let out = match spec.kind {
        EnsembleKind::GinibreComplex => plain(ginibre(&mut g, n, scale)?),
        EnsembleKind::GaussianReal => plain(DenseMatrix::from_fn(n, |_, _| {
            Complex::new(scale * g.next(), 0.0)
        })?),
        EnsembleKind::Hermitian => plain(ginibre(&mut g, n, scale)?.hermitian_real_part()),
        EnsembleKind::NormalConjugated => {
            let d: Vec<Complex> = (0..n).map(|_| g.complex(scale)).collect();
            let u = householder_unitary(&mut g, n);
            let m = u
                .multiply(&DenseMatrix::diagonal(&d)?)?
                .multiply(&u.adjoint())?;
            Sample {
                matrix: m,
                eigenvalues: Some(d),
                repeated: None,
            }
        }
        EnsembleKind::JordanNilpotent => Sample {
            matrix: DenseMatrix::from_fn(n, |i, j| {
                if j == i + 1 {
                    Complex::new(scale, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            })?,
            eigenvalues: Some(vec![Complex::new(0.0, 0.0); n]),
            repeated: None,
        },
        EnsembleKind::DiagonalRepeated => {
            let t = spec
                .repeat
                .unwrap_or_else(|| (2 + (g.rng.next_u64() % 2) as usize).min(n));
            let value = g.complex(scale);
            let mut d = vec![value; t];
            d.extend((t..n).map(|_| g.complex(scale)));
            // Fisher–Yates so the repeated value is not always on top.
            for i in (1..n).rev() {
                let j = (g.rng.next_u64() % (i as u64 + 1)) as usize;
                d.swap(i, j);
            }
            Sample {
                matrix: DenseMatrix::diagonal(&d)?,
                eigenvalues: Some(d),
                repeated: Some((value, t)),
            }
        }
    };
    Ok(out)
}

/// Seed of trial `trial` in a sweep started from `base`.
pub fn trial_seed(base: u64, trial: u64) -> u64 {
    let mut z = base.wrapping_add((trial.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn ginibre(g: &mut Gaussian, n: usize, scale: f64) -> Result<DenseMatrix> {
    Ok(DenseMatrix::from_fn(n, |_, _| g.complex(scale))?)
}

/// Product of `n` Householder reflectors with Gaussian direction vectors.
pub(crate) fn householder_unitary(g: &mut Gaussian, n: usize) -> DenseMatrix {
    let mut u = vec![Complex::new(0.0, 0.0); n * n];
    for i in 0..n {
        u[i * n + i] = Complex::new(1.0, 0.0);
    }
    for _ in 0..n {
        let v: Vec<Complex> = (0..n).map(|_| g.complex(1.0)).collect();
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        let beta = 2.0 / vv;
        // U ← U (I − β v v*)
        for row in u.chunks_exact_mut(n) {
            let w: Complex = row.iter().zip(&v).map(|(x, vi)| x * vi).sum::<Complex>() * beta;
            for (x, vi) in row.iter_mut().zip(&v) {
                *x -= w * vi.conj();
            }
        }
    }
    DenseMatrix::from_row_major(n, u).expect("reflector products stay finite")
}

/// Standard normal variates from a ChaCha8 stream.
pub(crate) struct Gaussian {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Gaussian {
    pub(crate) fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub(crate) fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    /// Complex Gaussian with `E|z|² = scale²`.
    pub(crate) fn complex(&mut self, scale: f64) -> Complex {
        let s = scale * std::f64::consts::FRAC_1_SQRT_2;
        Complex::new(s * self.next(), s * self.next())
    }
}
