//! Eigenvalue lists with backward-error residuals and clustering.

use alloc::vec;
use alloc::vec::Vec;

use super::schur::{schur, SchurForm};
use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{Complex, DenseMatrix, ZERO};

/// Relative cluster tolerance: eigenvalues closer than
/// `DEFAULT_CLUSTER_REL_TOL · (1 + ‖A‖)` are grouped together.
pub const DEFAULT_CLUSTER_REL_TOL: f64 = 1e-7;

pub fn default_cluster_tolerance(frobenius_norm: f64) -> f64 {
    DEFAULT_CLUSTER_REL_TOL * (1.0 + frobenius_norm)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex>,
    /// Normwise backward error `‖Ax − λx‖ / (‖A‖‖x‖)` of each eigenpair.
    pub residuals: Vec<f64>,
    /// Eigenvalues with modulus above `zero_tolerance`.
    pub nonzero_count: usize,
    /// Cluster label per eigenvalue, numbered in order of first appearance.
    pub cluster_ids: Vec<usize>,
    pub zero_tolerance: f64,
    pub cluster_tolerance: f64,
}

/// Eigenvalues grouped as numerically coincident.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Cluster {
    pub id: usize,
    /// Indices into `Spectrum::eigenvalues`.
    pub members: Vec<usize>,
    /// Centroid of the members.
    pub representative: Complex,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn sum(&self) -> Complex {
        self.eigenvalues.iter().sum()
    }

    /// `Σ|λ_i|²`.
    pub fn sum_abs_sq(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|λ|_max`.
    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn clusters(&self) -> Vec<Cluster> {
        let count = self.cluster_ids.iter().max().map_or(0, |m| m + 1);
        let mut out: Vec<Cluster> = (0..count)
            .map(|id| Cluster {
                id,
                members: Vec::new(),
                representative: ZERO,
            })
            .collect();
        for (i, &id) in self.cluster_ids.iter().enumerate() {
            out[id].members.push(i);
        }
        for c in &mut out {
            let sum: Complex = c.members.iter().map(|&i| self.eigenvalues[i]).sum();
            c.representative = sum / c.members.len() as f64;
        }
        out
    }
}

/// Full spectrum of `a` with default zero and cluster tolerances.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Spectrum> {
    let form = schur(a)?;
    Ok(spectrum_from_schur(a, &form))
}

/// Builds the spectrum from an existing Schur form of `a`.
pub fn spectrum_from_schur(a: &DenseMatrix, form: &SchurForm) -> Spectrum {
    let eigenvalues = form.eigenvalues();
    let residuals = residuals(a, form);
    let tol = default_cluster_tolerance(a.frobenius_norm());
    let nonzero_count = eigenvalues.iter().filter(|z| z.norm() > tol).count();
    let cluster_ids = single_linkage(&eigenvalues, tol);
    Spectrum {
        eigenvalues,
        residuals,
        nonzero_count,
        cluster_ids,
        zero_tolerance: tol,
        cluster_tolerance: tol,
    }
}

/// Re-clusters by single linkage on complex-plane distance.
pub fn cluster_eigenvalues(spec: &Spectrum, cluster_tol: f64) -> Result<Spectrum> {
    if !cluster_tol.is_finite() || cluster_tol <= 0.0 {
        return Err(Error::InvalidTolerance(cluster_tol));
    }
    let mut out = spec.clone();
    out.cluster_ids = single_linkage(&spec.eigenvalues, cluster_tol);
    out.cluster_tolerance = cluster_tol;
    Ok(out)
}

fn single_linkage(values: &[Complex], tol: f64) -> Vec<usize> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut ids = Vec::with_capacity(n);
    for i in 0..n {
        let root = find(&mut parent, i);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        ids.push(label[root]);
    }
    ids
}

/// Backward error of each eigenpair. Eigenvectors come from back
/// substitution on the triangular factor and are mapped back through `U*`.
fn residuals(a: &DenseMatrix, form: &SchurForm) -> Vec<f64> {
    let n = a.n();
    let r = &form.upper_triangular;
    let norm_a = a.frobenius_norm();
    if norm_a == 0.0 {
        return vec![0.0; n];
    }
    let q = form.unitary.adjoint();
    let small = (f64::EPSILON * r.frobenius_norm()).max(f64::MIN_POSITIVE);
    const RESCALE: f64 = 1e150;

    let mut y = vec![ZERO; n];
    let mut x = vec![ZERO; n];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lambda = r.get(i, i);
        y.iter_mut().for_each(|v| *v = ZERO);
        y[i] = Complex::new(1.0, 0.0);
        for j in (0..i).rev() {
            let acc: Complex = (j + 1..=i).zip(&y[j + 1..=i]).map(|(k, &yk)| r.get(j, k) * yk).sum();
            let mut den = r.get(j, j) - lambda;
            if den.norm() < small {
                den = Complex::new(small, 0.0);
            }
            y[j] = -acc / den;
            let mag = y[j].norm();
            if mag > RESCALE {
                for v in &mut y[j..=i] {
                    *v /= mag;
                }
            }
        }
        for (row, xr) in x.iter_mut().enumerate() {
            *xr = y[..=i].iter().enumerate().map(|(k, &yk)| q.get(row, k) * yk).sum();
        }
        let xnorm = math::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
        let mut res = 0.0;
        for row in 0..n {
            let mut acc = -lambda * x[row];
            for (k, xk) in x.iter().enumerate() {
                acc += a.get(row, k) * xk;
            }
            res += acc.norm_sqr();
        }
        out.push(math::sqrt(res) / (norm_a * xnorm));
    }
    out
}
