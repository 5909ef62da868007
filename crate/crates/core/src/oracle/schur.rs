//! Complex Schur decomposition: Householder reduction to upper Hessenberg
//! form followed by single-shift QR iteration with Wilkinson shifts.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{Complex, DenseMatrix, ONE, ZERO};

/// Subdiagonal entries with `|h| ≤ DEFLATION_EPS·(|h_ii| + |h_jj|)` are set to zero.
pub const DEFLATION_EPS: f64 = 1e-14;

/// Default QR sweep budget per eigenvalue.
pub const DEFAULT_MAX_ITERS: usize = 40;

/// `A = U* R U` with `U` unitary and `R` upper triangular.
///
/// The diagonal of `R` carries the eigenvalues of `A`; writing
/// `R = Λ + M` splits it into the diagonal part and a strictly upper part.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurForm {
    pub unitary: DenseMatrix,
    pub upper_triangular: DenseMatrix,
}

impl SchurForm {
    /// Diagonal of `R` in the order the iteration deflated them.
    pub fn eigenvalues(&self) -> Vec<Complex> {
        self.upper_triangular.diag()
    }

    /// `U* R U`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.unitary
            .adjoint()
            .multiply(&self.upper_triangular)
            .and_then(|m| m.multiply(&self.unitary))
            .expect("factors share a dimension")
    }

    /// Largest entry of `U U* − I`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.unitary.n();
        let g = self
            .unitary
            .multiply(&self.unitary.adjoint())
            .expect("square");
        g.max_abs_diff(&DenseMatrix::identity(n)).expect("square")
    }

    /// Largest entry modulus strictly below the diagonal of `R`.
    pub fn lower_defect(&self) -> f64 {
        let r = &self.upper_triangular;
        let n = r.n();
        let mut worst = 0.0f64;
        for i in 1..n {
            for j in 0..i {
                worst = worst.max(r.get(i, j).norm());
            }
        }
        worst
    }
}

/// Schur decomposition with the default sweep budget.
pub fn schur(a: &DenseMatrix) -> Result<SchurForm> {
    schur_decompose(a, DEFAULT_MAX_ITERS)
}

/// Computes `A = U* R U`.
///
/// `max_iters` bounds the number of QR sweeps spent on any single eigenvalue
/// before it deflates; the total budget is therefore `max_iters · n`.
pub fn schur_decompose(a: &DenseMatrix, max_iters: usize) -> Result<SchurForm> {
    let n = a.n();
    let mut h = a.clone();
    let mut q = DenseMatrix::identity(n);
    hessenberg(h.data_mut(), q.data_mut(), n);

    let outcome = qr_iterate(h.data_mut(), q.data_mut(), n, max_iters);

    // A = Q T Q*, so U = Q*.
    let form = SchurForm {
        unitary: q.adjoint(),
        upper_triangular: h,
    };
    match outcome {
        Ok(()) => Ok(form),
        Err((converged, iterations)) => Err(Error::NonConvergence {
            partial: Box::new(form),
            converged,
            iterations,
        }),
    }
}

/// In-place reduction `A ← Pᴴ A P` to upper Hessenberg form, accumulating
/// `Q ← Q P`. Each `P` is a complex Householder reflector.
fn hessenberg(h: &mut [Complex], q: &mut [Complex], n: usize) {
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let tail: f64 = (k + 2..n).map(|i| h[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1) * n + k];
        let xnorm = math::sqrt(x0.norm_sqr() + tail);
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;

        v[0] = x0 - alpha;
        for i in 1..len {
            v[i] = h[(k + 1 + i) * n + k];
        }
        let vv = v[0].norm_sqr() + tail;
        let beta = 2.0 / vv;
        let v = &v[..len];

        for c in k..n {
            let mut w = ZERO;
            for (i, vi) in v.iter().enumerate() {
                w += vi.conj() * h[(k + 1 + i) * n + c];
            }
            w *= beta;
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i) * n + c] -= vi * w;
            }
        }
        apply_reflector_right(h, n, k + 1, v, beta);
        apply_reflector_right(q, n, k + 1, v, beta);

        h[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            h[i * n + k] = ZERO;
        }
    }
}

/// `M[:, offset..] ← M[:, offset..] (I − β v vᴴ)` for every row.
fn apply_reflector_right(m: &mut [Complex], n: usize, offset: usize, v: &[Complex], beta: f64) {
    for r in 0..n {
        let row = &mut m[r * n + offset..r * n + offset + v.len()];
        let mut w = ZERO;
        for (x, vi) in row.iter().zip(v) {
            w += x * vi;
        }
        w *= beta;
        for (x, vi) in row.iter_mut().zip(v) {
            *x -= w * vi.conj();
        }
    }
}

/// Drives the Hessenberg matrix to upper triangular form.
///
/// On failure returns `(converged, total_sweeps)`.
fn qr_iterate(
    h: &mut [Complex],
    q: &mut [Complex],
    n: usize,
    max_iters: usize,
) -> core::result::Result<(), (usize, usize)> {
    if n == 1 {
        return Ok(());
    }
    let fallback_scale: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let fallback_scale = math::sqrt(fallback_scale);
    let idx = |i: usize, j: usize| i * n + j;

    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;

    while hi > 0 {
        let mut lo = 0;
        for k in (1..=hi).rev() {
            let sub = h[idx(k, k - 1)].norm();
            let mut scale = h[idx(k - 1, k - 1)].norm() + h[idx(k, k)].norm();
            if scale == 0.0 {
                scale = fallback_scale;
            }
            if sub <= DEFLATION_EPS * scale || sub < f64::MIN_POSITIVE {
                h[idx(k, k - 1)] = ZERO;
                lo = k;
                break;
            }
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        if its >= max_iters {
            return Err((n - 1 - hi, total));
        }
        its += 1;
        total += 1;

        let shift = if its.is_multiple_of(10) {
            // Exceptional shift to break cycles.
            h[idx(hi, hi)] + 0.75 * h[idx(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[idx(hi - 1, hi - 1)],
                h[idx(hi - 1, hi)],
                h[idx(hi, hi - 1)],
                h[idx(hi, hi)],
            )
        };

        let mut x = h[idx(lo, lo)] - shift;
        let mut y = h[idx(lo + 1, lo)];
        for k in lo..hi {
            if k > lo {
                x = h[idx(k, k - 1)];
                y = h[idx(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let start = if k > lo { k - 1 } else { lo };
            for j in start..n {
                let a = h[idx(k, j)];
                let b = h[idx(k + 1, j)];
                h[idx(k, j)] = a * c + s * b;
                h[idx(k + 1, j)] = b * c - s.conj() * a;
            }
            if k > lo {
                h[idx(k + 1, k - 1)] = ZERO;
            }
            let rmax = (k + 2).min(hi);
            for r in 0..=rmax {
                let a = h[idx(r, k)];
                let b = h[idx(r, k + 1)];
                h[idx(r, k)] = a * c + b * s.conj();
                h[idx(r, k + 1)] = b * c - a * s;
            }
            for r in 0..n {
                let a = q[idx(r, k)];
                let b = q[idx(r, k + 1)];
                q[idx(r, k)] = a * c + b * s.conj();
                q[idx(r, k + 1)] = b * c - a * s;
            }
        }
    }
    Ok(())
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let plus = half + disc;
    let minus = half - disc;
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom == ZERO {
        d
    } else {
        d - b * c / denom
    }
}

/// Rotation `G = [[c, s], [−s̄, c]]` with real `c` such that `G [x; y] = [r; 0]`.
fn givens(x: Complex, y: Complex) -> (f64, Complex) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = math::hypot(ax, ay);
    (ax / r, (x / ax) * y.conj() / r)
}
