//! Dense square complex matrices and the scalar statistics the bounds consume.

use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};
use crate::math;

/// Double-precision complex scalar.
pub type Complex = num_complex::Complex64;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

/// Square `n × n` complex matrix stored row-major.
///
/// Entries are always finite: the checked constructors reject NaN and
/// infinity, and every operation here maps finite input to finite output
/// barring overflow.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl DenseMatrix {
    /// Builds a matrix from `n * n` row-major entries.
    pub fn from_row_major(n: usize, data: Vec<Complex>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(Error::NotSquare { n, len: data.len() });
        }
        if let Some(pos) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[&[Complex]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    n,
                    len: n * (n - 1) + row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    n,
                    len: n * (n - 1) + row.len(),
                });
            }
            data.extend(row.iter().map(|&x| Complex::new(x, 0.0)));
        }
        Self::from_row_major(n, data)
    }

    /// Builds a matrix from `f(row, col)`, rejecting non-finite values.
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex) -> Result<Self> {
        let m = Self::from_fn_unchecked(n, f);
        Self::from_row_major(m.n, m.data)
    }

    pub(crate) fn from_fn_unchecked(n: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// # Panics
    /// If `n == 0`.
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be at least 1");
        Self {
            n,
            data: alloc::vec![ZERO; n * n],
        }
    }

    /// # Panics
    /// If `n == 0`.
    pub fn identity(n: usize) -> Self {
        Self::scalar(n, ONE)
    }

    /// `c·I`.
    ///
    /// # Panics
    /// If `n == 0` or `c` is not finite.
    pub fn scalar(n: usize, c: Complex) -> Self {
        assert!(c.is_finite(), "non-finite scalar");
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn diagonal(values: &[Complex]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Self::from_fn(n, |i, j| if i == j { values[i] } else { ZERO })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.n + col]
    }

    #[inline]
    pub(crate) fn data_mut(&mut self) -> &mut [Complex] {
        &mut self.data
    }

    pub fn diag(&self) -> Vec<Complex> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn_unchecked(self.n, |i, j| self.get(j, i).conj())
    }

    /// Entrywise conjugate `Ā`.
    pub fn conjugate(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn_unchecked(self.n, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Complex {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `‖A‖² = Σ|a_ij|²`.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.frobenius_norm_sq())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = alloc::vec![ZERO; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &aik) in row.iter().enumerate() {
                if aik == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(brow) {
                    *d += aik * b;
                }
            }
        }
        Ok(Self { n, data: out })
    }

    /// Entrywise `alpha·a + beta·b`.
    pub fn linear_combine(alpha: Complex, a: &Self, beta: Complex, b: &Self) -> Result<Self> {
        a.check_dim(b)?;
        Ok(Self {
            n: a.n,
            data: a
                .data
                .iter()
                .zip(&b.data)
                .map(|(&x, &y)| alpha * x + beta * y)
                .collect(),
        })
    }

    /// `λI − A`.
    pub fn shifted(&self, lambda: Complex) -> Self {
        let mut out = Self {
            n: self.n,
            data: self.data.iter().map(|&z| -z).collect(),
        };
        for i in 0..self.n {
            out.data[i * self.n + i] += lambda;
        }
        out
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| c * z).collect(),
        }
    }

    /// `Re_A = (A + A*)/2`.
    pub fn hermitian_real_part(&self) -> Self {
        let n = self.n;
        Self::from_fn_unchecked(n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    /// `Im_A = (A − A*)/(2i)`.
    pub fn hermitian_imag_part(&self) -> Self {
        let n = self.n;
        // 1/(2i) = −i/2
        let factor = Complex::new(0.0, -0.5);
        Self::from_fn_unchecked(n, |i, j| (self.get(i, j) - self.get(j, i).conj()) * factor)
    }

    /// Commutator defect `Δ_A = ‖AA* − A*A‖²/2`, from explicit products.
    pub fn commutator_defect(&self) -> f64 {
        let adj = self.adjoint();
        let left = self.multiply(&adj).expect("same dimension");
        let right = adj.multiply(self).expect("same dimension");
        left.data
            .iter()
            .zip(&right.data)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            / 2.0
    }

    /// Largest entrywise deviation from self-adjointness.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex;

    #[inline]
    fn index(&self, (row, col): (usize, usize)) -> &Complex {
        &self.data[row * self.n + col]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(
            DenseMatrix::from_row_major(0, vec![]),
            Err(Error::EmptyMatrix)
        ));
        assert!(matches!(
            DenseMatrix::from_row_major(2, vec![ZERO; 3]),
            Err(Error::NotSquare { n: 2, len: 3 })
        ));
        let mut data = vec![ZERO; 4];
        data[3] = c(f64::NAN, 0.0);
        assert!(matches!(
            DenseMatrix::from_row_major(2, data),
            Err(Error::NonFinite { row: 1, col: 1 })
        ));
        let mut data = vec![ZERO; 4];
        data[1] = c(0.0, f64::INFINITY);
        assert!(matches!(
            DenseMatrix::from_row_major(2, data),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(DenseMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0]]).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let a = DenseMatrix::from_rows(&[&[c(0.0, 1.0)]]).unwrap();
        assert_eq!(a.adjoint().get(0, 0), c(0.0, -1.0));

        let a = real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(a.adjoint(), real(&[&[1.0, 3.0], &[2.0, 4.0]]));

        let a = DenseMatrix::from_rows(&[&[ZERO, c(1.0, 1.0)], &[c(2.0, 0.0), ZERO]]).unwrap();
        let expected =
            DenseMatrix::from_rows(&[&[ZERO, c(2.0, 0.0)], &[c(1.0, -1.0), ZERO]]).unwrap();
        assert_eq!(a.adjoint(), expected);
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn conjugate_examples() {
        let a = DenseMatrix::from_rows(&[&[c(0.0, 1.0)]]).unwrap();
        assert_eq!(a.conjugate().get(0, 0), c(0.0, -1.0));
        let r = real(&[&[1.0, -2.0], &[3.5, 4.0]]);
        assert_eq!(r.conjugate(), r);
        let d = DenseMatrix::diagonal(&[c(1.0, 1.0), c(1.0, -1.0)]).unwrap();
        assert_eq!(
            d.conjugate(),
            DenseMatrix::diagonal(&[c(1.0, -1.0), c(1.0, 1.0)]).unwrap()
        );
    }

    #[test]
    fn trace_examples() {
        assert_eq!(DenseMatrix::identity(3).trace(), c(3.0, 0.0));
        assert_eq!(real(&[&[0.0, 1.0], &[0.0, 0.0]]).trace(), ZERO);
        let a = DenseMatrix::from_rows(&[&[c(1.0, 1.0), c(5.0, 0.0)], &[c(7.0, 0.0), c(2.0, -3.0)]])
            .unwrap();
        assert_eq!(a.trace(), c(3.0, -2.0));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(DenseMatrix::identity(2).frobenius_norm_sq(), 2.0);
        assert_eq!(real(&[&[0.0, 1.0], &[0.0, 0.0]]).frobenius_norm_sq(), 1.0);
        assert_eq!(real(&[&[1.0, 2.0], &[3.0, 4.0]]).frobenius_norm_sq(), 30.0);
    }

    #[test]
    fn multiply_examples() {
        let a = DenseMatrix::from_rows(&[&[c(1.0, 2.0), c(-1.0, 0.5)], &[c(0.0, 3.0), c(4.0, 0.0)]])
            .unwrap();
        assert_eq!(a.multiply(&DenseMatrix::identity(2)).unwrap(), a);
        let p = real(&[&[0.0, 1.0], &[0.0, 0.0]])
            .multiply(&real(&[&[0.0, 0.0], &[1.0, 0.0]]))
            .unwrap();
        assert_eq!(p, real(&[&[1.0, 0.0], &[0.0, 0.0]]));
        let p = real(&[&[1.0, 1.0], &[0.0, 1.0]])
            .multiply(&real(&[&[1.0, -1.0], &[0.0, 1.0]]))
            .unwrap();
        assert_eq!(p, DenseMatrix::identity(2));
        assert!(matches!(
            a.multiply(&DenseMatrix::identity(3)),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn linear_combine_examples() {
        let a = real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = real(&[&[9.0, 8.0], &[7.0, 6.0]]);
        assert_eq!(DenseMatrix::linear_combine(ONE, &a, ZERO, &b).unwrap(), a);
        assert_eq!(
            DenseMatrix::linear_combine(ONE, &a, -ONE, &a).unwrap(),
            DenseMatrix::zeros(2)
        );
        let d = real(&[&[1.0, 0.0], &[0.0, 3.0]]);
        let shift = DenseMatrix::linear_combine(c(2.0, 0.0), &DenseMatrix::identity(2), -ONE, &d)
            .unwrap();
        assert_eq!(shift, real(&[&[1.0, 0.0], &[0.0, -1.0]]));
        assert_eq!(d.shifted(c(2.0, 0.0)), shift);
        assert!(DenseMatrix::linear_combine(ONE, &a, ONE, &DenseMatrix::identity(1)).is_err());
    }

    #[test]
    fn hermitian_parts_examples() {
        let h = DenseMatrix::from_rows(&[&[c(2.0, 0.0), c(1.0, -1.0)], &[c(1.0, 1.0), c(-3.0, 0.0)]])
            .unwrap();
        assert_eq!(h.hermitian_real_part(), h);
        assert_eq!(h.hermitian_imag_part(), DenseMatrix::zeros(2));

        let j = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(j.hermitian_real_part(), real(&[&[0.0, 0.5], &[0.5, 0.0]]));

        let skew = real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert_eq!(skew.hermitian_real_part(), DenseMatrix::zeros(2));
        let expected =
            DenseMatrix::from_rows(&[&[ZERO, c(0.0, -1.0)], &[c(0.0, 1.0), ZERO]]).unwrap();
        assert_eq!(skew.hermitian_imag_part(), expected);

        let s = DenseMatrix::from_rows(&[&[c(0.0, 2.0)]]).unwrap();
        assert_eq!(s.hermitian_imag_part().get(0, 0), c(2.0, 0.0));
    }

    #[test]
    fn commutator_defect_examples() {
        let d = DenseMatrix::diagonal(&[c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 0.0)]).unwrap();
        assert_eq!(d.commutator_defect(), 0.0);
        assert_eq!(real(&[&[0.0, 1.0], &[0.0, 0.0]]).commutator_defect(), 1.0);
        assert_eq!(real(&[&[0.0, 1.0], &[-1.0, 0.0]]).commutator_defect(), 0.0);
    }

    #[test]
    fn index_and_diag() {
        let a = real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(a[(1, 0)], c(3.0, 0.0));
        assert_eq!(a.diag(), vec![c(1.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(a.transpose(), a.adjoint());
        assert_eq!(a.max_abs(), 4.0);
    }
}
