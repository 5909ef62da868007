#![allow(dead_code)]

use eigenbound_core::{Complex, DenseMatrix};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn complex_entry(range: f64) -> impl Strategy<Value = Complex> {
    (-range..range, -range..range).prop_map(|(re, im)| c(re, im))
}

/// Square complex matrix with dimension in `dims` and entries in the box `[-range, range]²`.
pub fn matrix(dims: std::ops::RangeInclusive<usize>, range: f64) -> impl Strategy<Value = DenseMatrix> {
    dims.prop_flat_map(move |n| {
        prop::collection::vec(complex_entry(range), n * n)
            .prop_map(move |data| DenseMatrix::from_row_major(n, data).unwrap())
    })
}

/// Product of Householder reflectors `I − 2vv*/‖v‖²`, one per direction.
pub fn householder_product(n: usize, dirs: &[Vec<Complex>]) -> DenseMatrix {
    let mut u = DenseMatrix::identity(n);
    for v in dirs {
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vv < 1e-12 {
            continue;
        }
        let h = DenseMatrix::from_fn(n, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            c(delta, 0.0) - v[i] * v[j].conj() * (2.0 / vv)
        })
        .unwrap();
        u = u.multiply(&h).unwrap();
    }
    u
}

/// Random unitary of size `n` from three reflectors.
pub fn unitary(n: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(prop::collection::vec(complex_entry(1.0), n), 3)
        .prop_map(move |dirs| householder_product(n, &dirs))
}

/// Matrix paired with a unitary of the same size.
pub fn matrix_and_unitary(
    dims: std::ops::RangeInclusive<usize>,
    range: f64,
) -> impl Strategy<Value = (DenseMatrix, DenseMatrix)> {
    dims.prop_flat_map(move |n| (matrix(n..=n, range), unitary(n)))
}

/// Greedy multiset distance: the largest gap after pairing each expected
/// value with its nearest unused computed value.
pub fn multiset_distance(computed: &[Complex], expected: &[Complex]) -> f64 {
    assert_eq!(computed.len(), expected.len());
    let mut used = vec![false; computed.len()];
    let mut worst = 0.0f64;
    for e in expected {
        let (k, d) = computed
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, z)| (k, (z - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}
