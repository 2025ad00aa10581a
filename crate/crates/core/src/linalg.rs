//! Small dense helpers on top of `nalgebra` used by the state, density and
//! classification code.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Matrix, C64};

pub fn identity(dim: usize) -> Matrix {
    Matrix::identity(dim, dim)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// `|ket⟩⟨ket|`.
pub fn outer(ket: &[C64]) -> Matrix {
    let dim = ket.len();
    Matrix::from_fn(dim, dim, |i, j| ket[i] * ket[j].conj())
}

/// `⟨bra|m|ket⟩` for plain amplitude slices.
pub fn sandwich(bra: &[C64], m: &Matrix, ket: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..bra.len() {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..ket.len() {
            row += m[(i, j)] * ket[j];
        }
        acc += bra[i].conj() * row;
    }
    acc
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise deviation of `U†U` from the identity.
pub fn unitarity_deviation(u: &Matrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &identity(u.nrows()))
}

/// Largest entrywise deviation of `m` from `m†`.
pub fn hermiticity_deviation(m: &Matrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn trace(m: &Matrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues are sorted in
/// ascending order and the eigenvector columns follow the same order.
pub fn hermitian_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let n = m.nrows();
    // Symmetrize first so round-off in the input cannot leak into the solver.
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Square root of a positive semidefinite matrix. Negative round-off
/// eigenvalues are clamped to zero.
pub fn psd_sqrt(m: &Matrix) -> Matrix {
    let (values, vectors) = hermitian_eigen(m);
    let n = m.nrows();
    let mut out = Matrix::zeros(n, n);
    for (k, &lambda) in values.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        let col = vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * s;
            }
        }
    }
    out
}

/// Trace distance `½‖a − b‖₁` between Hermitian matrices.
pub fn trace_distance(a: &Matrix, b: &Matrix) -> f64 {
    let diff = a - b;
    0.5 * hermitian_eigenvalues(&diff)
        .iter()
        .map(|v| v.abs())
        .sum::<f64>()
}

/// Gram matrix `G_ij = ⟨v_i|v_j⟩`.
pub fn gram(vectors: &[&[C64]]) -> Matrix {
    let n = vectors.len();
    Matrix::from_fn(n, n, |i, j| inner(vectors[i], vectors[j]))
}

/// `⟨a|b⟩`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn ket_to_column(ket: &[C64]) -> nalgebra::DVector<C64> {
    nalgebra::DVector::from_column_slice(ket)
}
