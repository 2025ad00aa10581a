//! Density operators: mixed states, reduced states and protocol outputs.

use alloc::vec::Vec;

use crate::operator::{check_targets, LocalOperator};
use crate::state::{apply_matrix, complement, offsets};
use crate::{linalg, Error, Matrix, Result, StateVector, C64, DEGENERATE_PROBABILITY, TOLERANCE};

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    matrix: Matrix,
}

impl DensityOp {
    /// Validates hermiticity, unit trace and positivity, each to 1e-9.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidDensity("matrix must be square and nonempty"));
        }
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        Self { matrix }
    }

    pub fn from_state(s: &StateVector) -> Self {
        Self {
            matrix: linalg::outer(s.amplitudes()),
        }
    }

    /// Projector onto a normalized ket of any dimension.
    pub fn from_ket(ket: &[C64]) -> Result<Self> {
        let norm_sqr = linalg::norm_sqr(ket);
        if ket.is_empty() || (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            matrix: linalg::outer(ket),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: linalg::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if linalg::hermiticity_deviation(&self.matrix) > TOLERANCE {
            return Err(Error::InvalidDensity("not Hermitian"));
        }
        if (self.trace() - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidDensity("trace differs from one"));
        }
        if self.eigenvalues().first().is_some_and(|&l| l < -TOLERANCE) {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Register size when the dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    fn require_qubits(&self) -> Result<usize> {
        self.num_qubits().ok_or(Error::NotPowerOfTwo(self.dim()))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        m.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// `tr(O ρ)`.
    pub fn expectation(&self, observable: &Matrix) -> Result<C64> {
        if observable.shape() != self.matrix.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: observable.nrows(),
            });
        }
        Ok(linalg::trace(&(observable * &self.matrix)))
    }

    pub fn trace_distance(&self, other: &DensityOp) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(linalg::trace_distance(&self.matrix, &other.matrix))
    }

    /// Largest entrywise deviation from another operator.
    pub fn max_abs_diff(&self, other: &DensityOp) -> f64 {
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn tensor(&self, other: &DensityOp) -> DensityOp {
        Self {
            matrix: linalg::kron(&self.matrix, &other.matrix),
        }
    }

    /// Reduced operator on `keep`, ordered as listed.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOp> {
        let n = self.require_qubits()?;
        if keep.is_empty() {
            return Err(Error::EmptyArgument("keep"));
        }
        check_targets(keep, n)?;
        let ko = offsets(n, keep);
        let to = offsets(n, &complement(n, keep));
        let matrix = Matrix::from_fn(ko.len(), ko.len(), |a, b| {
            to.iter()
                .map(|&t| self.matrix[(ko[a] | t, ko[b] | t)])
                .sum()
        });
        Ok(Self { matrix })
    }

    /// `⟨target|ρ|target⟩`, clamped to `[0, 1]`.
    pub fn fidelity_pure(&self, target: &StateVector) -> Result<f64> {
        if target.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: target.dim(),
            });
        }
        let value = linalg::sandwich(target.amplitudes(), &self.matrix, target.amplitudes()).re;
        Ok(value.clamp(0.0, 1.0))
    }

    /// `K ρ K†` for a local operator `K` (unitary or a single Kraus factor).
    pub fn conjugate_by(&self, op: &LocalOperator) -> Result<DensityOp> {
        let n = self.require_qubits()?;
        op.check_targets(n)?;
        Ok(Self {
            matrix: conjugate_matrix(&self.matrix, n, op.matrix(), op.targets()),
        })
    }

    /// Projective outcome `basis_state` on `targets`; the residual operator
    /// lives on the untouched qubits in ascending order.
    pub fn project(
        &self,
        basis_state: &StateVector,
        targets: &[usize],
    ) -> Result<DensityProjection> {
        let n = self.require_qubits()?;
        if basis_state.num_qubits() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: targets.len(),
                found: basis_state.num_qubits(),
            });
        }
        check_targets(targets, n)?;
        let to = offsets(n, targets);
        let ro = offsets(n, &complement(n, targets));
        let b = basis_state.amplitudes();
        let raw = Matrix::from_fn(ro.len(), ro.len(), |r, s| {
            let mut acc = C64::new(0.0, 0.0);
            for (t, &ot) in to.iter().enumerate() {
                for (u, &ou) in to.iter().enumerate() {
                    acc += b[t].conj() * self.matrix[(ro[r] | ot, ro[s] | ou)] * b[u];
                }
            }
            acc
        });
        let probability = linalg::trace(&raw).re.max(0.0);
        let residual = (probability >= DEGENERATE_PROBABILITY).then(|| Self {
            matrix: raw.scale(1.0 / probability),
        });
        Ok(DensityProjection {
            probability,
            residual,
        })
    }
}

/// Outcome of [`DensityOp::project`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProjection {
    pub probability: f64,
    /// `None` when the outcome is impossible.
    pub residual: Option<DensityOp>,
}

/// `K M K†` for Hermitian `M` on an `n`-qubit register.
pub(crate) fn conjugate_matrix(
    m: &Matrix,
    num_qubits: usize,
    k: &Matrix,
    targets: &[usize],
) -> Matrix {
    let dim = m.nrows();
    let mut left = m.clone();
    for col in left.as_mut_slice().chunks_mut(dim) {
        apply_matrix(col, num_qubits, k, targets);
    }
    // (K M)† = M K† because M is Hermitian.
    let mut out = left.adjoint();
    for col in out.as_mut_slice().chunks_mut(dim) {
        apply_matrix(col, num_qubits, k, targets);
    }
    out
}
