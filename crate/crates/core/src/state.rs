//! Pure states on a qubit register and the dense kernels behind them.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::operator::{check_targets, LocalOperator};
use crate::{
    linalg, DensityOp, Error, Matrix, Result, C64, DEGENERATE_PROBABILITY, MAX_QUBITS, TOLERANCE,
};

/// Bit offsets of every sub-index over `qubits` inside an `n`-qubit index.
/// `qubits[0]` is the most significant bit of the sub-index.
pub(crate) fn offsets(num_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|s| {
            qubits.iter().enumerate().fold(0, |acc, (j, &q)| {
                if (s >> (k - 1 - j)) & 1 == 1 {
                    acc | 1 << (num_qubits - 1 - q)
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Register qubits not listed in `qubits`, ascending.
pub(crate) fn complement(num_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    (0..num_qubits).filter(|q| !qubits.contains(q)).collect()
}

/// In-place `(1 ⊗ … ⊗ M ⊗ … ⊗ 1)|amps⟩`.
pub(crate) fn apply_matrix(amps: &mut [C64], num_qubits: usize, m: &Matrix, targets: &[usize]) {
    let sub = offsets(num_qubits, targets);
    let rest = offsets(num_qubits, &complement(num_qubits, targets));
    let mut buf = vec![C64::new(0.0, 0.0); sub.len()];
    for &base in &rest {
        for (slot, &off) in buf.iter_mut().zip(&sub) {
            *slot = amps[base | off];
        }
        for (r, &off) in sub.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (c, v) in buf.iter().enumerate() {
                acc += m[(r, c)] * v;
            }
            amps[base | off] = acc;
        }
    }
}

/// `⟨basis|_targets |amps⟩`, leaving the remaining qubits in ascending order.
pub(crate) fn contract(
    amps: &[C64],
    num_qubits: usize,
    basis: &[C64],
    targets: &[usize],
) -> Vec<C64> {
    let sub = offsets(num_qubits, targets);
    let rest = offsets(num_qubits, &complement(num_qubits, targets));
    rest.iter()
        .map(|&base| {
            sub.iter()
                .zip(basis)
                .map(|(&off, b)| b.conj() * amps[base | off])
                .sum()
        })
        .collect()
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: n,
            cap: MAX_QUBITS,
        });
    }
    Ok(n)
}

/// Normalized amplitude vector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized to 1e-9.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        let norm_sqr = linalg::norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        Unnormalized::new(amplitudes)?.normalize()
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Product state from a bit string such as `"010"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = bits.chars().try_fold(0usize, |acc, c| match c {
            '0' => Ok(acc << 1),
            '1' => Ok(acc << 1 | 1),
            _ => Err(Error::DimensionMismatch {
                expected: 2,
                found: c as usize,
            }),
        })?;
        Self::basis(bits.len(), index)
    }

    /// The zero-qubit state, the unit of [`StateVector::tensor`].
    pub fn unit() -> Self {
        Self {
            num_qubits: 0,
            amplitudes: vec![C64::new(1.0, 0.0)],
        }
    }

    pub(crate) fn from_parts_unchecked(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(linalg::inner(&self.amplitudes, &other.amplitudes))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// Euclidean distance between amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Kronecker product; qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let requested = self.num_qubits + other.num_qubits;
        if requested > MAX_QUBITS {
            return Err(Error::Capacity {
                requested,
                cap: MAX_QUBITS,
            });
        }
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(Self {
            num_qubits: requested,
            amplitudes,
        })
    }

    /// Applies a unitary local operator.
    pub fn apply(&self, op: &LocalOperator) -> Result<StateVector> {
        if !op.is_unitary() {
            let deviation = linalg::unitarity_deviation(op.matrix());
            return Err(Error::NotUnitary { deviation });
        }
        op.check_targets(self.num_qubits)?;
        let mut amplitudes = self.amplitudes.clone();
        apply_matrix(&mut amplitudes, self.num_qubits, op.matrix(), op.targets());
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes,
        })
    }

    /// Partial inner product with `basis_state` on `targets`, unnormalized.
    /// The residual register keeps the untouched qubits in ascending order.
    pub fn project_unnormalized(
        &self,
        basis_state: &StateVector,
        targets: &[usize],
    ) -> Result<Unnormalized> {
        Unnormalized::from(self.clone()).project(basis_state, targets)
    }

    /// Projective measurement outcome `basis_state` on `targets`.
    pub fn project(&self, basis_state: &StateVector, targets: &[usize]) -> Result<Projection> {
        let raw = self.project_unnormalized(basis_state, targets)?;
        let probability = raw.norm_sqr();
        let residual = if probability < DEGENERATE_PROBABILITY {
            Residual::Zero {
                num_qubits: raw.num_qubits,
            }
        } else {
            Residual::State(raw.normalize()?)
        };
        Ok(Projection {
            probability,
            residual,
        })
    }

    pub fn density(&self) -> DensityOp {
        DensityOp::from_state(self)
    }

    /// Schmidt decomposition across `left | rest`.
    pub fn schmidt(&self, left: &[usize]) -> Result<SchmidtData> {
        schmidt_decompose(self, left)
    }
}

impl From<StateVector> for Unnormalized {
    fn from(s: StateVector) -> Self {
        Unnormalized {
            num_qubits: s.num_qubits,
            amplitudes: s.amplitudes,
        }
    }
}

/// Raw amplitudes with no norm constraint, e.g. a projection before
/// renormalization. Carries the branch weight as its squared norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Unnormalized {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl Unnormalized {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amplitudes.len())?;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn normalize(&self) -> Result<StateVector> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a / norm).collect(),
        })
    }

    /// Applies any local operator, unitary or not.
    pub fn apply(&self, op: &LocalOperator) -> Result<Self> {
        op.check_targets(self.num_qubits)?;
        let mut amplitudes = self.amplitudes.clone();
        apply_matrix(&mut amplitudes, self.num_qubits, op.matrix(), op.targets());
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes,
        })
    }

    pub(crate) fn apply_in_place(&mut self, m: &Matrix, targets: &[usize]) {
        apply_matrix(&mut self.amplitudes, self.num_qubits, m, targets);
    }

    pub fn project(&self, basis_state: &StateVector, targets: &[usize]) -> Result<Self> {
        if basis_state.num_qubits != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: targets.len(),
                found: basis_state.num_qubits,
            });
        }
        check_targets(targets, self.num_qubits)?;
        let amplitudes = contract(
            &self.amplitudes,
            self.num_qubits,
            &basis_state.amplitudes,
            targets,
        );
        Ok(Self {
            num_qubits: self.num_qubits - targets.len(),
            amplitudes,
        })
    }

    /// `⟨state|self⟩`.
    pub fn overlap(&self, state: &StateVector) -> Result<C64> {
        if state.dim() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: state.dim(),
            });
        }
        Ok(linalg::inner(&state.amplitudes, &self.amplitudes))
    }

    /// `|self⟩⟨self|` without normalization.
    pub fn outer(&self) -> Matrix {
        linalg::outer(&self.amplitudes)
    }
}

/// Outcome of [`StateVector::project`].
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub probability: f64,
    pub residual: Residual,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Residual {
    State(StateVector),
    /// The outcome has (numerically) zero probability.
    Zero {
        num_qubits: usize,
    },
}

impl Residual {
    pub fn state(&self) -> Option<&StateVector> {
        match self {
            Residual::State(s) => Some(s),
            Residual::Zero { .. } => None,
        }
    }
}

/// Single-qubit input `c0|0⟩ + c1|1⟩` handed to a teleportation protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputQubit {
    c0: C64,
    c1: C64,
}

impl InputQubit {
    pub fn new(c0: C64, c1: C64) -> Result<Self> {
        let norm_sqr = c0.norm_sqr() + c1.norm_sqr();
        if (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { c0, c1 })
    }

    /// Rescales any nonzero pair.
    pub fn normalized(c0: C64, c1: C64) -> Result<Self> {
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            c0: c0 / norm,
            c1: c1 / norm,
        })
    }

    /// `√x|0⟩ + √(1−x) e^{iφ}|1⟩`; uniform `x` and `φ` give the unitarily
    /// invariant distribution over pure qubit states.
    pub fn from_population_phase(population: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&population) {
            return Err(Error::OutOfRange {
                name: "population",
                value: population,
            });
        }
        Ok(Self {
            c0: C64::new(population.sqrt(), 0.0),
            c1: C64::from_polar((1.0 - population).sqrt(), phase),
        })
    }

    pub fn zero() -> Self {
        Self {
            c0: C64::new(1.0, 0.0),
            c1: C64::new(0.0, 0.0),
        }
    }

    pub fn c0(&self) -> C64 {
        self.c0
    }

    pub fn c1(&self) -> C64 {
        self.c1
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.c0, self.c1]
    }

    pub fn state(&self) -> StateVector {
        StateVector {
            num_qubits: 1,
            amplitudes: vec![self.c0, self.c1],
        }
    }

    /// `c0|0…0⟩ + c1|1…1⟩` on `num_qubits` qubits.
    pub fn spread(&self, num_qubits: usize) -> Result<StateVector> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[0] = self.c0;
        amplitudes[dim - 1] = self.c1;
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }
}

/// Schmidt coefficients (squared singular values, descending) and the two
/// orthonormal families across a bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtData {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<C64>>,
    pub right_basis: Vec<Vec<C64>>,
    left_qubits: Vec<usize>,
    right_qubits: Vec<usize>,
    num_qubits: usize,
}

impl SchmidtData {
    pub fn left_qubits(&self) -> &[usize] {
        &self.left_qubits
    }

    pub fn right_qubits(&self) -> &[usize] {
        &self.right_qubits
    }

    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&l| l > tol).count()
    }

    /// `Σ √λ_j |left_j⟩ ⊗ |right_j⟩` mapped back to register order.
    pub fn reconstruct(&self) -> Vec<C64> {
        let lo = offsets(self.num_qubits, &self.left_qubits);
        let ro = offsets(self.num_qubits, &self.right_qubits);
        let mut out = vec![C64::new(0.0, 0.0); 1 << self.num_qubits];
        for (j, &lambda) in self.coefficients.iter().enumerate() {
            let s = lambda.sqrt();
            for (a, &la) in lo.iter().enumerate() {
                for (b, &rb) in ro.iter().enumerate() {
                    out[la | rb] += self.left_basis[j][a] * self.right_basis[j][b] * s;
                }
            }
        }
        out
    }
}

/// Schmidt decomposition of `s` across `left` versus the remaining qubits.
pub fn schmidt_decompose(s: &StateVector, left: &[usize]) -> Result<SchmidtData> {
    check_targets(left, s.num_qubits)?;
    let right = complement(s.num_qubits, left);
    let lo = offsets(s.num_qubits, left);
    let ro = offsets(s.num_qubits, &right);
    let m = Matrix::from_fn(lo.len(), ro.len(), |a, b| s.amplitudes[lo[a] | ro[b]]);
    let svd = m.svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let coefficients = order
        .iter()
        .map(|&j| svd.singular_values[j].powi(2))
        .collect();
    let left_basis = order
        .iter()
        .map(|&j| u.column(j).iter().copied().collect())
        .collect();
    let right_basis = order
        .iter()
        .map(|&j| v_t.row(j).iter().copied().collect())
        .collect();
    Ok(SchmidtData {
        coefficients,
        left_basis,
        right_basis,
        left_qubits: left.to_vec(),
        right_qubits: right,
        num_qubits: s.num_qubits,
    })
}
