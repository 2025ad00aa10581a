//! Three-qubit pure-state classification.
//!
//! Separability across each single-qubit cut is read off the marginal
//! purities. States entangled across every cut are split by the three-tangle
//! (nonzero for the GHZ class, zero for the W class). Pair entanglement is
//! reported as the spin-flip concurrence.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{linalg, DensityOp, Error, Matrix, Result, StateVector, C64, TOLERANCE};

/// Decision threshold for purities and the three-tangle.
pub const EPSILON: f64 = TOLERANCE;

/// Width of the guard band, in units of [`EPSILON`], inside which a decision
/// is flagged as borderline.
const GUARD: f64 = 10.0;

/// A single-qubit versus pair cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partition {
    ABc,
    BAc,
    CAb,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::ABc, Partition::BAc, Partition::CAb];

    /// Index of the lone qubit.
    pub fn single(self) -> usize {
        match self {
            Partition::ABc => 0,
            Partition::BAc => 1,
            Partition::CAb => 2,
        }
    }

    /// The two qubits on the other side, ascending.
    pub fn pair(self) -> [usize; 2] {
        match self {
            Partition::ABc => [1, 2],
            Partition::BAc => [0, 2],
            Partition::CAb => [0, 1],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::ABc => "A|BC",
            Partition::BAc => "B|AC",
            Partition::CAb => "C|AB",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntClass {
    FullySeparable,
    Biseparable(Partition),
    GenuineW,
    GenuineGHZ,
}

impl fmt::Display for EntClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntClass::FullySeparable => f.write_str("FullySeparable"),
            EntClass::Biseparable(p) => write!(f, "Biseparable({p})"),
            EntClass::GenuineW => f.write_str("GenuineW"),
            EntClass::GenuineGHZ => f.write_str("GenuineGHZ"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDiagnostics {
    /// `tr ρ_k²` for qubits A, B, C.
    pub single_qubit_purities: [f64; 3],
    /// Concurrences of the AB, AC and BC marginals.
    pub pair_concurrences: [f64; 3],
    pub three_tangle: f64,
}

/// Tag, diagnostics and whether any decision fell inside the guard band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: EntClass,
    pub diagnostics: ReducedDiagnostics,
    pub borderline: bool,
}

fn require_three(s: &StateVector) -> Result<()> {
    if s.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: s.num_qubits(),
        });
    }
    Ok(())
}

/// Two-qubit marginal of a three-qubit ket, as the two unnormalized
/// columns `⟨r|_traced ψ⟩` over the kept pair.
fn pair_columns(amps: &[C64], pair: [usize; 2]) -> [[C64; 4]; 2] {
    let traced = 3 - pair[0] - pair[1];
    let bit = |q: usize| 1usize << (2 - q);
    let mut cols = [[C64::new(0.0, 0.0); 4]; 2];
    for (r, col) in cols.iter_mut().enumerate() {
        for (ab, slot) in col.iter_mut().enumerate() {
            let mut idx = if r == 1 { bit(traced) } else { 0 };
            if ab & 2 != 0 {
                idx |= bit(pair[0]);
            }
            if ab & 1 != 0 {
                idx |= bit(pair[1]);
            }
            *slot = amps[idx];
        }
    }
    cols
}

/// `v^T (σy⊗σy) w`. On the two-qubit computational basis `σy⊗σy` is the
/// anti-diagonal with signs `(−1, +1, +1, −1)`.
fn spin_flip_form(v: &[C64; 4], w: &[C64; 4]) -> C64 {
    -(v[0] * w[3]) + v[1] * w[2] + v[2] * w[1] - v[3] * w[0]
}

/// Concurrence of `ρ = Σ_i |v_i⟩⟨v_i|` from the singular values of
/// `τ_ij = v_iᵀ (σy⊗σy) v_j`, which equal the square roots of the spectrum
/// of `√ρ ρ̃ √ρ` but avoid square roots of round-off eigenvalues.
fn concurrence_from_columns(cols: &[[C64; 4]]) -> f64 {
    let k = cols.len();
    let tau = Matrix::from_fn(k, k, |i, j| spin_flip_form(&cols[i], &cols[j]));
    let mut s: alloc::vec::Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let rest: f64 = s.iter().skip(1).sum();
    (s.first().copied().unwrap_or(0.0) - rest).max(0.0)
}

/// Spin-flip concurrence of a two-qubit density operator.
pub fn concurrence(rho: &DensityOp) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let (values, vectors) = linalg::hermitian_eigen(rho.matrix());
    let mut cols = [[C64::new(0.0, 0.0); 4]; 4];
    for (k, col) in cols.iter_mut().enumerate() {
        let w = values[k].max(0.0).sqrt();
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = vectors[(i, k)] * w;
        }
    }
    Ok(concurrence_from_columns(&cols))
}

/// `4 |d₁ − 2d₂ + 4d₃|`, the modulus of Cayley's hyperdeterminant.
pub fn three_tangle(s: &StateVector) -> Result<f64> {
    require_three(s)?;
    let a = s.amplitudes();
    let d1 = a[0] * a[0] * a[7] * a[7]
        + a[1] * a[1] * a[6] * a[6]
        + a[2] * a[2] * a[5] * a[5]
        + a[4] * a[4] * a[3] * a[3];
    let d2 = a[0] * a[7] * a[3] * a[4]
        + a[0] * a[7] * a[5] * a[2]
        + a[0] * a[7] * a[6] * a[1]
        + a[3] * a[4] * a[5] * a[2]
        + a[3] * a[4] * a[6] * a[1]
        + a[5] * a[2] * a[6] * a[1];
    let d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
    Ok((4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm()).min(1.0))
}

fn purity_of(s: &StateVector, qubit: usize) -> f64 {
    let amps = s.amplitudes();
    let bit = 1usize << (2 - qubit);
    let (mut p0, mut p1, mut coh) = (0.0, 0.0, C64::new(0.0, 0.0));
    for idx in (0..8).filter(|i| i & bit == 0) {
        p0 += amps[idx].norm_sqr();
        p1 += amps[idx | bit].norm_sqr();
        coh += amps[idx] * amps[idx | bit].conj();
    }
    (p0 * p0 + p1 * p1 + 2.0 * coh.norm_sqr()).clamp(0.5, 1.0)
}

pub fn diagnostics(s: &StateVector) -> Result<ReducedDiagnostics> {
    require_three(s)?;
    let amps = s.amplitudes();
    let pair = |p: [usize; 2]| concurrence_from_columns(&pair_columns(amps, p)).min(1.0);
    Ok(ReducedDiagnostics {
        single_qubit_purities: [purity_of(s, 0), purity_of(s, 1), purity_of(s, 2)],
        pair_concurrences: [pair([0, 1]), pair([0, 2]), pair([1, 2])],
        three_tangle: three_tangle(s)?,
    })
}

pub fn classify(s: &StateVector) -> Result<EntClass> {
    Ok(classify_detailed(s)?.class)
}

/// Purity `> 1 − ε` marks a cut as separable. A purity in
/// `[1 − 10ε, 1 − ε]` or a tangle in `(ε, 10ε]` sets `borderline`; such
/// states keep the entangled tag.
pub fn classify_detailed(s: &StateVector) -> Result<Classification> {
    let d = diagnostics(s)?;
    let pure: [bool; 3] = d.single_qubit_purities.map(|p| p > 1.0 - EPSILON);
    let near_pure = d
        .single_qubit_purities
        .iter()
        .any(|&p| (1.0 - GUARD * EPSILON..=1.0 - EPSILON).contains(&p));
    let count = pure.iter().filter(|&&b| b).count();
    let (class, borderline) = match count {
        // Two pure marginals of a pure state force the third.
        2 | 3 => (EntClass::FullySeparable, near_pure),
        1 => {
            let k = pure.iter().position(|&b| b).expect("one pure marginal");
            (EntClass::Biseparable(Partition::ALL[k]), near_pure)
        }
        _ => {
            let tangle_edge = d.three_tangle > EPSILON && d.three_tangle <= GUARD * EPSILON;
            let class = if d.three_tangle > EPSILON {
                EntClass::GenuineGHZ
            } else {
                EntClass::GenuineW
            };
            (class, near_pure || tangle_edge)
        }
    };
    Ok(Classification {
        class,
        diagnostics: d,
        borderline,
    })
}

/// `tr_C` of a three-qubit ket as a 4×4 operator on (A, B).
pub fn reduced_pair(s: &StateVector, pair: [usize; 2]) -> Result<DensityOp> {
    require_three(s)?;
    s.density().partial_trace(&pair)
}
