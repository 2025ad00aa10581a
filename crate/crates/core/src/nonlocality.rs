//! Pauli-string expectations and the three-qubit GHZ paradox check.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::operator::Pauli;
use crate::{Error, Result, StateVector, C64, TOLERANCE};

/// Tensor product of single-qubit Paulis, one letter per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `P|x⟩ = phase(x) |x ⊕ flip⟩` for computational basis index `x`.
    fn flip_mask(&self) -> usize {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .fold(0, |acc, (q, _)| acc | 1 << (n - 1 - q))
    }

    fn phase(&self, index: usize) -> C64 {
        let n = self.0.len();
        let mut phase = C64::new(1.0, 0.0);
        for (q, p) in self.0.iter().enumerate() {
            let bit = (index >> (n - 1 - q)) & 1;
            match (p, bit) {
                (Pauli::Z, 1) => phase = -phase,
                // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                (Pauli::Y, 0) => phase *= C64::new(0.0, 1.0),
                (Pauli::Y, _) => phase *= C64::new(0.0, -1.0),
                _ => {}
            }
        }
        phase
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(Pauli::from_symbol)
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::EmptyArgument("pauli string"));
        }
        Ok(Self(letters))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{p}"))
    }
}

/// `⟨ψ|P|ψ⟩`; real because Pauli strings are Hermitian.
pub fn pauli_expectation(state: &StateVector, string: &PauliString) -> Result<f64> {
    if string.len() != state.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.num_qubits(),
            found: string.len(),
        });
    }
    let amps = state.amplitudes();
    let mask = string.flip_mask();
    let value: C64 = amps
        .iter()
        .enumerate()
        .map(|(x, &a)| amps[x ^ mask].conj() * string.phase(x) * a)
        .sum();
    Ok(value.re)
}

/// The four correlators entering the GHZ argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParadoxReport {
    pub xyy: f64,
    pub yxy: f64,
    pub yyx: f64,
    pub xxx: f64,
    /// Value of `XXX` forced by a local hidden-variable assignment:
    /// `x₁x₂x₃ = (x₁y₂y₃)(y₁x₂y₃)(y₁y₂x₃)` since every `yᵢ² = 1`.
    pub lhv_product: f64,
    /// All four correlators are perfect (|E| = 1 to tolerance) and the
    /// measured `XXX` has the opposite sign to the hidden-variable prediction.
    pub contradiction: bool,
}

/// Evaluates the GHZ correlators on a three-qubit state.
pub fn ghz_paradox(state: &StateVector) -> Result<ParadoxReport> {
    if state.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: state.num_qubits(),
        });
    }
    let e = |s: &str| pauli_expectation(state, &s.parse::<PauliString>()?);
    let (xyy, yxy, yyx, xxx) = (e("XYY")?, e("YXY")?, e("YYX")?, e("XXX")?);
    let lhv_product = xyy * yxy * yyx;
    let perfect = [xyy, yxy, yyx, xxx]
        .iter()
        .all(|v| (v.abs() - 1.0).abs() <= TOLERANCE);
    let contradiction = perfect && lhv_product.signum() != xxx.signum();
    Ok(ParadoxReport {
        xyy,
        yxy,
        yyx,
        xxx,
        lhv_product,
        contradiction,
    })
}
