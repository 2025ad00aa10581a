//! Probabilistic single-qubit teleportation over `a|100⟩ + b|010⟩ + c|001⟩`
//! on qubits (1, 2, 3).
//!
//! A Bell measurement `(m, n)` on (0, 1) is followed by a computational
//! measurement `r` of qubit 3. When `r = 0` qubit 2 holds
//! `α a|0⟩ + (−1)^m β b|1⟩` (for `n = 1`) or `α b|1⟩ + (−1)^m β a|0⟩`
//! (for `n = 0`), which `σz^m` and `σz^m σx` respectively turn into
//! `α a|0⟩ + β b|1⟩` and `α b|0⟩ + β a|1⟩`. When `r = 1` qubit 2 is left in
//! `|0⟩` whatever the input, so those branches count as failures and are not
//! corrected.

use alloc::vec;
use alloc::vec::Vec;

use super::engine::{BranchPlan, Plan};
use super::{ChannelSpec, Correction, Protocol, ProtocolKind};
use crate::bases::{bell, BellLabel, WChannelSpec};
use crate::operator::Pauli;
use crate::{Result, StateVector};

pub fn correction_for(label: BellLabel, r: u8) -> Correction {
    if r == 1 {
        return Correction::identity(1);
    }
    let mut word = Vec::new();
    if label.m == 1 {
        word.push(Pauli::Z);
    }
    if label.n == 0 {
        word.push(Pauli::X);
    }
    Correction::new(vec![word])
}

pub fn protocol(w: WChannelSpec) -> Result<Protocol> {
    let mut branches = Vec::with_capacity(8);
    for label in BellLabel::qubit_labels() {
        for r in 0..2u8 {
            let basis = bell(label).tensor(&StateVector::basis(1, r as usize)?)?;
            let tag = vec![label.m as u8, label.n as u8, r];
            branches.push(BranchPlan::new(
                tag,
                basis,
                correction_for(label, r),
                r == 0,
            ));
        }
    }
    let plan = Plan::new(4, vec![0, 1, 3], branches)?;
    Protocol::assemble(ProtocolKind::WChannel, ChannelSpec::W(w), 1, plan)
}
