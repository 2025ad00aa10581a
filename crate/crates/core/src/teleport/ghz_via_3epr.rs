//! GHZ-type triple `a₀|000⟩ + a₁|111⟩` on qubits (0, 1, 2) teleported over
//! three EPR-type pairs on (3, 4), (5, 6), (7, 8).
//!
//! Bell measurements on (0, 3), (1, 5) and (2, 7) give 64 outcomes labelled
//! `(m₁, n₁, m₂, n₂, m₃, n₃)`; the triple reappears on (4, 6, 8). Per-qubit
//! Pauli corrections are found by [`search`](super::search) with all three
//! pairs maximal.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use super::engine::{BranchPlan, Plan};
use super::search::install_searched;
use super::{ChannelSpec, Correction, Protocol, ProtocolKind};
use crate::bases::{bell, check_angle, BellLabel};
use crate::Result;

fn bare(thetas: [f64; 3]) -> Result<Protocol> {
    let labels = BellLabel::qubit_labels();
    let mut branches = Vec::with_capacity(64);
    for l1 in labels {
        for l2 in labels {
            for l3 in labels {
                let basis = bell(l1).tensor(&bell(l2))?.tensor(&bell(l3))?;
                let label = [l1, l2, l3]
                    .iter()
                    .flat_map(|l| [l.m as u8, l.n as u8])
                    .collect();
                branches.push(BranchPlan::new(label, basis, Correction::identity(3), true));
            }
        }
    }
    let plan = Plan::new(9, vec![0, 3, 1, 5, 2, 7], branches)?;
    Protocol::assemble(
        ProtocolKind::GhzVia3Epr,
        ChannelSpec::ThreeEpr(thetas),
        3,
        plan,
    )
}

pub fn protocol(thetas: [f64; 3]) -> Result<Protocol> {
    for t in thetas {
        check_angle("theta", t)?;
    }
    let mut p = bare(thetas)?;
    install_searched(&mut p, &bare([FRAC_PI_4; 3])?)?;
    Ok(p)
}
