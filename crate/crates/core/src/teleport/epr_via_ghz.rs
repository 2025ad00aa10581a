//! EPR-type pair `a₀|00⟩ + a₁|11⟩` on qubits (0, 1) teleported over
//! `GHZ(θ) = cos θ|000⟩ + sin θ|111⟩` on qubits (2, 3, 4).
//!
//! A maximal GHZ-basis measurement on (0, 1, 2) leaves the pair on (3, 4).
//! Outcomes with `λ = 1` never occur because qubits 0 and 1 agree. The
//! two-qubit Pauli corrections are found by [`search`](super::search) on the
//! maximal channel and then reused for every `θ`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use super::engine::{BranchPlan, Plan};
use super::search::install_searched;
use super::{ChannelSpec, Correction, Protocol, ProtocolKind};
use crate::bases::{check_angle, ghz_basis, GhzLabel};
use crate::Result;

/// Angle of the GHZ measurement basis.
pub const MEASUREMENT_THETA: f64 = FRAC_PI_4;

fn bare(theta_channel: f64) -> Result<Protocol> {
    let branches: Vec<BranchPlan> = GhzLabel::all()
        .map(|l| {
            BranchPlan::new(
                vec![l.mu(), l.lambda(), l.omega()],
                ghz_basis(MEASUREMENT_THETA, l),
                Correction::identity(2),
                true,
            )
        })
        .collect();
    let plan = Plan::new(5, vec![0, 1, 2], branches)?;
    Protocol::assemble(
        ProtocolKind::EprViaGhz,
        ChannelSpec::Ghz(theta_channel),
        2,
        plan,
    )
}

pub fn protocol(theta_channel: f64) -> Result<Protocol> {
    check_angle("theta_channel", theta_channel)?;
    let mut p = bare(theta_channel)?;
    install_searched(&mut p, &bare(FRAC_PI_4)?)?;
    Ok(p)
}
