//! Teleportation procedures simulated branch by branch.
//!
//! Every protocol here has the same shape: an input `a₀|0…0⟩ + a₁|1…1⟩`
//! on the first `k` register qubits (a single qubit, an EPR-like pair or a
//! GHZ-like triple) next to a channel state, one joint projective
//! measurement per branch, and a Pauli correction on the untouched qubits.
//! A [`Plan`] lists the branches; [`Protocol`] binds a plan to its channel.
//!
//! Outcome labels are bit tuples and branches are ordered lexicographically.

mod engine;
pub mod epr_via_ghz;
pub mod ghz_epr;
pub mod ghz_meas;
pub mod ghz_via_3epr;
pub mod search;
mod surface;
pub mod w_channel;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bases::{bell2, ghz_basis, GhzLabel, WChannelSpec};
use crate::operator::Pauli;
use crate::{linalg, DensityOp, Error, InputQubit, Matrix, Result, StateVector, Unnormalized};

pub use engine::{BranchPlan, Plan};
pub use surface::{avg_fidelity_surface, input_averaged_fidelity, FidelitySurface};

/// Resource states shared by the parties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    /// `cos θ|00⟩ + sin θ|11⟩`.
    Epr(f64),
    /// `cos θ|000⟩ + sin θ|111⟩`.
    Ghz(f64),
    W(WChannelSpec),
    /// Three EPR-type pairs.
    ThreeEpr([f64; 3]),
    /// A GHZ-type triple followed by an EPR-type pair.
    GhzPlusEpr {
        ghz: f64,
        epr: f64,
    },
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        let check = |t: f64| crate::bases::check_angle("theta", t);
        match *self {
            ChannelSpec::Epr(t) | ChannelSpec::Ghz(t) => check(t),
            ChannelSpec::W(_) => Ok(()),
            ChannelSpec::ThreeEpr(ts) => ts.iter().try_for_each(|&t| check(t)),
            ChannelSpec::GhzPlusEpr { ghz, epr } => check(ghz).and(check(epr)),
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            ChannelSpec::Epr(_) => 2,
            ChannelSpec::Ghz(_) | ChannelSpec::W(_) => 3,
            ChannelSpec::ThreeEpr(_) => 6,
            ChannelSpec::GhzPlusEpr { .. } => 5,
        }
    }

    pub fn state(&self) -> Result<StateVector> {
        self.validate()?;
        let epr = |t: f64| bell2(t, crate::bases::BellLabel::new(0, 0));
        let ghz = |t: f64| ghz_basis(t, GhzLabel::new(0, 0, 0).expect("valid label"));
        match *self {
            ChannelSpec::Epr(t) => epr(t),
            ChannelSpec::Ghz(t) => Ok(ghz(t)),
            ChannelSpec::W(w) => Ok(w.state()),
            ChannelSpec::ThreeEpr([a, b, c]) => epr(a)?.tensor(&epr(b)?)?.tensor(&epr(c)?),
            ChannelSpec::GhzPlusEpr { ghz: g, epr: e } => ghz(g).tensor(&epr(e)?),
        }
    }
}

/// Pauli correction, one written operator product per output qubit.
///
/// Each word is read as an operator product: the rightmost letter acts
/// first, so `[Z, X]` is `σz σx`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Correction {
    words: Vec<Vec<Pauli>>,
}

impl Correction {
    pub fn new(words: Vec<Vec<Pauli>>) -> Self {
        Self { words }
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            words: (0..num_qubits).map(|_| Vec::new()).collect(),
        }
    }

    /// One letter per output qubit.
    pub fn from_letters(letters: &[Pauli]) -> Self {
        Self {
            words: letters
                .iter()
                .map(|&p| {
                    if p == Pauli::I {
                        Vec::new()
                    } else {
                        alloc::vec![p]
                    }
                })
                .collect(),
        }
    }

    pub fn words(&self) -> &[Vec<Pauli>] {
        &self.words
    }

    pub fn num_qubits(&self) -> usize {
        self.words.len()
    }

    /// Per-qubit Pauli class, dropping phases.
    pub fn classes(&self) -> Vec<Pauli> {
        self.words.iter().map(|w| Pauli::product_class(w)).collect()
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        self.classes().iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Dense matrix on the output register, qubit 0 most significant.
    pub fn matrix(&self) -> Matrix {
        self.words.iter().fold(linalg::identity(1), |acc, word| {
            let m = word.iter().fold(linalg::identity(2), |m, p| m * p.matrix());
            linalg::kron(&acc, &m)
        })
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, word) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let letters: String = word
                .iter()
                .filter(|&&p| p != Pauli::I)
                .map(|p| p.symbol())
                .collect();
            f.write_str(if letters.is_empty() { "I" } else { &letters })?;
        }
        Ok(())
    }
}

impl FromStr for Correction {
    type Err = Error;

    /// Space-separated words such as `"ZX I"`.
    fn from_str(s: &str) -> Result<Self> {
        let words = s
            .split_whitespace()
            .map(|w| {
                w.chars()
                    .map(Pauli::from_symbol)
                    .filter(|p| *p != Ok(Pauli::I))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if words.is_empty() {
            return Err(Error::EmptyArgument("correction"));
        }
        Ok(Self { words })
    }
}

/// Unnormalized operator delivered on the output qubits.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchState {
    Pure(Unnormalized),
    Mixed(Matrix),
}

impl BranchState {
    pub fn operator(&self) -> Matrix {
        match self {
            BranchState::Pure(v) => v.outer(),
            BranchState::Mixed(m) => m.clone(),
        }
    }

    /// Squared norm or trace: the branch probability.
    pub fn weight(&self) -> f64 {
        match self {
            BranchState::Pure(v) => v.norm_sqr(),
            BranchState::Mixed(m) => linalg::trace(m).re,
        }
    }
}

/// Normalized output of a branch.
#[derive(Debug, Clone, PartialEq)]
pub enum PostState {
    Pure(StateVector),
    Mixed(DensityOp),
    /// Probability below the degeneracy threshold; nothing is renormalized.
    Impossible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchRecord {
    pub label: Vec<u8>,
    pub probability: f64,
    pub correction: Correction,
    /// Whether the branch counts as a completed teleportation.
    pub success: bool,
    pub pre_correction: BranchState,
    pub post_correction: BranchState,
    pub post_state: PostState,
    /// `None` for impossible branches.
    pub fidelity: Option<f64>,
    /// `⟨target|ρ̃|target⟩` of the unnormalized corrected output.
    pub fidelity_unnormalized: f64,
}

impl BranchRecord {
    pub fn label_string(&self) -> String {
        self.label.iter().map(|b| char::from(b'0' + b)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportReport {
    pub branches: Vec<BranchRecord>,
    /// `Σ pᵢ Fᵢ` over possible branches.
    pub avg_fidelity: f64,
    /// `Σ ⟨target|ρ̃ᵢ|target⟩` over all branches.
    pub avg_fidelity_unnormalized: f64,
    /// Total probability of branches flagged as successful.
    pub success_probability: f64,
    /// Mean fidelity conditioned on success.
    pub success_fidelity: Option<f64>,
}

impl TeleportReport {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    pub fn branch(&self, label: &[u8]) -> Option<&BranchRecord> {
        self.branches.iter().find(|b| b.label == label)
    }
}

/// The five procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolKind {
    GhzEpr,
    GhzMeasurement,
    EprViaGhz,
    GhzVia3Epr,
    WChannel,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 5] = [
        ProtocolKind::GhzEpr,
        ProtocolKind::GhzMeasurement,
        ProtocolKind::EprViaGhz,
        ProtocolKind::GhzVia3Epr,
        ProtocolKind::WChannel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::GhzEpr => "ghz-epr",
            ProtocolKind::GhzMeasurement => "ghz-meas",
            ProtocolKind::EprViaGhz => "epr-via-ghz",
            ProtocolKind::GhzVia3Epr => "ghz-via-3epr",
            ProtocolKind::WChannel => "w-channel",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or(Error::UnknownName { kind: "protocol" })
    }
}

/// A protocol instance: channel, input width and branch plan.
#[derive(Debug, Clone)]
pub struct Protocol {
    kind: ProtocolKind,
    channel: ChannelSpec,
    channel_state: StateVector,
    input_span: usize,
    plan: Plan,
}

impl Protocol {
    pub(crate) fn assemble(
        kind: ProtocolKind,
        channel: ChannelSpec,
        input_span: usize,
        plan: Plan,
    ) -> Result<Self> {
        let channel_state = channel.state()?;
        if input_span + channel_state.num_qubits() != plan.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: plan.num_qubits(),
                found: input_span + channel_state.num_qubits(),
            });
        }
        Ok(Self {
            kind,
            channel,
            channel_state,
            input_span,
            plan,
        })
    }

    /// Single-qubit teleportation over a maximal GHZ channel with a Bell
    /// measurement and a relay measurement at angle `relay_theta`.
    pub fn ghz_epr(relay_theta: f64) -> Result<Self> {
        ghz_epr::protocol(relay_theta)
    }

    /// Single-qubit teleportation over `GHZ(theta_channel)` with a
    /// GHZ-basis measurement at angle `theta_meas`.
    pub fn ghz_measurement(theta_channel: f64, theta_meas: f64) -> Result<Self> {
        ghz_meas::protocol(theta_channel, theta_meas)
    }

    /// EPR-type pair teleported over `GHZ(theta_channel)`.
    pub fn epr_via_ghz(theta_channel: f64) -> Result<Self> {
        epr_via_ghz::protocol(theta_channel)
    }

    /// GHZ-type triple teleported over three EPR-type pairs.
    pub fn ghz_via_3epr(thetas: [f64; 3]) -> Result<Self> {
        ghz_via_3epr::protocol(thetas)
    }

    /// Probabilistic single-qubit teleportation over a W-type channel.
    pub fn w_channel(w: WChannelSpec) -> Result<Self> {
        w_channel::protocol(w)
    }

    pub fn kind(&self) -> ProtocolKind {
        self.kind
    }

    pub fn channel(&self) -> ChannelSpec {
        self.channel
    }

    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    pub fn num_qubits(&self) -> usize {
        self.plan.num_qubits()
    }

    /// Number of register qubits carrying the input.
    pub fn input_span(&self) -> usize {
        self.input_span
    }

    /// Register indices of the channel qubits.
    pub fn channel_qubits(&self) -> core::ops::Range<usize> {
        self.input_span..self.plan.num_qubits()
    }

    pub fn output_qubits(&self) -> &[usize] {
        self.plan.output()
    }

    /// The state the output qubits should carry.
    pub fn target(&self, input: &InputQubit) -> Result<StateVector> {
        input.spread(self.input_span)
    }

    /// Input next to the channel.
    pub fn resource(&self, input: &InputQubit) -> Result<StateVector> {
        self.target(input)?.tensor(&self.channel_state)
    }

    pub fn run(&self, input: &InputQubit) -> Result<TeleportReport> {
        self.plan
            .run_pure(&self.resource(input)?, &self.target(input)?)
    }

    /// Runs on `ρ = Σ |ψₐ⟩⟨ψₐ|` given by unnormalized resource components.
    pub fn run_ensemble(
        &self,
        components: &[Unnormalized],
        input: &InputQubit,
    ) -> Result<TeleportReport> {
        self.plan.run_ensemble(components, &self.target(input)?)
    }

    /// `Σ_branches ⟨target|ρ̃|target⟩` for a single input; the fast path
    /// behind input averaging.
    pub fn average_fidelity(&self, input: &InputQubit) -> Result<f64> {
        let resource: Unnormalized = self.resource(input)?.into();
        self.plan
            .fidelity_sum(core::slice::from_ref(&resource), &self.target(input)?)
    }

    pub(crate) fn check_channel_target(&self, qubit: usize) -> Result<()> {
        if self.channel_qubits().contains(&qubit) {
            Ok(())
        } else {
            Err(Error::InvalidTarget {
                protocol: self.kind.name(),
                qubit,
            })
        }
    }
}

/// Instance with maximal channels and measurement angles, the setting in
/// which every deterministic protocol is perfect.
pub fn default_protocol(kind: ProtocolKind) -> Result<Protocol> {
    use core::f64::consts::FRAC_PI_4;
    match kind {
        ProtocolKind::GhzEpr => Protocol::ghz_epr(FRAC_PI_4),
        ProtocolKind::GhzMeasurement => Protocol::ghz_measurement(FRAC_PI_4, FRAC_PI_4),
        ProtocolKind::EprViaGhz => Protocol::epr_via_ghz(FRAC_PI_4),
        ProtocolKind::GhzVia3Epr => Protocol::ghz_via_3epr([FRAC_PI_4; 3]),
        ProtocolKind::WChannel => Protocol::w_channel(WChannelSpec::symmetric()),
    }
}

pub fn teleport_ghz_epr(input: &InputQubit, relay_theta: f64) -> Result<TeleportReport> {
    Protocol::ghz_epr(relay_theta)?.run(input)
}

pub fn teleport_ghz_measurement(
    input: &InputQubit,
    theta_channel: f64,
    theta_meas: f64,
) -> Result<TeleportReport> {
    Protocol::ghz_measurement(theta_channel, theta_meas)?.run(input)
}

/// `input` holds `(a₀, a₁)` of `a₀|00⟩ + a₁|11⟩`.
pub fn teleport_epr_via_ghz(input: &InputQubit, theta_channel: f64) -> Result<TeleportReport> {
    Protocol::epr_via_ghz(theta_channel)?.run(input)
}

/// `input` holds `(a₀, a₁)` of `a₀|000⟩ + a₁|111⟩`.
pub fn teleport_ghz_via_3epr(input: &InputQubit, thetas: [f64; 3]) -> Result<TeleportReport> {
    Protocol::ghz_via_3epr(thetas)?.run(input)
}

pub fn teleport_w_channel(input: &InputQubit, w: WChannelSpec) -> Result<TeleportReport> {
    Protocol::w_channel(w)?.run(input)
}
