//! Single-qubit teleportation over a maximal GHZ channel.
//!
//! Register: input on qubit 0, `(|000⟩ + |111⟩)/√2` on qubits 1, 2, 3. A Bell
//! measurement `(m, n)` on (0, 1) leaves `½ η_mn` on (2, 3) with
//! `η_mn = Σ_k (−1)^{mk} α_k |k⊕n, k⊕n⟩`. The relay then measures qubit 2 in
//! `x₀ = sin θ|0⟩ + cos θ|1⟩`, `x₁ = cos θ|0⟩ − sin θ|1⟩` and qubit 3 keeps
//! the teleported state.
//!
//! The three lookup tables below are transcribed literally: the corrected
//! versions drive the protocol, and an earlier set with wrong entries is kept
//! as a fixture that the tests show to disagree with simulation.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use super::engine::{BranchPlan, Plan};
use super::{ChannelSpec, Correction, Protocol, ProtocolKind};
use crate::bases::{bell, check_angle, relay_basis, BellLabel};
use crate::{InputQubit, Result, C64};

/// Which transcription of the tables to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableVersion {
    Corrected,
    /// Known-bad entries; do not drive the protocol with these.
    Original,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trig {
    Sin,
    Cos,
}

/// `sign · α_k` placed on a basis ket.
type EtaTerm = (f64, usize);
/// `sign · trig(θ) · α_k` placed on a single-qubit ket.
type CharlieTerm = (f64, Trig, usize);

/// η_mn: `[term for α₀, term for α₁]`, rows ordered `00, 01, 10, 11`.
const ETA_CORRECTED: [[EtaTerm; 2]; 4] = [
    [(1.0, 0b00), (1.0, 0b11)],
    [(1.0, 0b11), (1.0, 0b00)],
    [(1.0, 0b00), (-1.0, 0b11)],
    [(1.0, 0b11), (-1.0, 0b00)],
];

const ETA_ORIGINAL: [[EtaTerm; 2]; 4] = [
    [(1.0, 0b00), (1.0, 0b11)],
    [(1.0, 0b01), (1.0, 0b10)],
    [(1.0, 0b00), (-1.0, 0b11)],
    [(1.0, 0b01), (-1.0, 0b10)],
];

use Trig::{Cos, Sin};

/// Unnormalized relay-conditioned state, rows ordered by `(m, n, j)`.
const CHARLIE_CORRECTED: [[CharlieTerm; 2]; 8] = [
    [(1.0, Sin, 0), (1.0, Cos, 1)],
    [(1.0, Cos, 0), (-1.0, Sin, 1)],
    [(1.0, Cos, 1), (1.0, Sin, 0)],
    [(-1.0, Sin, 1), (1.0, Cos, 0)],
    [(1.0, Sin, 0), (-1.0, Cos, 1)],
    [(1.0, Cos, 0), (1.0, Sin, 1)],
    [(1.0, Cos, 1), (-1.0, Sin, 0)],
    [(-1.0, Sin, 1), (-1.0, Cos, 0)],
];

const CHARLIE_ORIGINAL: [[CharlieTerm; 2]; 8] = [
    [(1.0, Sin, 0), (1.0, Cos, 1)],
    [(1.0, Cos, 0), (-1.0, Sin, 1)],
    [(1.0, Sin, 1), (1.0, Cos, 0)],
    [(1.0, Cos, 1), (-1.0, Sin, 0)],
    [(1.0, Sin, 0), (-1.0, Cos, 1)],
    [(1.0, Cos, 0), (1.0, Sin, 1)],
    [(1.0, Sin, 1), (-1.0, Cos, 0)],
    [(1.0, Cos, 1), (1.0, Sin, 0)],
];

/// Corrections as written products, rows ordered by `(m, n, j)`.
const CORRECTIONS_CORRECTED: [&str; 8] = ["I", "Z", "X", "XZ", "Z", "I", "ZX", "X"];
const CORRECTIONS_ORIGINAL: [&str; 8] = ["I", "Z", "X", "ZX", "Z", "I", "ZX", "X"];

fn row(m: u8, n: u8, j: u8) -> usize {
    assert!(j < 2, "labels are bits");
    eta_row(m, n) << 1 | j as usize
}

fn eta_row(m: u8, n: u8) -> usize {
    assert!(m < 2 && n < 2, "labels are bits");
    (m as usize) << 1 | n as usize
}

/// Tabulated `η_mn` as a two-qubit amplitude vector on (relay, receiver).
pub fn table_eta(version: TableVersion, input: &InputQubit, m: u8, n: u8) -> [C64; 4] {
    let table = match version {
        TableVersion::Corrected => &ETA_CORRECTED,
        TableVersion::Original => &ETA_ORIGINAL,
    };
    let alpha = input.amplitudes();
    let mut out = [C64::new(0.0, 0.0); 4];
    for (k, &(sign, ket)) in table[eta_row(m, n)].iter().enumerate() {
        out[ket] += alpha[k] * sign;
    }
    out
}

/// Tabulated unnormalized receiver state for outcome `(m, n, j)`.
pub fn table_charlie(
    version: TableVersion,
    input: &InputQubit,
    theta: f64,
    m: u8,
    n: u8,
    j: u8,
) -> [C64; 2] {
    let table = match version {
        TableVersion::Corrected => &CHARLIE_CORRECTED,
        TableVersion::Original => &CHARLIE_ORIGINAL,
    };
    let (s, c) = theta.sin_cos();
    let alpha = input.amplitudes();
    let mut out = [C64::new(0.0, 0.0); 2];
    for (k, &(sign, trig, ket)) in table[row(m, n, j)].iter().enumerate() {
        let t = match trig {
            Sin => s,
            Cos => c,
        };
        out[ket] += alpha[k] * (sign * t);
    }
    out
}

/// Tabulated correction for outcome `(m, n, j)`.
pub fn table_correction(version: TableVersion, m: u8, n: u8, j: u8) -> Correction {
    let table = match version {
        TableVersion::Corrected => &CORRECTIONS_CORRECTED,
        TableVersion::Original => &CORRECTIONS_ORIGINAL,
    };
    table[row(m, n, j)].parse().expect("static correction")
}

/// Branch plan with the corrected lookup table.
pub fn protocol(relay_theta: f64) -> Result<Protocol> {
    check_angle("relay_theta", relay_theta)?;
    let (x0, x1) = relay_basis(relay_theta);
    let mut branches = Vec::with_capacity(8);
    for label in BellLabel::qubit_labels() {
        for (j, x) in [&x0, &x1].into_iter().enumerate() {
            let (m, n, j) = (label.m as u8, label.n as u8, j as u8);
            let basis = bell(label).tensor(x)?;
            let correction = table_correction(TableVersion::Corrected, m, n, j);
            branches.push(BranchPlan::new(vec![m, n, j], basis, correction, true));
        }
    }
    let plan = Plan::new(4, vec![0, 1, 2], branches)?;
    Protocol::assemble(ProtocolKind::GhzEpr, ChannelSpec::Ghz(FRAC_PI_4), 1, plan)
}

/// One outcome of the table comparison against simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub m: u8,
    pub n: u8,
    pub j: u8,
    pub eta_table: [C64; 4],
    /// `2 ⟨φ_mn|_{01} |Ψ⟩`.
    pub eta_simulated: [C64; 4],
    pub charlie_table: [C64; 2],
    /// Twice the simulated receiver amplitudes before correction.
    pub charlie_simulated: [C64; 2],
    pub correction: Correction,
    /// Twice the simulated receiver amplitudes after correction.
    pub corrected_simulated: [C64; 2],
    pub probability: f64,
    pub fidelity: Option<f64>,
}

impl TableRow {
    pub fn eta_deviation(&self) -> f64 {
        max_dev(&self.eta_table, &self.eta_simulated)
    }

    pub fn charlie_deviation(&self) -> f64 {
        max_dev(&self.charlie_table, &self.charlie_simulated)
    }
}

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Simulates every outcome and lines it up with the table entries.
pub fn table_rows(
    version: TableVersion,
    input: &InputQubit,
    relay_theta: f64,
) -> Result<Vec<TableRow>> {
    let proto = protocol(relay_theta)?;
    let resource = proto.resource(input)?;
    let report = proto.run(input)?;
    let two = C64::new(2.0, 0.0);
    report
        .branches
        .iter()
        .map(|b| {
            let (m, n, j) = (b.label[0], b.label[1], b.label[2]);
            let eta = resource
                .project_unnormalized(&bell(BellLabel::new(m as usize, n as usize)), &[0, 1])?;
            let mut eta_simulated = [C64::new(0.0, 0.0); 4];
            for (o, a) in eta_simulated.iter_mut().zip(eta.amplitudes()) {
                *o = a * two;
            }
            let pick = |s: &super::BranchState| -> [C64; 2] {
                match s {
                    super::BranchState::Pure(v) => {
                        [v.amplitudes()[0] * two, v.amplitudes()[1] * two]
                    }
                    super::BranchState::Mixed(_) => unreachable!("pure run"),
                }
            };
            Ok(TableRow {
                m,
                n,
                j,
                eta_table: table_eta(version, input, m, n),
                eta_simulated,
                charlie_table: table_charlie(version, input, relay_theta, m, n, j),
                charlie_simulated: pick(&b.pre_correction),
                correction: table_correction(version, m, n, j),
                corrected_simulated: pick(&b.post_correction),
                probability: b.probability,
                fidelity: b.fidelity,
            })
        })
        .collect()
}

/// Applies a tabulated correction to a tabulated receiver state.
pub fn apply_correction(correction: &Correction, amplitudes: [C64; 2]) -> [C64; 2] {
    let v = correction.matrix() * nalgebra::DVector::from_column_slice(&amplitudes);
    [v[0], v[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::teleport::search::search_corrections;

    fn input() -> InputQubit {
        InputQubit::normalized(C64::new(0.3, 0.2), C64::new(-0.5, 0.7)).unwrap()
    }

    #[test]
    fn corrected_tables_match_simulation() {
        for &theta in &[0.0, 0.2, FRAC_PI_4, 1.3] {
            for r in table_rows(TableVersion::Corrected, &input(), theta).unwrap() {
                assert!(r.eta_deviation() < 1e-12, "eta {}{}", r.m, r.n);
                assert!(
                    r.charlie_deviation() < 1e-12,
                    "charlie {}{}{}",
                    r.m,
                    r.n,
                    r.j
                );
                let fixed = apply_correction(&r.correction, r.charlie_table);
                assert!(max_dev(&fixed, &r.corrected_simulated) < 1e-12);
            }
        }
    }

    #[test]
    fn original_tables_disagree_on_the_shifted_rows() {
        let rows = table_rows(TableVersion::Original, &input(), 0.4).unwrap();
        for r in &rows {
            let shifted = r.n == 1;
            assert_eq!(r.eta_deviation() > 1e-3, shifted, "eta {}{}", r.m, r.n);
            assert_eq!(
                r.charlie_deviation() > 1e-3,
                shifted,
                "charlie {}{}{}",
                r.m,
                r.n,
                r.j
            );
        }
    }

    #[test]
    fn every_branch_is_perfect_at_quarter_pi() {
        let report = protocol(FRAC_PI_4).unwrap().run(&input()).unwrap();
        for b in &report.branches {
            assert!((b.probability - 0.125).abs() < 1e-12);
            assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_input_teleports_for_every_angle() {
        for &theta in &[0.1, 0.5, 1.2] {
            let report = protocol(theta).unwrap().run(&InputQubit::zero()).unwrap();
            for b in report.branches.iter().filter(|b| b.fidelity.is_some()) {
                assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tabulated_corrections_are_the_minimal_searched_ones() {
        let proto = protocol(FRAC_PI_4).unwrap();
        let found = search_corrections(&proto).unwrap();
        for (b, o) in proto.plan().branches().iter().zip(found) {
            assert_eq!(
                b.correction().classes(),
                o.correction.classes(),
                "{:?}",
                b.label()
            );
            assert!((o.worst_fidelity.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn example_branch_000() {
        let theta = 0.35;
        let inp = input();
        let report = protocol(theta).unwrap().run(&inp).unwrap();
        let b = report.branch(&[0, 0, 0]).unwrap();
        let (s, c) = theta.sin_cos();
        let expected = [inp.c0() * s * 0.5, inp.c1() * c * 0.5];
        match &b.pre_correction {
            crate::teleport::BranchState::Pure(v) => {
                assert!(max_dev(v.amplitudes(), &expected) < 1e-14)
            }
            _ => panic!("pure run"),
        }
    }
}
