//! Exhaustive search for per-branch Pauli corrections.
//!
//! For each branch every Pauli string on the output qubits is scored by its
//! worst fidelity over a fixed probe set of inputs. The best score wins;
//! ties within 1e-9 go to the string touching fewest qubits, then to the
//! first string in `I < X < Y < Z` lexicographic order.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;

use super::{Correction, Protocol};
use crate::operator::Pauli;
use crate::{linalg, InputQubit, Result, C64, DEGENERATE_PROBABILITY};

const TIE: f64 = 1e-9;

/// Basis states, the `±x` and `+y` Bloch directions and one generic state.
pub fn probe_inputs() -> Vec<InputQubit> {
    let r = FRAC_1_SQRT_2;
    [
        (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        (C64::new(r, 0.0), C64::new(r, 0.0)),
        (C64::new(r, 0.0), C64::new(-r, 0.0)),
        (C64::new(r, 0.0), C64::new(0.0, r)),
        (C64::new(0.6, 0.0), C64::from_polar(0.8, 0.7)),
    ]
    .into_iter()
    .map(|(a, b)| InputQubit::new(a, b).expect("normalized probe"))
    .collect()
}

/// Winning correction for one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub correction: Correction,
    /// Worst probe fidelity of the winner; `None` when the branch is
    /// impossible for every probe.
    pub worst_fidelity: Option<f64>,
}

/// All Pauli strings of length `k` in lexicographic order.
pub fn pauli_strings(k: usize) -> Vec<Vec<Pauli>> {
    (0..1usize << (2 * k))
        .map(|code| {
            (0..k)
                .map(|q| Pauli::ALL[(code >> (2 * (k - 1 - q))) & 3])
                .collect()
        })
        .collect()
}

/// Searches every branch of `protocol` with its current channel.
pub fn search_corrections(protocol: &Protocol) -> Result<Vec<SearchOutcome>> {
    let plan = protocol.plan();
    let k = plan.output().len();
    let candidates: Vec<(Correction, nalgebra::DMatrix<C64>)> = pauli_strings(k)
        .into_iter()
        .map(|letters| {
            let c = Correction::from_letters(&letters);
            let m = c.matrix();
            (c, m)
        })
        .collect();
    let probes = probe_inputs()
        .iter()
        .map(|p| Ok((protocol.resource(p)?, protocol.target(p)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut outcomes = Vec::with_capacity(plan.branches().len());
    for branch in plan.branches() {
        // (normalized raw residual, target) for probes where the branch occurs.
        let live: Vec<(DVector<C64>, &[C64])> = probes
            .iter()
            .filter_map(|(resource, target)| {
                let raw = plan.residual(branch, resource.amplitudes());
                let p = linalg::norm_sqr(&raw);
                (p >= DEGENERATE_PROBABILITY).then(|| {
                    (
                        DVector::from_column_slice(&raw).unscale(p.sqrt()),
                        target.amplitudes(),
                    )
                })
            })
            .collect();
        if live.is_empty() {
            outcomes.push(SearchOutcome {
                correction: Correction::identity(k),
                worst_fidelity: None,
            });
            continue;
        }
        let mut best: Option<(f64, usize, &Correction)> = None;
        for (c, m) in &candidates {
            let worst = live
                .iter()
                .map(|(v, t)| linalg::inner(t, (m * v).as_slice()).norm_sqr())
                .fold(f64::INFINITY, f64::min);
            let weight = c.weight();
            let better = match best {
                None => true,
                Some((bw, bweight, _)) => {
                    worst > bw + TIE || ((worst - bw).abs() <= TIE && weight < bweight)
                }
            };
            if better {
                best = Some((worst, weight, c));
            }
        }
        let (worst, _, c) = best.expect("at least one candidate");
        outcomes.push(SearchOutcome {
            correction: c.clone(),
            worst_fidelity: Some(worst),
        });
    }
    Ok(outcomes)
}

/// Replaces each branch correction of `target` by the search result on
/// `reference`, which must share the branch list.
pub(crate) fn install_searched(target: &mut Protocol, reference: &Protocol) -> Result<()> {
    let outcomes = search_corrections(reference)?;
    for (b, o) in target.plan.branches_mut().iter_mut().zip(outcomes) {
        b.set_correction(o.correction);
    }
    Ok(())
}
