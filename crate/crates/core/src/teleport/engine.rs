use alloc::vec::Vec;

use nalgebra::DVector;

use super::{BranchRecord, BranchState, Correction, PostState, TeleportReport};
use crate::operator::check_targets;
use crate::state::{complement, contract};
use crate::{
    linalg, DensityOp, Error, Matrix, Result, StateVector, Unnormalized, C64,
    DEGENERATE_PROBABILITY,
};

/// One measurement outcome: the joint ket projected onto and what follows.
#[derive(Debug, Clone)]
pub struct BranchPlan {
    label: Vec<u8>,
    basis: Vec<C64>,
    correction: Correction,
    correction_matrix: Matrix,
    success: bool,
}

impl BranchPlan {
    /// `basis` is the joint ket on the measured qubits, in measurement order.
    pub fn new(label: Vec<u8>, basis: StateVector, correction: Correction, success: bool) -> Self {
        let correction_matrix = correction.matrix();
        Self {
            label,
            basis: basis.into_amplitudes(),
            correction,
            correction_matrix,
            success,
        }
    }

    pub fn label(&self) -> &[u8] {
        &self.label
    }

    pub fn basis(&self) -> &[C64] {
        &self.basis
    }

    pub fn correction(&self) -> &Correction {
        &self.correction
    }

    pub fn success(&self) -> bool {
        self.success
    }

    pub(crate) fn set_correction(&mut self, correction: Correction) {
        self.correction_matrix = correction.matrix();
        self.correction = correction;
    }
}

/// Measured qubits, output qubits and the full list of branches.
#[derive(Debug, Clone)]
pub struct Plan {
    num_qubits: usize,
    measured: Vec<usize>,
    output: Vec<usize>,
    branches: Vec<BranchPlan>,
}

impl Plan {
    /// Output qubits are the unmeasured ones in ascending order. Branches
    /// are sorted by label.
    pub fn new(
        num_qubits: usize,
        measured: Vec<usize>,
        mut branches: Vec<BranchPlan>,
    ) -> Result<Self> {
        check_targets(&measured, num_qubits)?;
        let output = complement(num_qubits, &measured);
        if branches.is_empty() {
            return Err(Error::EmptyArgument("branches"));
        }
        for b in &branches {
            if b.basis.len() != 1 << measured.len() {
                return Err(Error::DimensionMismatch {
                    expected: 1 << measured.len(),
                    found: b.basis.len(),
                });
            }
            if b.correction.num_qubits() != output.len() {
                return Err(Error::DimensionMismatch {
                    expected: output.len(),
                    found: b.correction.num_qubits(),
                });
            }
        }
        branches.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(Self {
            num_qubits,
            measured,
            output,
            branches,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn output(&self) -> &[usize] {
        &self.output
    }

    pub fn branches(&self) -> &[BranchPlan] {
        &self.branches
    }

    pub(crate) fn branches_mut(&mut self) -> &mut [BranchPlan] {
        &mut self.branches
    }

    fn check_inputs(&self, dim: usize, target: &StateVector) -> Result<()> {
        if dim != 1 << self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_qubits,
                found: dim,
            });
        }
        if target.num_qubits() != self.output.len() {
            return Err(Error::DimensionMismatch {
                expected: self.output.len(),
                found: target.num_qubits(),
            });
        }
        Ok(())
    }

    /// `⟨basis|_measured |resource⟩` for one branch, uncorrected.
    pub(crate) fn residual(&self, branch: &BranchPlan, resource: &[C64]) -> Vec<C64> {
        contract(resource, self.num_qubits, &branch.basis, &self.measured)
    }

    fn corrected(branch: &BranchPlan, raw: &[C64]) -> Vec<C64> {
        let v = &branch.correction_matrix * DVector::from_column_slice(raw);
        v.as_slice().to_vec()
    }

    pub fn run_pure(&self, resource: &StateVector, target: &StateVector) -> Result<TeleportReport> {
        self.check_inputs(resource.dim(), target)?;
        let k = self.output.len();
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let raw = self.residual(b, resource.amplitudes());
                let fixed = Self::corrected(b, &raw);
                let probability = linalg::norm_sqr(&fixed);
                let fidelity_unnormalized = linalg::inner(target.amplitudes(), &fixed).norm_sqr();
                let (post_state, fidelity) = if probability >= DEGENERATE_PROBABILITY {
                    let norm = probability.sqrt();
                    let s = StateVector::from_parts_unchecked(
                        k,
                        fixed.iter().map(|a| a / norm).collect(),
                    );
                    (
                        PostState::Pure(s),
                        Some((fidelity_unnormalized / probability).clamp(0.0, 1.0)),
                    )
                } else {
                    (PostState::Impossible, None)
                };
                Ok(BranchRecord {
                    label: b.label.clone(),
                    probability,
                    correction: b.correction.clone(),
                    success: b.success,
                    pre_correction: BranchState::Pure(Unnormalized::new(raw)?),
                    post_correction: BranchState::Pure(Unnormalized::new(fixed)?),
                    post_state,
                    fidelity,
                    fidelity_unnormalized,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(summarize(branches))
    }

    /// Mixed resource `Σ |ψₐ⟩⟨ψₐ|` given by unnormalized components.
    pub fn run_ensemble(
        &self,
        components: &[Unnormalized],
        target: &StateVector,
    ) -> Result<TeleportReport> {
        if components.is_empty() {
            return Err(Error::EmptyArgument("components"));
        }
        for c in components {
            self.check_inputs(c.amplitudes().len(), target)?;
        }
        let dim = 1 << self.output.len();
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let mut pre = Matrix::zeros(dim, dim);
                let mut fidelity_unnormalized = 0.0;
                for c in components {
                    let raw = self.residual(b, c.amplitudes());
                    pre += linalg::outer(&raw);
                    fidelity_unnormalized +=
                        linalg::inner(target.amplitudes(), &Self::corrected(b, &raw)).norm_sqr();
                }
                let post = &b.correction_matrix * &pre * b.correction_matrix.adjoint();
                let probability = linalg::trace(&post).re.max(0.0);
                let (post_state, fidelity) = if probability >= DEGENERATE_PROBABILITY {
                    let rho = DensityOp::from_matrix_unchecked(post.scale(1.0 / probability));
                    (
                        PostState::Mixed(rho),
                        Some((fidelity_unnormalized / probability).clamp(0.0, 1.0)),
                    )
                } else {
                    (PostState::Impossible, None)
                };
                BranchRecord {
                    label: b.label.clone(),
                    probability,
                    correction: b.correction.clone(),
                    success: b.success,
                    pre_correction: BranchState::Mixed(pre),
                    post_correction: BranchState::Mixed(post),
                    post_state,
                    fidelity,
                    fidelity_unnormalized,
                }
            })
            .collect();
        Ok(summarize(branches))
    }

    /// `Σ_branches Σ_a |⟨target|U_b ⟨basis_b|ψₐ⟩|²` without building records.
    pub fn fidelity_sum(&self, components: &[Unnormalized], target: &StateVector) -> Result<f64> {
        let mut total = 0.0;
        for c in components {
            self.check_inputs(c.amplitudes().len(), target)?;
            for b in &self.branches {
                let raw = self.residual(b, c.amplitudes());
                total += linalg::inner(target.amplitudes(), &Self::corrected(b, &raw)).norm_sqr();
            }
        }
        Ok(total)
    }
}

fn summarize(branches: Vec<BranchRecord>) -> TeleportReport {
    let avg_fidelity = branches
        .iter()
        .filter_map(|b| b.fidelity.map(|f| b.probability * f))
        .sum();
    let avg_fidelity_unnormalized = branches.iter().map(|b| b.fidelity_unnormalized).sum();
    let success_probability: f64 = branches
        .iter()
        .filter(|b| b.success)
        .map(|b| b.probability)
        .sum();
    let success_weighted: f64 = branches
        .iter()
        .filter(|b| b.success)
        .filter_map(|b| b.fidelity.map(|f| b.probability * f))
        .sum();
    let success_fidelity = (success_probability >= DEGENERATE_PROBABILITY)
        .then(|| success_weighted / success_probability);
    TeleportReport {
        branches,
        avg_fidelity,
        avg_fidelity_unnormalized,
        success_probability,
        success_fidelity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{bell, BellLabel};
    use crate::operator::Pauli;
    use alloc::vec;

    /// Standard two-qubit-channel teleportation, corrections `Z^m X^n`.
    fn standard_plan() -> Plan {
        let branches = BellLabel::qubit_labels()
            .iter()
            .map(|l| {
                let mut word = Vec::new();
                if l.m == 1 {
                    word.push(Pauli::Z);
                }
                if l.n == 1 {
                    word.push(Pauli::X);
                }
                BranchPlan::new(
                    vec![l.m as u8, l.n as u8],
                    bell(*l),
                    Correction::new(vec![word]),
                    true,
                )
            })
            .collect();
        Plan::new(3, vec![0, 1], branches).unwrap()
    }

    #[test]
    fn standard_teleportation_is_perfect() {
        let plan = standard_plan();
        assert_eq!(plan.output(), &[2]);
        let input = StateVector::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let resource = input.tensor(&bell(BellLabel::new(0, 0))).unwrap();
        let report = plan.run_pure(&resource, &input).unwrap();
        for b in &report.branches {
            assert!((b.probability - 0.25).abs() < 1e-14);
            assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-14);
        }
        assert!((report.avg_fidelity - 1.0).abs() < 1e-14);
        assert!((report.avg_fidelity_unnormalized - 1.0).abs() < 1e-14);
        assert!((report.success_probability - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ensemble_of_one_matches_pure_run() {
        let plan = standard_plan();
        let input = StateVector::new(vec![C64::new(0.28, 0.0), C64::new(0.96, 0.0)]).unwrap();
        let resource = input.tensor(&bell(BellLabel::new(0, 1))).unwrap();
        let pure = plan.run_pure(&resource, &input).unwrap();
        let mixed = plan
            .run_ensemble(&[resource.clone().into()], &input)
            .unwrap();
        for (p, m) in pure.branches.iter().zip(&mixed.branches) {
            assert!((p.probability - m.probability).abs() < 1e-14);
            assert!((p.fidelity.unwrap() - m.fidelity.unwrap()).abs() < 1e-14);
            let diff =
                linalg::max_abs_diff(&p.post_correction.operator(), &m.post_correction.operator());
            assert!(diff < 1e-14);
        }
        let fast = plan.fidelity_sum(&[resource.into()], &input).unwrap();
        assert!((fast - pure.avg_fidelity_unnormalized).abs() < 1e-14);
    }

    #[test]
    fn plan_validation() {
        let b = BranchPlan::new(
            vec![0],
            bell(BellLabel::new(0, 0)),
            Correction::identity(2),
            true,
        );
        assert!(Plan::new(3, vec![0, 1], vec![b]).is_err());
        assert!(Plan::new(3, vec![0, 0], vec![]).is_err());
        assert!(Plan::new(3, vec![0, 1], vec![]).is_err());
    }

    #[test]
    fn branches_sorted_by_label() {
        let mk = |l: u8| {
            BranchPlan::new(
                vec![l],
                StateVector::basis(1, l as usize).unwrap(),
                Correction::identity(1),
                true,
            )
        };
        let plan = Plan::new(2, vec![0], vec![mk(1), mk(0)]).unwrap();
        assert_eq!(plan.branches()[0].label(), &[0]);
    }

    #[test]
    fn impossible_branch_has_no_fidelity() {
        let mk = |l: u8| {
            BranchPlan::new(
                vec![l],
                StateVector::basis(1, l as usize).unwrap(),
                Correction::identity(1),
                true,
            )
        };
        let plan = Plan::new(2, vec![0], vec![mk(0), mk(1)]).unwrap();
        let resource = StateVector::from_bits("01").unwrap();
        let target = StateVector::from_bits("1").unwrap();
        let report = plan.run_pure(&resource, &target).unwrap();
        assert_eq!(report.branches[1].post_state, PostState::Impossible);
        assert_eq!(report.branches[1].fidelity, None);
        assert!((report.avg_fidelity - 1.0).abs() < 1e-15);
    }
}
