//! Single-qubit Kraus noise on protocol resources.
//!
//! Noise acts on the resource state after preparation and before any
//! measurement. A pure resource hit by a Kraus map becomes the ensemble
//! `{K_i |ψ⟩}`, which the teleport engine consumes directly, so no density
//! matrix of the full register is ever formed.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

#[allow(unused_imports)]
use num_traits::Float;

use crate::haar::haar_state;
use crate::quadrature::InputQuadrature;
use crate::teleport::Protocol;
use crate::{
    linalg, DensityOp, Error, InputQubit, LocalOperator, Matrix, Pauli, Result, Unnormalized, C64,
};

/// Completeness tolerance for `Σ K†K = 1`.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelFamily {
    BitFlip,
    PhaseFlip,
    Depolarizing,
    AmplitudeDamping,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 4] = [
        ChannelFamily::BitFlip,
        ChannelFamily::PhaseFlip,
        ChannelFamily::Depolarizing,
        ChannelFamily::AmplitudeDamping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::BitFlip => "bitflip",
            ChannelFamily::PhaseFlip => "phaseflip",
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::AmplitudeDamping => "amplitude-damping",
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bitflip" | "bit-flip" => Ok(ChannelFamily::BitFlip),
            "phaseflip" | "phase-flip" => Ok(ChannelFamily::PhaseFlip),
            "depolarizing" => Ok(ChannelFamily::Depolarizing),
            "amplitude-damping" | "amplitudedamping" => Ok(ChannelFamily::AmplitudeDamping),
            _ => Err(Error::UnknownName { kind: "channel" }),
        }
    }
}

/// Largest entrywise deviation of `Σ K†K` from the identity.
pub fn completeness_deviation(operators: &[Matrix]) -> f64 {
    let Some(first) = operators.first() else {
        return f64::INFINITY;
    };
    let dim = first.ncols();
    let mut sum = Matrix::zeros(dim, dim);
    for k in operators {
        if k.shape() != (dim, dim) {
            return f64::INFINITY;
        }
        sum += k.adjoint() * k;
    }
    linalg::max_abs_diff(&sum, &linalg::identity(dim))
}

/// A single-qubit channel of one of the standard families.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    family: ChannelFamily,
    parameter: f64,
    operators: Vec<Matrix>,
}

impl KrausChannel {
    /// `p` is the error probability, or the decay probability `γ` for
    /// amplitude damping; it must lie in `[0, 1]`.
    pub fn new(family: ChannelFamily, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "noise parameter",
                value: p,
            });
        }
        let re = |x: f64| C64::new(x, 0.0);
        let operators = match family {
            ChannelFamily::BitFlip => vec![
                linalg::identity(2).scale((1.0 - p).sqrt()),
                Pauli::X.matrix().scale(p.sqrt()),
            ],
            ChannelFamily::PhaseFlip => vec![
                linalg::identity(2).scale((1.0 - p).sqrt()),
                Pauli::Z.matrix().scale(p.sqrt()),
            ],
            ChannelFamily::Depolarizing => {
                let q = (p / 4.0).sqrt();
                vec![
                    linalg::identity(2).scale((1.0 - 3.0 * p / 4.0).sqrt()),
                    Pauli::X.matrix().scale(q),
                    Pauli::Y.matrix().scale(q),
                    Pauli::Z.matrix().scale(q),
                ]
            }
            ChannelFamily::AmplitudeDamping => vec![
                Matrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re((1.0 - p).sqrt())]),
                Matrix::from_row_slice(2, 2, &[re(0.0), re(p.sqrt()), re(0.0), re(0.0)]),
            ],
        };
        let deviation = completeness_deviation(&operators);
        if deviation > COMPLETENESS_TOLERANCE {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(Self {
            family,
            parameter: p,
            operators,
        })
    }

    pub fn family(&self) -> ChannelFamily {
        self.family
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }
}

/// `Σ K_i ρ K_i†` with the channel acting on `target`.
pub fn apply_channel(rho: &DensityOp, channel: &KrausChannel, target: usize) -> Result<DensityOp> {
    let mut out: Option<Matrix> = None;
    for k in channel.operators() {
        let term = rho
            .conjugate_by(&LocalOperator::general(k.clone(), vec![target])?)?
            .into_matrix();
        out = Some(match out {
            Some(acc) => acc + term,
            None => term,
        });
    }
    DensityOp::new(out.expect("channels have at least one operator"))
}

/// Unravels the channel on `target` over an ensemble `ρ = Σ |ψₐ⟩⟨ψₐ|`.
/// Components that vanish exactly are dropped.
pub fn apply_to_components(
    components: &[Unnormalized],
    channel: &KrausChannel,
    target: usize,
) -> Result<Vec<Unnormalized>> {
    let mut out = Vec::with_capacity(components.len() * channel.operators().len());
    for c in components {
        if target >= c.num_qubits() {
            return Err(Error::QubitOutOfRange {
                index: target,
                num_qubits: c.num_qubits(),
            });
        }
        for k in channel.operators() {
            let mut next = c.clone();
            next.apply_in_place(k, &[target]);
            if next.norm_sqr() > 0.0 {
                out.push(next);
            }
        }
    }
    Ok(out)
}

fn check_targets(protocol: &Protocol, targets: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::EmptyArgument("targets"));
    }
    for &t in targets {
        protocol.check_channel_target(t)?;
    }
    Ok(())
}

/// Branch-summed fidelity for one input with `channel` applied to each of
/// `targets` in turn.
pub fn noisy_average_fidelity(
    protocol: &Protocol,
    channel: &KrausChannel,
    targets: &[usize],
    input: &InputQubit,
) -> Result<f64> {
    check_targets(protocol, targets)?;
    let mut components: Vec<Unnormalized> = vec![protocol.resource(input)?.into()];
    for &t in targets {
        components = apply_to_components(&components, channel, t)?;
    }
    protocol
        .plan()
        .fidelity_sum(&components, &protocol.target(input)?)
}

/// How inputs are averaged over the Bloch sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum InputAveraging {
    Quadrature(InputQuadrature),
    /// Uniformly random inputs with equal weights.
    MonteCarlo {
        samples: usize,
    },
}

impl InputAveraging {
    /// Weighted input set; Monte-Carlo draws come from `rng`.
    pub fn resolve<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<(InputQubit, f64)>> {
        match self {
            InputAveraging::Quadrature(q) => Ok(q.nodes().to_vec()),
            InputAveraging::MonteCarlo { samples: 0 } => Err(Error::EmptyArgument("samples")),
            InputAveraging::MonteCarlo { samples } => {
                let w = 1.0 / *samples as f64;
                (0..*samples)
                    .map(|_| {
                        let s = haar_state(1, rng)?;
                        Ok((InputQubit::new(s.amplitudes()[0], s.amplitudes()[1])?, w))
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub p: f64,
    pub avg_fidelity: f64,
}

/// Input-averaged fidelity at a single noise strength.
pub fn sweep_point(
    protocol: &Protocol,
    family: ChannelFamily,
    targets: &[usize],
    p: f64,
    inputs: &[(InputQubit, f64)],
) -> Result<SweepPoint> {
    let channel = KrausChannel::new(family, p)?;
    let mut total = 0.0;
    for (input, w) in inputs {
        total += w * noisy_average_fidelity(protocol, &channel, targets, input)?;
    }
    Ok(SweepPoint {
        p,
        avg_fidelity: total,
    })
}

/// `⟨F̄⟩(p)` over `p_grid`. Monte-Carlo inputs are drawn once and shared by
/// every grid point.
pub fn noisy_teleport_sweep<R: Rng + ?Sized>(
    protocol: &Protocol,
    family: ChannelFamily,
    targets: &[usize],
    p_grid: &[f64],
    averaging: &InputAveraging,
    rng: &mut R,
) -> Result<Vec<SweepPoint>> {
    check_targets(protocol, targets)?;
    let inputs = averaging.resolve(rng)?;
    p_grid
        .iter()
        .map(|&p| sweep_point(protocol, family, targets, p, &inputs))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{ghz_basis, GhzLabel};
    use crate::teleport::ProtocolKind;
    use crate::StateVector;
    use core::f64::consts::FRAC_PI_4;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DensityOp {
        let rank = rng.random_range(1..=1usize << n);
        let mut m = Matrix::zeros(1 << n, 1 << n);
        let mut weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        for w in weights {
            m += linalg::outer(haar_state(n, rng).unwrap().amplitudes()).scale(w);
        }
        DensityOp::new(m).unwrap()
    }

    /// Full-register Kraus matrix `1 ⊗ … ⊗ K ⊗ … ⊗ 1`.
    fn embed(k: &Matrix, target: usize, n: usize) -> Matrix {
        let mut out = Matrix::identity(1, 1);
        for q in 0..n {
            out = linalg::kron(
                &out,
                &if q == target {
                    k.clone()
                } else {
                    linalg::identity(2)
                },
            );
        }
        out
    }

    /// Dense oracle: noisy resource density, then per-branch projection,
    /// correction and overlap with the target.
    fn dense_noisy_fidelity(
        protocol: &Protocol,
        channel: &KrausChannel,
        targets: &[usize],
        input: &InputQubit,
    ) -> f64 {
        let n = protocol.num_qubits();
        let mut rho = protocol.resource(input).unwrap().density().into_matrix();
        for &t in targets {
            let mut next = Matrix::zeros(rho.nrows(), rho.ncols());
            for k in channel.operators() {
                let big = embed(k, t, n);
                next += &big * &rho * big.adjoint();
            }
            rho = next;
        }
        let rho = DensityOp::new(rho).unwrap();
        let target = protocol.target(input).unwrap();
        let plan = protocol.plan();
        let mut total = 0.0;
        for b in plan.branches() {
            let basis = StateVector::new(b.basis().to_vec()).unwrap();
            let proj = rho.project(&basis, plan.measured()).unwrap();
            let Some(residual) = proj.residual else {
                continue;
            };
            let u = b.correction().matrix();
            let post = (&u * residual.matrix() * u.adjoint()).scale(proj.probability);
            total += linalg::sandwich(target.amplitudes(), &post, target.amplitudes()).re;
        }
        total
    }

    #[test]
    fn standard_sets_are_complete() {
        for f in ChannelFamily::ALL {
            for p in [0.0, 0.13, 0.5, 1.0] {
                let ch = KrausChannel::new(f, p).unwrap();
                assert!(completeness_deviation(ch.operators()) < 1e-15);
            }
        }
        assert!(KrausChannel::new(ChannelFamily::BitFlip, 1.5).is_err());
        assert!(KrausChannel::new(ChannelFamily::Depolarizing, -0.1).is_err());
        let broken = [linalg::identity(2), Pauli::X.matrix().scale(0.1)];
        assert!(completeness_deviation(&broken) > 1e-3);
    }

    #[test]
    fn family_names_round_trip() {
        for f in ChannelFamily::ALL {
            assert_eq!(f.name().parse::<ChannelFamily>().unwrap(), f);
        }
        assert!("dephasing".parse::<ChannelFamily>().is_err());
    }

    #[test]
    fn cptp_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let n = rng.random_range(1..=3);
            let rho = random_density(&mut rng, n);
            let family = ChannelFamily::ALL[rng.random_range(0..4)];
            let ch = KrausChannel::new(family, rng.random()).unwrap();
            let target = rng.random_range(0..n);
            let out = apply_channel(&rho, &ch, target).unwrap();
            assert!((out.trace() - rho.trace()).abs() < 1e-12);
            assert!(out.eigenvalues().iter().all(|&v| v > -1e-9));
        }
    }

    #[test]
    fn zero_parameter_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(&mut rng, 2);
        for f in ChannelFamily::ALL {
            let out = apply_channel(&rho, &KrausChannel::new(f, 0.0).unwrap(), 1).unwrap();
            assert!(out.max_abs_diff(&rho) < 1e-15);
        }
    }

    #[test]
    fn full_bit_flip_is_sigma_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density(&mut rng, 3);
        let out = apply_channel(
            &rho,
            &KrausChannel::new(ChannelFamily::BitFlip, 1.0).unwrap(),
            1,
        )
        .unwrap();
        let flipped = rho
            .conjugate_by(&LocalOperator::pauli(Pauli::X, 1))
            .unwrap();
        assert!(out.max_abs_diff(&flipped) < 1e-12);
    }

    #[test]
    fn bit_flips_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let rho = random_density(&mut rng, 2);
            let (p1, p2): (f64, f64) = (rng.random(), rng.random());
            let a = KrausChannel::new(ChannelFamily::BitFlip, p1).unwrap();
            let b = KrausChannel::new(ChannelFamily::BitFlip, p2).unwrap();
            let both = KrausChannel::new(ChannelFamily::BitFlip, p1 + p2 - 2.0 * p1 * p2).unwrap();
            let seq = apply_channel(&apply_channel(&rho, &a, 0).unwrap(), &b, 0).unwrap();
            let once = apply_channel(&rho, &both, 0).unwrap();
            assert!(seq.max_abs_diff(&once) < 1e-12);
        }
    }

    #[test]
    fn depolarized_ghz_qubit_is_maximally_mixed() {
        let ghz = ghz_basis(FRAC_PI_4, GhzLabel::new(0, 0, 0).unwrap()).density();
        let ch = KrausChannel::new(ChannelFamily::Depolarizing, 1.0).unwrap();
        let out = apply_channel(&ghz, &ch, 2)
            .unwrap()
            .partial_trace(&[2])
            .unwrap();
        assert!(out.max_abs_diff(&DensityOp::maximally_mixed(2)) < 1e-15);
    }

    #[test]
    fn ensemble_unravelling_matches_dense_oracle() {
        let input = InputQubit::normalized(C64::new(0.3, 0.2), C64::new(-0.5, 0.7)).unwrap();
        let cases: [(Protocol, Vec<usize>); 3] = [
            (Protocol::ghz_measurement(0.5, 0.9).unwrap(), vec![3]),
            (Protocol::ghz_epr(0.4).unwrap(), vec![1, 3]),
            (
                Protocol::w_channel(crate::bases::WChannelSpec::symmetric()).unwrap(),
                vec![2, 3],
            ),
        ];
        for (protocol, targets) in &cases {
            for f in ChannelFamily::ALL {
                let ch = KrausChannel::new(f, 0.37).unwrap();
                let fast = noisy_average_fidelity(protocol, &ch, targets, &input).unwrap();
                let dense = dense_noisy_fidelity(protocol, &ch, targets, &input);
                assert!((fast - dense).abs() < 1e-12, "{} {f}", protocol.kind());
            }
        }
    }

    #[test]
    fn bit_flip_on_output_qubit_law() {
        let protocol = Protocol::ghz_measurement(FRAC_PI_4, FRAC_PI_4).unwrap();
        let grid = [0.0, 0.25, 0.6, 1.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let averaging = InputAveraging::Quadrature(InputQuadrature::coarse());
        let sweep = noisy_teleport_sweep(
            &protocol,
            ChannelFamily::BitFlip,
            &[3],
            &grid,
            &averaging,
            &mut rng,
        )
        .unwrap();
        for pt in sweep {
            assert!((pt.avg_fidelity - (1.0 - 2.0 * pt.p / 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn fully_depolarized_channel_gives_one_half() {
        let protocol = Protocol::ghz_measurement(FRAC_PI_4, FRAC_PI_4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let averaging = InputAveraging::Quadrature(InputQuadrature::coarse());
        let sweep = noisy_teleport_sweep(
            &protocol,
            ChannelFamily::Depolarizing,
            &[1, 2, 3],
            &[1.0],
            &averaging,
            &mut rng,
        )
        .unwrap();
        assert!((sweep[0].avg_fidelity - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_noise_reproduces_clean_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let averaging = InputAveraging::MonteCarlo { samples: 20 };
        let inputs = averaging.resolve(&mut rng).unwrap();
        for kind in ProtocolKind::ALL {
            let protocol = crate::teleport::default_protocol(kind).unwrap();
            let target = protocol.channel_qubits().start;
            let clean: f64 = inputs
                .iter()
                .map(|(i, w)| w * protocol.average_fidelity(i).unwrap())
                .sum();
            for f in ChannelFamily::ALL {
                let pt = sweep_point(&protocol, f, &[target], 0.0, &inputs).unwrap();
                assert!((pt.avg_fidelity - clean).abs() < 1e-9, "{kind} {f}");
            }
        }
    }

    #[test]
    fn sweep_is_continuous() {
        let protocol = Protocol::ghz_measurement(0.6, 0.3).unwrap();
        let inputs = InputAveraging::Quadrature(InputQuadrature::coarse())
            .resolve(&mut ChaCha8Rng::seed_from_u64(0))
            .unwrap();
        for f in ChannelFamily::ALL {
            for p in [0.0, 0.3, 0.75] {
                let a = sweep_point(&protocol, f, &[2, 3], p, &inputs)
                    .unwrap()
                    .avg_fidelity;
                let b = sweep_point(&protocol, f, &[2, 3], p + 1e-6, &inputs)
                    .unwrap()
                    .avg_fidelity;
                assert!((a - b).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn rejects_input_qubits_as_targets() {
        let protocol = Protocol::ghz_measurement(0.6, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let avg = InputAveraging::MonteCarlo { samples: 4 };
        let err = noisy_teleport_sweep(
            &protocol,
            ChannelFamily::BitFlip,
            &[0],
            &[0.1],
            &avg,
            &mut rng,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidTarget { qubit: 0, .. }));
        assert!(noisy_teleport_sweep(
            &protocol,
            ChannelFamily::BitFlip,
            &[4],
            &[0.1],
            &avg,
            &mut rng
        )
        .is_err());
        assert!(noisy_teleport_sweep(
            &protocol,
            ChannelFamily::BitFlip,
            &[],
            &[0.1],
            &avg,
            &mut rng
        )
        .is_err());
    }
}
