//! Single-qubit teleportation over `GHZ(θ_c) = β₀|000⟩ + β₁|111⟩` with a
//! GHZ-basis measurement at angle `θ_m` on qubits (0, 1, 2).
//!
//! `β = (cos θ_c, sin θ_c)` and `b = (cos θ_m, sin θ_m)`. Outcome `(μ, λ, ω)`
//! occurs only when `λ = ω` and leaves
//! `Σ_k (−1)^{μk} b_{μ⊕k} β_{k⊕λ} c_k |k⊕λ⟩` on qubit 3, which
//! `σz^μ σx^λ` maps to `Σ_k b_{μ⊕k} β_{k⊕λ} c_k |k⟩`. The leftover weights
//! cannot be undone, so the per-input average fidelity is
//! `x² + y² + 2xy · sin 2θ_c · sin 2θ_m` with `x = |c₀|²`, `y = |c₁|²`, and the
//! input average is `2/3 + (1/3) sin 2θ_c sin 2θ_m`.

use alloc::vec;
use alloc::vec::Vec;

use super::engine::{BranchPlan, Plan};
use super::{ChannelSpec, Correction, Protocol, ProtocolKind};
use crate::bases::{check_angle, ghz_basis, GhzLabel};
use crate::operator::Pauli;
use crate::{InputQubit, Matrix, Result, C64};

/// `σz^μ σx^λ`, written with the `x` factor applied first.
pub fn correction_for(label: GhzLabel) -> Correction {
    let mut word = Vec::new();
    if label.mu() == 1 {
        word.push(Pauli::Z);
    }
    if label.lambda() == 1 {
        word.push(Pauli::X);
    }
    Correction::new(vec![word])
}

pub fn protocol(theta_channel: f64, theta_meas: f64) -> Result<Protocol> {
    check_angle("theta_channel", theta_channel)?;
    check_angle("theta_meas", theta_meas)?;
    let branches = GhzLabel::all()
        .map(|l| {
            BranchPlan::new(
                vec![l.mu(), l.lambda(), l.omega()],
                ghz_basis(theta_meas, l),
                correction_for(l),
                true,
            )
        })
        .collect();
    let plan = Plan::new(4, vec![0, 1, 2], branches)?;
    Protocol::assemble(
        ProtocolKind::GhzMeasurement,
        ChannelSpec::Ghz(theta_channel),
        1,
        plan,
    )
}

fn weights(theta_channel: f64, theta_meas: f64) -> ([f64; 2], [f64; 2]) {
    let (sm, cm) = theta_meas.sin_cos();
    let (sc, cc) = theta_channel.sin_cos();
    ([cm, sm], [cc, sc])
}

/// Closed-form unnormalized output before correction,
/// `Σ_{j,k} (−1)^{μ(j+k)} b_{μ⊕j} b_{μ⊕k} β_{k⊕λ} β_{j⊕λ} δ_{λω} c_k c_j* |k⊕λ⟩⟨j⊕λ|`.
pub fn rho_tilde(
    input: &InputQubit,
    theta_channel: f64,
    theta_meas: f64,
    label: GhzLabel,
) -> Matrix {
    let (b, beta) = weights(theta_channel, theta_meas);
    let c = input.amplitudes();
    let (mu, lambda) = (label.mu() as usize, label.lambda() as usize);
    let mut m = Matrix::zeros(2, 2);
    if label.lambda() != label.omega() {
        return m;
    }
    for j in 0..2 {
        for k in 0..2 {
            let sign = if (mu * (j + k)) % 2 == 1 { -1.0 } else { 1.0 };
            let w = sign * b[mu ^ j] * b[mu ^ k] * beta[k ^ lambda] * beta[j ^ lambda];
            m[(k ^ lambda, j ^ lambda)] += c[k] * c[j].conj() * w;
        }
    }
    m
}

/// The same operator after `σz^μ σx^λ`:
/// `Σ_{j,k} b_{μ⊕j} b_{μ⊕k} β_{k⊕λ} β_{j⊕λ} δ_{λω} c_k c_j* |k⟩⟨j|`.
pub fn rho_tilde_corrected(
    input: &InputQubit,
    theta_channel: f64,
    theta_meas: f64,
    label: GhzLabel,
) -> Matrix {
    let (b, beta) = weights(theta_channel, theta_meas);
    let c = input.amplitudes();
    let (mu, lambda) = (label.mu() as usize, label.lambda() as usize);
    if label.lambda() != label.omega() {
        return Matrix::zeros(2, 2);
    }
    Matrix::from_fn(2, 2, |k, j| {
        c[k] * c[j].conj() * (b[mu ^ j] * b[mu ^ k] * beta[k ^ lambda] * beta[j ^ lambda])
    })
}

/// Outcome `(0,0,0)` written out entry by entry.
pub fn rho_tilde_000(input: &InputQubit, theta_channel: f64, theta_meas: f64) -> Matrix {
    let ([b0, b1], [be0, be1]) = weights(theta_channel, theta_meas);
    let (c0, c1) = (input.c0(), input.c1());
    let cross = b0 * b1 * be0 * be1;
    let re = |x: f64| C64::new(x, 0.0);
    Matrix::from_row_slice(
        2,
        2,
        &[
            re(b0 * b0 * be0 * be0 * c0.norm_sqr()),
            c0 * c1.conj() * cross,
            c1 * c0.conj() * cross,
            re(b1 * b1 * be1 * be1 * c1.norm_sqr()),
        ],
    )
}

/// Outcome `(1,1,1)` written out entry by entry.
pub fn rho_tilde_111(input: &InputQubit, theta_channel: f64, theta_meas: f64) -> Matrix {
    let ([b0, b1], [be0, be1]) = weights(theta_channel, theta_meas);
    let (c0, c1) = (input.c0(), input.c1());
    let cross = b0 * b1 * be0 * be1;
    let re = |x: f64| C64::new(x, 0.0);
    Matrix::from_row_slice(
        2,
        2,
        &[
            re(b0 * b0 * be0 * be0 * c1.norm_sqr()),
            -(c1 * c0.conj() * cross),
            -(c0 * c1.conj() * cross),
            re(b1 * b1 * be1 * be1 * c0.norm_sqr()),
        ],
    )
}

/// `x² + y² + 2xy · sin 2θ_c · sin 2θ_m`.
pub fn branch_averaged_fidelity(input: &InputQubit, theta_channel: f64, theta_meas: f64) -> f64 {
    let (x, y) = (input.c0().norm_sqr(), input.c1().norm_sqr());
    x * x + y * y + 2.0 * x * y * (2.0 * theta_channel).sin() * (2.0 * theta_meas).sin()
}

/// Variant with cross term `2xy · b₀b₁β₀β₁`, a factor of four short of the
/// simulated value. Kept as a known-bad fixture.
pub fn branch_averaged_fidelity_short_cross_term(
    input: &InputQubit,
    theta_channel: f64,
    theta_meas: f64,
) -> f64 {
    let ([b0, b1], [be0, be1]) = weights(theta_channel, theta_meas);
    let (x, y) = (input.c0().norm_sqr(), input.c1().norm_sqr());
    x * x + y * y + 2.0 * x * y * b0 * b1 * be0 * be1
}

/// `2/3 + (1/3) sin 2θ_c sin 2θ_m`.
pub fn closed_form_average_fidelity(theta_channel: f64, theta_meas: f64) -> f64 {
    2.0 / 3.0 + (2.0 * theta_channel).sin() * (2.0 * theta_meas).sin() / 3.0
}
