//! Quadrature over single-qubit inputs `√x |0⟩ + √(1−x) e^{iϕ} |1⟩`,
//! uniform in the population `x ∈ [0, 1]` and the phase `ϕ ∈ [0, 2π)`.
//!
//! This measure is the unitarily invariant one on the Bloch sphere
//! (`x = cos²(ϑ/2)` makes `dx ∝ d cos ϑ`).

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, InputQubit, Result};

/// Gauss–Legendre nodes and weights on `[0, 1]`, nodes ascending; weights sum to 1.
pub fn gauss_legendre(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "nodes",
            value: 0.0,
        });
    }
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Tricomi's initial guess, then Newton on P_n.
        let mut t = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, t);
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        // Map [−1, 1] → [0, 1]; halving the weight normalizes the measure.
        out.push(((1.0 - t) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// `(P_n(t), P_n'(t))` from the three-term recurrence.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Tensor grid of Gauss–Legendre population nodes and equally spaced phases.
#[derive(Debug, Clone, PartialEq)]
pub struct InputQuadrature {
    nodes: Vec<(InputQubit, f64)>,
}

impl InputQuadrature {
    pub fn new(population_nodes: usize, phase_nodes: usize) -> Result<Self> {
        if phase_nodes == 0 {
            return Err(Error::OutOfRange {
                name: "phase nodes",
                value: 0.0,
            });
        }
        let gl = gauss_legendre(population_nodes)?;
        let wp = 1.0 / phase_nodes as f64;
        let mut nodes = Vec::with_capacity(gl.len() * phase_nodes);
        for &(x, wx) in &gl {
            for j in 0..phase_nodes {
                let phase = 2.0 * PI * j as f64 / phase_nodes as f64;
                nodes.push((InputQubit::from_population_phase(x, phase)?, wx * wp));
            }
        }
        Ok(Self { nodes })
    }

    /// 64 population nodes × 32 phases.
    pub fn standard() -> Self {
        Self::new(64, 32).expect("static sizes")
    }

    /// 8 × 8: exact for the low-degree integrands produced by single-qubit
    /// protocols, used where many sweeps are evaluated.
    pub fn coarse() -> Self {
        Self::new(8, 8).expect("static sizes")
    }

    pub fn nodes(&self) -> &[(InputQubit, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ f(inputᵢ)`, propagating the first error.
    pub fn integrate<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(&InputQubit) -> Result<f64>,
    {
        self.nodes
            .iter()
            .try_fold(0.0, |acc, (q, w)| Ok(acc + w * f(q)?))
    }
}
