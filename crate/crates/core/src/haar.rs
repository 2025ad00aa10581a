//! Haar-distributed unitaries.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{LocalOperator, Matrix, Result, StateVector, C64};

/// Draws a `d × d` unitary from the Haar measure.
///
/// A complex Ginibre matrix is QR-factorized and `Q` is multiplied by the
/// phases of `diag(R)`; without that correction the distribution of `Q`
/// depends on the factorization's sign convention.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    assert!(dim >= 1, "dimension must be positive");
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    let ginibre = Matrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases: Vec<C64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            let n = d.norm();
            if n == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                d / n
            }
        })
        .collect();
    Matrix::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j])
}

/// Haar unitary on the given register qubits.
pub fn haar_local<R: Rng + ?Sized>(targets: Vec<usize>, rng: &mut R) -> Result<LocalOperator> {
    let u = haar_unitary(1 << targets.len(), rng);
    LocalOperator::unitary(u, targets)
}

/// Uniformly random pure state: normalized complex Gaussian amplitudes.
pub fn haar_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<StateVector> {
    let amps = (0..1usize << num_qubits)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect();
    StateVector::normalized(amps)
}
