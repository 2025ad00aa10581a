use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use super::Protocol;
use crate::quadrature::InputQuadrature;
use crate::Result;

/// Input-averaged fidelity of the GHZ-measurement protocol on an angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySurface {
    /// Channel angles.
    pub theta_grid: Vec<f64>,
    /// Measurement-basis angles.
    pub phi_grid: Vec<f64>,
    /// `values[i][j]` at `(theta_grid[i], phi_grid[j])`.
    pub values: Vec<Vec<f64>>,
}

impl FidelitySurface {
    /// `n` equally spaced angles covering `[0, π/2]`.
    pub fn angle_grid(n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => alloc::vec![0.0],
            _ => (0..n)
                .map(|i| FRAC_PI_2 * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// `∫ F̄(input) d input` over the quadrature.
pub fn input_averaged_fidelity(protocol: &Protocol, quadrature: &InputQuadrature) -> Result<f64> {
    quadrature.integrate(|q| protocol.average_fidelity(q))
}

pub fn avg_fidelity_surface(
    theta_grid: &[f64],
    phi_grid: &[f64],
    quadrature: &InputQuadrature,
) -> Result<FidelitySurface> {
    let values = theta_grid
        .iter()
        .map(|&t| {
            phi_grid
                .iter()
                .map(|&p| input_averaged_fidelity(&Protocol::ghz_measurement(t, p)?, quadrature))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FidelitySurface {
        theta_grid: theta_grid.to_vec(),
        phi_grid: phi_grid.to_vec(),
        values,
    })
}
