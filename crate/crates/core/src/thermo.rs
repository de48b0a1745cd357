//! Gibbs states and von Neumann free energies, including the T = 0 limit.
//!
//! Units: k_B = 1, so temperatures are energies and `beta = 1 / T`.

use crate::error::{Error, Result};
use crate::quantum::{von_neumann_entropy, DensityMatrix, HermitianOperator, LogBase, Operator};

/// Eigenvalues within this distance of the minimum form the ground manifold.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Finite { beta: f64 },
    /// The analytic `beta -> infinity` limit.
    Zero,
}

impl Temperature {
    pub fn finite(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParams(format!("beta must be positive and finite, got {beta}")));
        }
        Ok(Temperature::Finite { beta })
    }

    /// `k_B T`, zero for `Temperature::Zero`.
    pub fn kt(&self) -> f64 {
        match *self {
            Temperature::Finite { beta } => 1.0 / beta,
            Temperature::Zero => 0.0,
        }
    }
}

/// `exp(-beta H) / Tr exp(-beta H)`; at T = 0 the uniform mixture over the
/// ground manifold.
pub fn thermal_state(h: &HermitianOperator, t: Temperature) -> DensityMatrix {
    let spec = h.spectrum();
    let e_min = spec.values[0];
    let weights: Vec<f64> = match t {
        Temperature::Finite { beta } => spec.values.iter().map(|&e| (-beta * (e - e_min)).exp()).collect(),
        Temperature::Zero => spec
            .values
            .iter()
            .map(|&e| if e - e_min <= DEGENERACY_TOL { 1.0 } else { 0.0 })
            .collect(),
    };
    let z: f64 = weights.iter().sum();
    let p: Vec<f64> = weights.iter().map(|w| w / z).collect();
    DensityMatrix::from_weighted_columns(&spec.vectors, &p)
}

/// `ln Tr exp(-beta H)`, shifted by the ground energy to stay finite.
pub fn log_partition(h: &HermitianOperator, beta: f64) -> f64 {
    let values = h.spectrum().values;
    let e_min = values[0];
    let shifted: f64 = values.iter().map(|&e| (-beta * (e - e_min)).exp()).sum();
    -beta * e_min + shifted.ln()
}

/// `F(rho, H) = Tr(H rho) - T S(rho)`; at T = 0 the mean energy.
pub fn free_energy(rho: &DensityMatrix, h: &HermitianOperator, t: Temperature) -> Result<f64> {
    let energy = h.expectation(rho)?;
    match t {
        Temperature::Finite { beta } => Ok(energy - von_neumann_entropy(rho, LogBase::Natural)? / beta),
        Temperature::Zero => Ok(energy),
    }
}

/// `Delta F(rho, H) = F(rho, H) - F(rho_th, H)`.
pub fn delta_f(rho: &DensityMatrix, h: &HermitianOperator, t: Temperature) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: h.dim() });
    }
    let th = thermal_state(h, t);
    Ok(free_energy(rho, h, t)? - free_energy(&th, h, t)?)
}
