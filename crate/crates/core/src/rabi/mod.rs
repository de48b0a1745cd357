//! Quantum Rabi model `H = Delta sigma_z + a^dagger a + g sigma_x (a + a^dagger)`
//! with the oscillator frequency as the unit of energy.
//!
//! The ground state is obtained from Braak's analytic solution: the energy
//! is the lowest zero of `G_-`, and the Fock amplitudes follow from the
//! G-function coefficients at that root. A truncated exact diagonalization
//! is kept alongside as an independent oracle.

mod approx;
mod mp;
mod oracle;
mod report;
mod roots;
mod series;
mod state;

pub use approx::{bs_ground, jc_ground, RESONANCE_TOL};
pub use mp::working_precision;
pub use oracle::{exact_diag_oracle, rabi_matrix, ExactDiagonalization, ED_CONVERGENCE_TOL, ED_MAX_DIM, ED_MIN_CUT};
pub use report::{work_report, work_report_with, WorkReport, ENERGY_SPLIT_TOL};
pub use roots::{G_UNCOUPLED, SCAN_STEP};
pub use series::{g_function, BraakSeries, POLE_GUARD};
pub use state::{
    ground_energy, ground_energy_with, ground_state, ground_state_with, oracle_cutoff, RabiGroundState, SolveMethod,
    PARITY_CHECK_TOL,
};

use crate::error::{Error, Result};
use crate::protocol::BipartiteSystem;
use crate::quantum::{ops, tensor_product, HermitianOperator};

/// Default cap on the number of Fock levels in a reconstructed state.
pub const DEFAULT_FOCK_CAP: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiParams {
    half_gap: f64,
    coupling: f64,
}

impl RabiParams {
    /// `half_gap` is `Delta`, `coupling` is `g`, both in units of the
    /// oscillator frequency.
    pub fn new(half_gap: f64, coupling: f64) -> Result<Self> {
        if !(half_gap > 0.0) || !half_gap.is_finite() {
            return Err(Error::InvalidParams(format!("half gap must be positive and finite, got {half_gap}")));
        }
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::InvalidParams(format!("coupling must be non-negative and finite, got {coupling}")));
        }
        Ok(Self { half_gap, coupling })
    }

    /// From the detuning `delta = (2 Delta - omega) / omega`.
    pub fn from_detuning(detuning: f64, coupling: f64) -> Result<Self> {
        if !(detuning > -1.0) {
            return Err(Error::InvalidParams(format!("detuning must exceed -1, got {detuning}")));
        }
        Self::new((1.0 + detuning) / 2.0, coupling)
    }

    pub fn half_gap(&self) -> f64 {
        self.half_gap
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn detuning(&self) -> f64 {
        2.0 * self.half_gap - 1.0
    }

    /// The model as a qubit (A) and an oscillator truncated to `n_cut + 1`
    /// levels (B).
    pub fn truncated_system(&self, n_cut: usize) -> Result<BipartiteSystem> {
        let nb = n_cut + 1;
        let h_a = HermitianOperator::new(ops::sigma_z())?.scaled(self.half_gap);
        let h_b = HermitianOperator::new(ops::number(nb))?;
        let quadrature = HermitianOperator::new(ops::annihilation(nb) + ops::creation(nb))?;
        let h_i = tensor_product(&HermitianOperator::new(ops::sigma_x())?, &quadrature).scaled(self.coupling);
        BipartiteSystem::new(h_a, h_b, h_i)
    }
}

/// Sector label of the G-function; the ground state lives in `Minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub fock_cap: usize,
    /// Cross-check the ground energy against exact diagonalization.
    pub oracle_check: bool,
    /// Override the coupling-dependent working precision (bits).
    pub precision_bits: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { fock_cap: DEFAULT_FOCK_CAP, oracle_check: false, precision_bits: None }
    }
}
