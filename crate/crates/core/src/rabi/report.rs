//! Zero-temperature work extraction from the Rabi ground state.
//!
//! Qubit and oscillator start uncoupled in `|g, 0>`, the coupling is
//! switched on, the pair relaxes to the coupled ground state and the
//! coupling is switched off again. The stored work is the energy left in
//! `H_0` above its ground value.

use super::state::{ground_state_with, RabiGroundState, SolveMethod};
use super::{RabiParams, SolveOptions};
use crate::error::{Error, Result};

/// `<H_I>` computed directly must match `E0 - <H_A> - <H_B>` to this
/// fraction of `max(1, |E0|)`.
pub const ENERGY_SPLIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WorkReport {
    pub params: RabiParams,
    pub e0: f64,
    /// `<Delta sigma_z>` in the coupled ground state.
    pub h_a: f64,
    /// `<a^dagger a>` in the coupled ground state.
    pub h_b: f64,
    /// `<g sigma_x (a + a^dagger)>` in the coupled ground state.
    pub h_i: f64,
    pub work: f64,
    pub work_a: f64,
    pub work_b: f64,
    /// `None` when switching costs nothing (`<H_I> >= 0`, i.e. g = 0).
    pub eta: Option<f64>,
    pub eta_a: Option<f64>,
    pub eta_b: Option<f64>,
    /// Entanglement entropy of the qubit in bits.
    pub entanglement_bits: f64,
    pub n_fock: usize,
    pub method: SolveMethod,
}

fn binary_entropy_bits(p: f64) -> f64 {
    let h = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
    h(p.clamp(0.0, 1.0)) + h((1.0 - p).clamp(0.0, 1.0))
}

impl WorkReport {
    pub fn from_state(gs: &RabiGroundState) -> Result<Self> {
        let d = gs.params.half_gap();
        let g = gs.params.coupling();
        let c = &gs.c;
        let p_e = gs.excited_population();
        let h_a = d * (2.0 * p_e - 1.0);
        let h_b: f64 = c.iter().enumerate().map(|(n, v)| n as f64 * v * v).sum();
        let h_i = 2.0 * g * c.windows(2).enumerate().map(|(n, w)| ((n + 1) as f64).sqrt() * w[0] * w[1]).sum::<f64>();
        let residual = h_i - (gs.e0 - h_a - h_b);
        if residual.abs() > ENERGY_SPLIT_TOL * gs.e0.abs().max(1.0) {
            return Err(Error::ReconstructionInconsistent(format!(
                "<H_I> = {h_i} but E0 - <H_A> - <H_B> = {}",
                gs.e0 - h_a - h_b
            )));
        }
        let work_a = h_a + d;
        let work_b = h_b;
        let work = work_a + work_b;
        let cost = -h_i;
        let ratio = |w: f64| (cost > 0.0).then(|| w / cost);
        Ok(Self {
            params: gs.params,
            e0: gs.e0,
            h_a,
            h_b,
            h_i,
            work,
            work_a,
            work_b,
            eta: ratio(work),
            eta_a: ratio(work_a),
            eta_b: ratio(work_b),
            entanglement_bits: binary_entropy_bits(p_e),
            n_fock: gs.n_fock,
            method: gs.method,
        })
    }
}

pub fn work_report(params: RabiParams) -> Result<WorkReport> {
    work_report_with(params, &SolveOptions::default())
}

pub fn work_report_with(params: RabiParams, opts: &SolveOptions) -> Result<WorkReport> {
    WorkReport::from_state(&ground_state_with(params, opts)?)
}
