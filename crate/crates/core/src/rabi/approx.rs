//! Closed-form approximate ground states at resonance, as coefficients on
//! the parity chain `|g,0>, |e,1>, |g,2>, ...`.

use super::RabiParams;
use crate::error::{Error, Result};

/// `|detuning|` below which the model counts as resonant.
pub const RESONANCE_TOL: f64 = 1e-12;

fn require_resonance(p: &RabiParams) -> Result<()> {
    if p.detuning().abs() > RESONANCE_TOL {
        return Err(Error::ResonanceRequired(p.detuning()));
    }
    Ok(())
}

/// Rotating-wave ground state: the bare `|g, 0>`.
pub fn jc_ground(params: RabiParams) -> Result<Vec<f64>> {
    require_resonance(&params)?;
    Ok(vec![1.0])
}

/// Second-order Bloch-Siegert ground state,
/// `(1 - L^2/2)|g,0> - L|e,1> + sqrt(2) L^2 |g,2>` with `L = g/2`, normalized.
pub fn bs_ground(params: RabiParams) -> Result<Vec<f64>> {
    require_resonance(&params)?;
    let l = params.coupling() / 2.0;
    let v = [1.0 - l * l / 2.0, -l, 2f64.sqrt() * l * l];
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(v.iter().map(|x| x / norm).collect())
}
