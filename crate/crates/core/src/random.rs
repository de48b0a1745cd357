//! Random operators and states for property tests and sampling studies.

use nalgebra::QR;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::quantum::{CMatrix, CVector, DensityMatrix, HermitianOperator, Operator, C64};

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre(rng: &mut impl Rng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| gaussian(rng))
}

/// Hermitian matrix with spectral norm of order `scale` (GUE, rescaled).
pub fn hermitian(rng: &mut impl Rng, d: usize, scale: f64) -> HermitianOperator {
    let g = ginibre(rng, d);
    let h = (&g + g.adjoint()).scale(0.5);
    let norm = h.norm().max(f64::MIN_POSITIVE);
    HermitianOperator::from_matrix_unchecked(h.scale(scale / norm * (d as f64).sqrt()))
}

/// Full-rank mixed state drawn from the Hilbert-Schmidt ensemble.
pub fn density_matrix(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    let g = ginibre(rng, d);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m.unscale(tr);
    DensityMatrix::from_matrix_unchecked((&m + m.adjoint()).scale(0.5))
}

pub fn pure_state(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    let v = CVector::from_fn(d, |_, _| gaussian(rng));
    DensityMatrix::pure(&v).expect("gaussian vector is non-zero")
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase fix).
pub fn unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let qr = QR::new(ginibre(rng, d));
    let q = qr.q();
    let r = qr.r();
    let mut u = q.clone();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            u[(i, j)] = q[(i, j)] * phase;
        }
    }
    u
}
