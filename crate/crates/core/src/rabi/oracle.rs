//! Exact diagonalization of the truncated Rabi Hamiltonian.
//!
//! Basis ordering is qubit-major: `|q, n>` sits at index `q (N+1) + n`
//! with `q = 0` for `|g>` and `q = 1` for `|e>`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::RabiParams;
use crate::error::{Error, Result};

pub const ED_MIN_CUT: usize = 20;
/// Largest matrix dimension the oracle will build.
pub const ED_MAX_DIM: usize = 4096;
/// Ground energies at `N` and `2N` must agree this closely.
pub const ED_CONVERGENCE_TOL: f64 = 1e-10;
/// Below this gap the lowest two levels are treated as one doublet.
pub const ED_DEGENERACY_TOL: f64 = 1e-9;

/// Real symmetric `H = Delta sigma_z + n + g sigma_x (a + a^dagger)`.
pub fn rabi_matrix(params: RabiParams, n_cut: usize) -> DMatrix<f64> {
    let nb = n_cut + 1;
    let d = params.half_gap();
    let g = params.coupling();
    let mut h = DMatrix::zeros(2 * nb, 2 * nb);
    for n in 0..nb {
        h[(n, n)] = n as f64 - d;
        h[(nb + n, nb + n)] = n as f64 + d;
    }
    for n in 0..n_cut {
        let c = g * ((n + 1) as f64).sqrt();
        // <g,n+1| H |e,n> and <e,n+1| H |g,n>
        h[(n + 1, nb + n)] = c;
        h[(nb + n, n + 1)] = c;
        h[(nb + n + 1, n)] = c;
        h[(n, nb + n + 1)] = c;
    }
    h
}

#[derive(Debug, Clone)]
pub struct ExactDiagonalization {
    pub params: RabiParams,
    pub n_cut: usize,
    pub energy: f64,
    pub first_excited: f64,
    /// Ground energy at twice the cutoff, when that matrix fits.
    pub energy_doubled: Option<f64>,
    pub converged: bool,
    /// Lowest two levels closer than `ED_DEGENERACY_TOL`; the vector was
    /// projected onto the ground-parity sector.
    pub near_degenerate: bool,
    pub vector: DVector<f64>,
}

impl ExactDiagonalization {
    fn nb(&self) -> usize {
        self.n_cut + 1
    }

    pub fn h_a(&self) -> f64 {
        let nb = self.nb();
        let d = self.params.half_gap();
        (0..nb).map(|n| d * (self.vector[nb + n].powi(2) - self.vector[n].powi(2))).sum()
    }

    pub fn h_b(&self) -> f64 {
        let nb = self.nb();
        (0..nb).map(|n| n as f64 * (self.vector[n].powi(2) + self.vector[nb + n].powi(2))).sum()
    }

    pub fn h_i(&self) -> f64 {
        let nb = self.nb();
        let v = &self.vector;
        2.0 * self.params.coupling()
            * (0..self.n_cut)
                .map(|n| ((n + 1) as f64).sqrt() * (v[n + 1] * v[nb + n] + v[nb + n + 1] * v[n]))
                .sum::<f64>()
    }

    /// Coefficients on the parity chain `|g,0>, |e,1>, |g,2>, ...`, sign
    /// fixed so the first is non-negative.
    pub fn parity_coefficients(&self) -> Vec<f64> {
        let nb = self.nb();
        let mut c: Vec<f64> =
            (0..nb).map(|n| if n % 2 == 0 { self.vector[n] } else { self.vector[nb + n] }).collect();
        fix_sign(&mut c);
        c
    }

    /// Weight outside the parity chain; zero up to rounding for the ground state.
    pub fn off_chain_weight(&self) -> f64 {
        let nb = self.nb();
        (0..nb).map(|n| if n % 2 == 0 { self.vector[nb + n] } else { self.vector[n] }).map(|v| v * v).sum()
    }
}

pub(crate) fn fix_sign(c: &mut [f64]) {
    let pivot = if c[0] != 0.0 {
        c[0]
    } else {
        c.iter().copied().fold(0.0, |a: f64, b: f64| if b.abs() > a.abs() { b } else { a })
    };
    if pivot < 0.0 {
        c.iter_mut().for_each(|v| *v = -*v);
    }
}

fn lowest_two(h: DMatrix<f64>) -> (f64, f64) {
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    (ev[0], ev[1])
}

/// Diagonalize at cutoff `n_cut` and check convergence against `2 n_cut`.
pub fn exact_diag_oracle(params: RabiParams, n_cut: usize) -> Result<ExactDiagonalization> {
    if n_cut < ED_MIN_CUT {
        return Err(Error::InvalidParams(format!("Fock cutoff {n_cut} below the minimum {ED_MIN_CUT}")));
    }
    let dim = 2 * (n_cut + 1);
    if dim > ED_MAX_DIM {
        return Err(Error::MatrixTooLarge(format!("dimension {dim} exceeds {ED_MAX_DIM}")));
    }
    let eig = SymmetricEigen::new(rabi_matrix(params, n_cut));
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let (i0, i1) = (order[0], order[1]);
    let energy = eig.eigenvalues[i0];
    let first_excited = eig.eigenvalues[i1];
    let mut vector: DVector<f64> = eig.eigenvectors.column(i0).into_owned();
    let near_degenerate = first_excited - energy < ED_DEGENERACY_TOL;
    if near_degenerate {
        vector = project_ground_parity(&vector, &eig.eigenvectors.column(i1).into_owned(), n_cut + 1);
    }
    let doubled_dim = 2 * (2 * n_cut + 1);
    let energy_doubled =
        (doubled_dim <= ED_MAX_DIM).then(|| lowest_two(rabi_matrix(params, 2 * n_cut)).0);
    let converged = energy_doubled.is_some_and(|e| (e - energy).abs() < ED_CONVERGENCE_TOL);
    Ok(ExactDiagonalization { params, n_cut, energy, first_excited, energy_doubled, converged, near_degenerate, vector })
}

/// Project a two-dimensional eigenspace onto the sector containing `|g,0>`
/// (even Fock number with `|g>`, odd with `|e>`). Parity commutes with `H`,
/// so the chain part of either vector is the chain eigenvector; the larger
/// one is used.
fn project_ground_parity(v0: &DVector<f64>, v1: &DVector<f64>, nb: usize) -> DVector<f64> {
    let chain = |v: &DVector<f64>| {
        DVector::from_fn(v.len(), |i, _| {
            let on = if i < nb { i % 2 == 0 } else { (i - nb) % 2 == 1 };
            if on { v[i] } else { 0.0 }
        })
    };
    let (p0, p1) = (chain(v0), chain(v1));
    let p = if p0.norm() >= p1.norm() { p0 } else { p1 };
    let norm = p.norm();
    p / norm
}
