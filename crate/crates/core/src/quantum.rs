//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Composite spaces are always ordered A-major: the basis vector
//! `|i_A> (x) |i_B>` sits at index `i_A * d_B + i_B`. Every module and file
//! format in the crate relies on this.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Maximum entrywise `|M - M^dagger|` accepted for Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Maximum `|Tr rho - 1|` for a density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are rounding noise and get clipped to zero.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this contribute nothing to an entropy (`0 log 0 = 0`).
pub const ENTROPY_CUTOFF: f64 = 1e-14;
/// Eigenvalue threshold for support tests in the relative entropy.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Local dimensions of a bipartite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertDims {
    d_a: usize,
    d_b: usize,
}

impl HilbertDims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidParams(format!(
                "subsystem dimensions must be positive, got {d_a} x {d_b}"
            )));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn composite(&self) -> usize {
        self.d_a * self.d_b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Two,
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

fn eigh(m: &CMatrix) -> Spectrum {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Spectrum { values, vectors }
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn require_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::DimensionMismatch { left: m.nrows(), right: m.ncols() });
    }
    Ok(())
}

/// Common access to the square matrix behind operators and states.
pub trait Operator: Sized {
    fn matrix(&self) -> &CMatrix;

    /// Wraps a matrix that is already known to satisfy the type's invariants.
    #[doc(hidden)]
    fn from_matrix_unchecked(m: CMatrix) -> Self;

    fn dim(&self) -> usize {
        self.matrix().nrows()
    }
}

/// A Hermitian matrix; energies carry whatever unit the caller chose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl Operator for HermitianOperator {
    fn matrix(&self) -> &CMatrix {
        &self.0
    }

    fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self(m)
    }
}

impl HermitianOperator {
    /// Accepts `m` if it is Hermitian within [`HERMITIAN_TOL`]; the stored
    /// matrix is the exactly Hermitian part `(m + m^dagger) / 2`.
    pub fn new(m: CMatrix) -> Result<Self> {
        require_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self(hermitize(&m)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(CMatrix::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) }))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn spectrum(&self) -> Spectrum {
        eigh(&self.0)
    }

    /// `Re Tr(H rho)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        same_dim(self.dim(), rho.dim())?;
        Ok(trace_of_product(&self.0, rho.matrix()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.scale(factor))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }

    /// Embeds a local operator into the composite space: `H (x) 1` for A,
    /// `1 (x) H` for B.
    pub fn embed(&self, dims: HilbertDims, side: Subsystem) -> Result<Self> {
        let (expected, id) = match side {
            Subsystem::A => (dims.d_a(), CMatrix::identity(dims.d_b(), dims.d_b())),
            Subsystem::B => (dims.d_b(), CMatrix::identity(dims.d_a(), dims.d_a())),
        };
        same_dim(self.dim(), expected)?;
        Ok(Self(match side {
            Subsystem::A => self.0.kronecker(&id),
            Subsystem::B => id.kronecker(&self.0),
        }))
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl Operator for DensityMatrix {
    fn matrix(&self) -> &CMatrix {
        &self.0
    }

    fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self(m)
    }
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        require_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let m = hermitize(&m);
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let lowest = eigh(&m).values[0];
        if lowest < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self(m))
    }

    /// `|psi><psi|` for the normalized direction of `psi`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self(&v * v.adjoint()))
    }

    /// Diagonal state with the given populations.
    pub fn from_populations(p: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_fn(p.len(), p.len(), |i, j| {
            if i == j {
                C64::new(p[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim).unscale(dim as f64))
    }

    /// `sum_k w_k |v_k><v_k|` over columns of `vectors`; weights must be a
    /// probability vector.
    pub(crate) fn from_weighted_columns(vectors: &CMatrix, weights: &[f64]) -> Self {
        let n = vectors.nrows();
        let mut m = CMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let v = vectors.column(k);
            m += (&v * v.adjoint()).scale(w);
        }
        Self(hermitize(&m))
    }

    /// Eigenvalues ascending, clipped to be non-negative.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        clipped(eigh(&self.0).values)
    }
}

fn clipped(values: Vec<f64>) -> Result<Vec<f64>> {
    values
        .into_iter()
        .map(|p| {
            if p < -PSD_TOL {
                Err(Error::InvalidState(format!("negative eigenvalue {p:e}")))
            } else {
                Ok(p.max(0.0))
            }
        })
        .collect()
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// `Re Tr(X Y)` without forming the product.
pub(crate) fn trace_of_product(x: &CMatrix, y: &CMatrix) -> f64 {
    let n = x.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (x[(i, j)] * y[(j, i)]).re;
        }
    }
    acc
}

/// Kronecker product `x (x) y`, A-major.
pub fn tensor_product<T: Operator>(x: &T, y: &T) -> T {
    T::from_matrix_unchecked(x.matrix().kronecker(y.matrix()))
}

/// Reduced state on `keep`, tracing out the other factor.
pub fn partial_trace(rho: &DensityMatrix, dims: HilbertDims, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != dims.composite() {
        return Err(Error::IncompatibleBipartition { dim: rho.dim(), d_a: dims.d_a(), d_b: dims.d_b() });
    }
    let (da, db) = (dims.d_a(), dims.d_b());
    let m = rho.matrix();
    let reduced = match keep {
        // (i, j) entry is the trace of the (i, j) block of size d_B
        Subsystem::A => CMatrix::from_fn(da, da, |i, j| m.view((i * db, j * db), (db, db)).trace()),
        // sum of the diagonal blocks
        Subsystem::B => {
            let mut acc = CMatrix::zeros(db, db);
            for i in 0..da {
                acc += m.view((i * db, i * db), (db, db));
            }
            acc
        }
    };
    Ok(DensityMatrix(hermitize(&reduced)))
}

fn entropy_of(p: &[f64], base: LogBase) -> f64 {
    let nats: f64 = p.iter().filter(|&&x| x > ENTROPY_CUTOFF).map(|&x| -x * x.ln()).sum();
    match base {
        LogBase::Natural => nats.max(0.0),
        LogBase::Two => (nats / std::f64::consts::LN_2).max(0.0),
    }
}

/// `S(rho) = -Tr rho log rho`, from the eigenvalue spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix, base: LogBase) -> Result<f64> {
    Ok(entropy_of(&rho.eigenvalues()?, base))
}

/// `S(rho || sigma) = Tr rho log rho - Tr rho log sigma` in nats;
/// `+inf` when the support of `rho` is not inside the support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho.dim(), sigma.dim())?;
    let p = rho.eigenvalues()?;
    let neg_entropy = -entropy_of(&p, LogBase::Natural);

    let sig = eigh(sigma.matrix());
    let q = clipped(sig.values)?;
    let mut cross = 0.0;
    for (j, &qj) in q.iter().enumerate() {
        let v = sig.vectors.column(j);
        // <j| rho |j>
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if qj <= SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * qj.ln();
    }
    let s = neg_entropy - cross;
    // Klein's inequality; anything below zero here is rounding
    Ok(s.max(0.0))
}

/// Elementary operators. Qubit basis order is `|g> = 0`, `|e> = 1`; the
/// oscillator uses the truncated Fock basis `|0>, ..., |d - 1>`.
pub mod ops {
    use super::{CMatrix, C64};

    fn real(n: usize, f: impl Fn(usize, usize) -> f64) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| C64::new(f(i, j), 0.0))
    }

    pub fn identity(d: usize) -> CMatrix {
        CMatrix::identity(d, d)
    }

    /// `|e><e| - |g><g|`
    pub fn sigma_z() -> CMatrix {
        real(2, |i, j| match (i, j) {
            (0, 0) => -1.0,
            (1, 1) => 1.0,
            _ => 0.0,
        })
    }

    /// `|e><g| + |g><e|`
    pub fn sigma_x() -> CMatrix {
        real(2, |i, j| if i != j { 1.0 } else { 0.0 })
    }

    /// `|e><g|`
    pub fn sigma_plus() -> CMatrix {
        real(2, |i, j| if (i, j) == (1, 0) { 1.0 } else { 0.0 })
    }

    /// `|g><e|`
    pub fn sigma_minus() -> CMatrix {
        real(2, |i, j| if (i, j) == (0, 1) { 1.0 } else { 0.0 })
    }

    /// Truncated `a`: `a|n> = sqrt(n)|n-1>`.
    pub fn annihilation(d: usize) -> CMatrix {
        real(d, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
    }

    pub fn creation(d: usize) -> CMatrix {
        annihilation(d).adjoint()
    }

    pub fn number(d: usize) -> CMatrix {
        real(d, |i, j| if i == j { i as f64 } else { 0.0 })
    }
}
