//! The four-stroke work-extraction ledger on an arbitrary bipartite system.
//!
//! t1: A and B uncoupled, each in its local Gibbs state.
//! t2: interaction switched on instantly, state unchanged.
//! t3: A+B thermalized jointly under `H_0 + H_I`.
//! t4: interaction switched off instantly, state unchanged.

use crate::error::{Error, Result};
use crate::quantum::{
    partial_trace, tensor_product, von_neumann_entropy, HermitianOperator, HilbertDims, LogBase, Operator,
    Subsystem,
};
use crate::thermo::{delta_f, free_energy, thermal_state, Temperature};

/// Default upper bound on `d_A * d_B`.
pub const MAX_COMPOSITE_DIM: usize = 4096;

/// Relative tolerance of the two routes to W (`F4 - F1` and the
/// local-plus-correlation decomposition).
pub const WORK_CONSISTENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct BipartiteSystem {
    dims: HilbertDims,
    h_a: HermitianOperator,
    h_b: HermitianOperator,
    h_i: HermitianOperator,
}

impl BipartiteSystem {
    pub fn new(h_a: HermitianOperator, h_b: HermitianOperator, h_i: HermitianOperator) -> Result<Self> {
        let dims = HilbertDims::new(h_a.dim(), h_b.dim())?;
        if h_i.dim() != dims.composite() {
            return Err(Error::IncompatibleBipartition { dim: h_i.dim(), d_a: dims.d_a(), d_b: dims.d_b() });
        }
        Ok(Self { dims, h_a, h_b, h_i })
    }

    pub fn dims(&self) -> HilbertDims {
        self.dims
    }

    pub fn h_a(&self) -> &HermitianOperator {
        &self.h_a
    }

    pub fn h_b(&self) -> &HermitianOperator {
        &self.h_b
    }

    pub fn h_i(&self) -> &HermitianOperator {
        &self.h_i
    }

    /// `H_0 = H_A (x) 1 + 1 (x) H_B`.
    pub fn h0(&self) -> HermitianOperator {
        let a = self.h_a.embed(self.dims, Subsystem::A).expect("dims checked at construction");
        let b = self.h_b.embed(self.dims, Subsystem::B).expect("dims checked at construction");
        a.add(&b).expect("same composite dimension")
    }

    pub fn total(&self) -> HermitianOperator {
        self.h0().add(&self.h_i).expect("same composite dimension")
    }
}

/// Free energies and derived quantities for one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolLedger {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    /// `<H_I>` in the product state at t2.
    pub h_i_t2: f64,
    /// `<H_I>` in the joint thermal state at t3.
    pub h_i_t3: f64,
    /// `Delta F(rho_A^rth, H_A)`.
    pub delta_f_a: f64,
    /// `Delta F(rho_B^rth, H_B)`.
    pub delta_f_b: f64,
    /// Subadditivity defect `S(rho_A) + S(rho_B) - S(rho_S)` in nats.
    pub defect: f64,
    /// `W = F4 - F1`.
    pub work: f64,
    /// `W_l = Delta F_A + Delta F_B`.
    pub local_work: f64,
    /// `None` when no free energy needs to be spent on switching.
    pub eta: Option<f64>,
    pub eta_local: Option<f64>,
}

/// Ideal efficiencies `(eta, eta_l)`: stored work over the minimum free
/// energy spent switching the interaction on and off. `None` when that
/// denominator vanishes.
pub fn efficiency(work: f64, local_work: f64, h_i_t2: f64, h_i_t3: f64) -> Option<(f64, f64)> {
    let cost = h_i_t2.max(0.0) + (-h_i_t3).max(0.0);
    if cost > 0.0 {
        Some((work / cost, local_work / cost))
    } else {
        None
    }
}

pub fn run_protocol(sys: &BipartiteSystem, t: Temperature) -> Result<ProtocolLedger> {
    run_protocol_capped(sys, t, MAX_COMPOSITE_DIM)
}

pub fn run_protocol_capped(sys: &BipartiteSystem, t: Temperature, cap: usize) -> Result<ProtocolLedger> {
    let dims = sys.dims();
    if dims.composite() > cap {
        return Err(Error::DimensionCap { dim: dims.composite(), cap });
    }
    let h0 = sys.h0();
    let h = sys.total();

    let th_a = thermal_state(sys.h_a(), t);
    let th_b = thermal_state(sys.h_b(), t);
    let product = tensor_product(&th_a, &th_b);
    let joint = thermal_state(&h, t);
    let rth_a = partial_trace(&joint, dims, Subsystem::A)?;
    let rth_b = partial_trace(&joint, dims, Subsystem::B)?;

    let f1 = free_energy(&product, &h0, t)?;
    let f2 = free_energy(&product, &h, t)?;
    let f3 = free_energy(&joint, &h, t)?;
    let f4 = free_energy(&joint, &h0, t)?;
    let h_i_t2 = sys.h_i().expectation(&product)?;
    let h_i_t3 = sys.h_i().expectation(&joint)?;

    let s = |rho| von_neumann_entropy(rho, LogBase::Natural);
    let defect = s(&rth_a)? + s(&rth_b)? - s(&joint)?;
    let delta_f_a = delta_f(&rth_a, sys.h_a(), t)?;
    let delta_f_b = delta_f(&rth_b, sys.h_b(), t)?;

    let work = f4 - f1;
    let local_work = delta_f_a + delta_f_b;
    let decomposed = local_work + t.kt() * defect;
    let scale = 1f64.max(f1.abs()).max(f4.abs());
    if (work - decomposed).abs() > WORK_CONSISTENCY_TOL * scale {
        return Err(Error::LedgerInconsistent(format!(
            "F4 - F1 = {work} but Delta F_A + Delta F_B + T D = {decomposed}"
        )));
    }

    let (eta, eta_local) = match efficiency(work, local_work, h_i_t2, h_i_t3) {
        Some((e, el)) => (Some(e), Some(el)),
        None => (None, None),
    };
    Ok(ProtocolLedger {
        f1,
        f2,
        f3,
        f4,
        h_i_t2,
        h_i_t3,
        delta_f_a,
        delta_f_b,
        defect,
        work,
        local_work,
        eta,
        eta_local,
    })
}
