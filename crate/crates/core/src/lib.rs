//! Work extraction from coupling two quantum systems through a shared bath:
//! finite-dimensional thermodynamics, the four-stroke switching protocol,
//! an exactly solved quantum Rabi model and a discrete toy model.

pub mod error;
pub mod matfile;
pub mod protocol;
pub mod quantum;
pub mod rabi;
pub mod random;
pub mod sweep;
pub mod thermo;
pub mod toymodel;

pub use error::{Error, Result};
pub use protocol::{efficiency, run_protocol, BipartiteSystem, ProtocolLedger};
pub use quantum::{
    partial_trace, relative_entropy, tensor_product, von_neumann_entropy, DensityMatrix, HermitianOperator,
    HilbertDims, LogBase, Operator, Subsystem,
};
pub use rabi::{ground_energy, ground_state, work_report, RabiParams, WorkReport};
pub use thermo::{delta_f, free_energy, thermal_state, Temperature};
pub use toymodel::{toy_closed_form, toy_to_matrices, ToyModelParams};
