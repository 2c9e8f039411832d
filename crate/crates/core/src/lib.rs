//! Fidelities between symmetric multiqubit states: maximal overlap of a
//! Dicke state with the symmetric product-type family, an explicit
//! counterexample built from local invertible operators, and a numerical
//! check that local unitary optimization may be restricted to `U^{⊗N}`.
//!
//! Qubit 0 is the most significant bit of every dense basis index.

pub mod binom;
pub mod cli;
pub mod counterexample;
pub mod error;
pub mod localops;
pub mod lu;
pub mod optimize;
pub mod state;
pub mod symfid;

pub use error::{Error, Result};
pub use localops::{a_matrix, apply_local, apply_tensor_power_sym, b_matrix, LocalOperator};
pub use state::{dicke, overlap, product_state, sym_to_dense, DenseState, Qubit, SymState};
pub use symfid::{
    closed_form_k1, limit_k1, max_f_dn1, max_sym_fidelity, ObjectiveParams, OptResult,
};
