//! Brute-force dense operators: the independent ground truth.
//!
//! Exact dyadic-integer arithmetic covers everything generated by Heisenberg
//! couplings (matching operators, Casimir projectors); complex `f64` matrices
//! cover the valence-bond transfer maps, compared at 1e-10 tolerances; sparse
//! iteration covers star Hamiltonians.

pub mod cmat;
pub mod exact;
pub mod star;
pub mod transfer_map;

pub use exact::{
    casimir_dense, casimir_projectors_dense, heisenberg_op, matching_operator_dense,
    s_p_dense, sector_dimension, sector_multiplicity, ScaledMat, ScaledQMat, DENSE_CAP_M,
};
