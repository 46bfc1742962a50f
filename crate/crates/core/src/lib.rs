//! Graph-based classical secret sharing.
//!
//! Every player `i` of a graph receives a random key bit `k_i` and the
//! secret bit masked by the keys of its neighbours,
//! `c_i = s + Σ_{j ∈ N(i)} k_j (mod 2)`. This crate runs that protocol,
//! decides which coalitions can recover the secret (with certificates
//! checkable by set operations), audits the information-theoretic claims by
//! exhaustive enumeration, and derives the access structures of the
//! corresponding graph-state quantum secret sharing schemes.

pub mod access;
pub mod bits;
pub mod gf2;
pub mod graph;
pub mod protocol;
pub mod quantum_access;
pub mod security_oracle;

pub use access::{
    enumerate_access_structure, find_dual_witness, is_c_accessing, is_minimal_authorized,
    AccessDecider, AccessError, AccessStatus, AccessStructure, AccessVerdict, Witness,
};
pub use bits::BitVec;
pub use gf2::{AffineSolution, Bf2Matrix};
pub use graph::{Graph, GraphError, VertexSet};
