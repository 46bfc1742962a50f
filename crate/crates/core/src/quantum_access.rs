//! Access structures of graph-state quantum secret sharing, derived
//! combinatorially from the classical scheme.
//!
//! With a classical secret the quantum scheme on `G` has exactly the
//! classical access structure of `G`. With a quantum secret, `B` is
//! authorized iff it is c-accessing in both `G` and its complement graph,
//! equivalently iff `B` is c-accessing in `G` and `V \ B` is not. Both
//! characterizations are computed on every query and must agree.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::access::{is_c_accessing, AccessError, AccessStatus, AccessVerdict};
use crate::graph::{Graph, VertexSet};

/// Largest order accepted by [`no_cloning_audit`].
pub const QUANTUM_AUDIT_MAX_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error(transparent)]
    Access(#[from] AccessError),
    #[error(
        "reduction routes disagree on {set}: graph/complement-graph route says {via_complement_graph:?}, \
         set/complement-set route says {via_complement_set:?}"
    )]
    RouteDisagreement {
        set: VertexSet,
        via_complement_graph: QuantumStatus,
        via_complement_set: QuantumStatus,
    },
    #[error("graph has {n} vertices; exhaustive audit is capped at {max}")]
    TooLarge { n: usize, max: usize },
}

/// Only authorization is characterized for quantum secrets, so there is no
/// "forbidden" value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum QuantumStatus {
    Authorized,
    NotAuthorized,
}

impl From<bool> for QuantumStatus {
    fn from(authorized: bool) -> Self {
        if authorized {
            Self::Authorized
        } else {
            Self::NotAuthorized
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumVerdict {
    pub set: VertexSet,
    /// Verdict for a classical secret.
    pub classical_status: AccessStatus,
    /// Verdict for a quantum secret.
    pub quantum_status: QuantumStatus,
    /// `B` in `G`.
    pub in_graph: AccessVerdict,
    /// `B` in the complement graph.
    pub in_complement_graph: AccessVerdict,
    /// `V \ B` in `G`.
    pub complement_set: AccessVerdict,
}

/// Classical-secret verdict: the classical access verdict of `b` in `g`.
pub fn gsqss_classical_verdict(g: &Graph, b: &VertexSet) -> Result<AccessVerdict, AccessError> {
    is_c_accessing(g, b)
}

/// Quantum-secret verdict, computed by both reduction routes.
pub fn gsqss_quantum_verdict(g: &Graph, b: &VertexSet) -> Result<QuantumVerdict, QuantumError> {
    let in_graph = is_c_accessing(g, b)?;
    let in_complement_graph = is_c_accessing(&g.complement(), b)?;
    let complement_set = is_c_accessing(g, &b.complement())?;

    let via_complement_graph =
        QuantumStatus::from(in_graph.is_authorized() && in_complement_graph.is_authorized());
    let via_complement_set =
        QuantumStatus::from(in_graph.is_authorized() && !complement_set.is_authorized());
    if via_complement_graph != via_complement_set {
        return Err(QuantumError::RouteDisagreement {
            set: b.clone(),
            via_complement_graph,
            via_complement_set,
        });
    }
    Ok(QuantumVerdict {
        set: b.clone(),
        classical_status: in_graph.status(),
        quantum_status: via_complement_graph,
        in_graph,
        in_complement_graph,
        complement_set,
    })
}

/// Exhaustive consistency report over all subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantumAudit {
    pub n: usize,
    pub subsets: u64,
    pub quantum_authorized: u64,
    pub classical_authorized: u64,
    /// Sets on which the two reduction routes disagree.
    pub route_disagreements: Vec<Vec<usize>>,
    /// Pairs `(B, V \ B)` that are both quantum-authorized, listed once with `0 ∈ B`.
    pub complement_violations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl QuantumAudit {
    pub fn is_clean(&self) -> bool {
        self.route_disagreements.is_empty() && self.complement_violations.is_empty()
    }
}

/// Checks route agreement for every subset and that no set and its
/// complement are both quantum-authorized.
pub fn no_cloning_audit(g: &Graph) -> Result<QuantumAudit, QuantumError> {
    let n = g.order();
    if n > QUANTUM_AUDIT_MAX_ORDER {
        return Err(QuantumError::TooLarge {
            n,
            max: QUANTUM_AUDIT_MAX_ORDER,
        });
    }
    let subsets = 1u64 << n;
    let results: Vec<(Option<QuantumStatus>, AccessStatus)> = (0..subsets)
        .into_par_iter()
        .map(|mask| {
            let b = VertexSet::from_mask(n, mask);
            match gsqss_quantum_verdict(g, &b) {
                Ok(v) => Ok((Some(v.quantum_status), v.classical_status)),
                Err(QuantumError::RouteDisagreement { .. }) => {
                    Ok((None, is_c_accessing(g, &b)?.status()))
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_, QuantumError>>()?;

    let members = |mask: u64| VertexSet::from_mask(n, mask).iter().collect::<Vec<_>>();
    let full = subsets - 1;
    let mut audit = QuantumAudit {
        n,
        subsets,
        quantum_authorized: 0,
        classical_authorized: 0,
        route_disagreements: Vec::new(),
        complement_violations: Vec::new(),
    };
    for (mask, &(quantum, classical)) in results.iter().enumerate() {
        let mask = mask as u64;
        if classical == AccessStatus::Authorized {
            audit.classical_authorized += 1;
        }
        match quantum {
            None => audit.route_disagreements.push(members(mask)),
            Some(QuantumStatus::Authorized) => {
                audit.quantum_authorized += 1;
                let other = full & !mask;
                if mask & 1 == 1 && results[other as usize].0 == Some(QuantumStatus::Authorized) {
                    audit
                        .complement_violations
                        .push((members(mask), members(other)));
                }
            }
            Some(QuantumStatus::NotAuthorized) => {}
        }
    }
    Ok(audit)
}
