//! Classical access structure of the graph scheme.
//!
//! A player set `B` is authorized exactly when it contains an odd-size set
//! `D` with `Odd(D) ⊆ B`. Finding such a `D` is an affine system over GF(2)
//! in the indicator variables of `B`:
//!
//! * for every `u ∉ B`, `|N(u) ∩ D|` is even;
//! * `|D|` is odd.
//!
//! When that system has no solution, the set is forbidden and a dual
//! witness exists: some `C ⊆ V \ B` with `Odd(C) ⊇ B`. The dual witness is
//! found by its own system, so every verdict carries a certificate that can
//! be checked with plain set operations.

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::BitVec;
use crate::gf2::Bf2Matrix;
use crate::graph::{Graph, GraphError, VertexSet};

/// Largest order accepted by [`enumerate_access_structure`].
pub const ENUMERATION_MAX_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AccessError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has {n} vertices; exhaustive enumeration is capped at {max}")]
    TooLarge { n: usize, max: usize },
    #[error("set {set} has neither a witness nor a dual witness")]
    DualityViolation { set: VertexSet },
    #[error("solver returned an invalid witness {witness} for set {set}: {defect}")]
    InvalidWitness {
        set: VertexSet,
        witness: VertexSet,
        defect: WitnessDefect,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WitnessDefect {
    #[error("witness is not contained in the player set")]
    NotInSet,
    #[error("witness has even cardinality")]
    EvenSize,
    #[error("odd-neighbourhood of the witness leaves the player set")]
    OddNeighbourhoodEscapes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AccessStatus {
    Authorized,
    Forbidden,
}

/// Certificate attached to an [`AccessVerdict`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    /// `D ⊆ B`, `|D|` odd, `Odd(D) ⊆ B`.
    Authorized { d: VertexSet },
    /// `C ⊆ V \ B`, `Odd(C) ⊇ B`.
    Forbidden { c: VertexSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AccessVerdict {
    pub set: VertexSet,
    pub witness: Witness,
}

impl AccessVerdict {
    pub fn status(&self) -> AccessStatus {
        match self.witness {
            Witness::Authorized { .. } => AccessStatus::Authorized,
            Witness::Forbidden { .. } => AccessStatus::Forbidden,
        }
    }

    pub fn is_authorized(&self) -> bool {
        self.status() == AccessStatus::Authorized
    }

    pub fn witness_d(&self) -> Option<&VertexSet> {
        match &self.witness {
            Witness::Authorized { d } => Some(d),
            Witness::Forbidden { .. } => None,
        }
    }

    pub fn dual_witness_c(&self) -> Option<&VertexSet> {
        match &self.witness {
            Witness::Forbidden { c } => Some(c),
            Witness::Authorized { .. } => None,
        }
    }
}

/// Checks `D ⊆ B`, `|D|` odd and `Odd(D) ⊆ B` directly on sets.
pub fn check_witness(g: &Graph, b: &VertexSet, d: &VertexSet) -> Result<(), WitnessDefect> {
    if !d.is_subset(b) {
        return Err(WitnessDefect::NotInSet);
    }
    if d.len().is_multiple_of(2) {
        return Err(WitnessDefect::EvenSize);
    }
    let odd = g
        .odd_neighbourhood(d)
        .map_err(|_| WitnessDefect::NotInSet)?;
    if !odd.is_subset(b) {
        return Err(WitnessDefect::OddNeighbourhoodEscapes);
    }
    Ok(())
}

/// Checks `C ⊆ V \ B` and `Odd(C) ⊇ B` directly on sets.
pub fn check_dual_witness(g: &Graph, b: &VertexSet, c: &VertexSet) -> bool {
    c.intersection(b).is_empty()
        && g.odd_neighbourhood(c)
            .map(|odd| b.is_subset(&odd))
            .unwrap_or(false)
}

/// A single adjacency bit flipped while building the witness system: the
/// parity row for vertex `row` gets column `col` toggled. Only used to
/// show that the audits detect a broken decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjacencyFault {
    pub row: usize,
    pub col: usize,
}

/// Decides c-accessibility by solving the witness system over GF(2).
///
/// The default decider is exact. [`AccessDecider::with_fault`] builds a
/// deliberately broken one for negative-control runs of the audits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AccessDecider {
    fault: Option<AdjacencyFault>,
}

impl AccessDecider {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn with_fault(fault: AdjacencyFault) -> Self {
        Self { fault: Some(fault) }
    }

    pub fn fault(&self) -> Option<AdjacencyFault> {
        self.fault
    }

    /// Variables are the members of `b` in increasing order.
    fn witness_system(&self, g: &Graph, b: &VertexSet) -> (Bf2Matrix, BitVec, Vec<usize>) {
        let members: Vec<usize> = b.iter().collect();
        let cols = members.len();
        let mut m = Bf2Matrix::zeros(0, cols);
        let mut rhs = Vec::new();
        for u in (0..g.order()).filter(|&u| !b.contains(u)) {
            let nu = g.neighbourhood(u).expect("u < n");
            let mut row = BitVec::zeros(cols);
            for (j, &v) in members.iter().enumerate() {
                let mut bit = nu.contains(v);
                if self.fault == Some(AdjacencyFault { row: u, col: v }) {
                    bit = !bit;
                }
                row.set(j, bit);
            }
            m.push_row(row).expect("row width matches");
            rhs.push(false);
        }
        m.push_row(BitVec::ones(cols)).expect("row width matches");
        rhs.push(true);
        (m, BitVec::from_bools(rhs), members)
    }

    /// The canonical witness `D` (free variables zero), if one exists.
    pub fn find_witness(&self, g: &Graph, b: &VertexSet) -> Result<Option<VertexSet>, AccessError> {
        g.check_set(b)?;
        let (m, rhs, members) = self.witness_system(g, b);
        let solution = m.solve_affine(&rhs).expect("rhs sized to rows");
        Ok(solution.map(|sol| {
            VertexSet::from_vertices(g.order(), sol.particular.iter_ones().map(|j| members[j]))
                .expect("members are vertices")
        }))
    }

    /// Status only, without the dual witness or any certificate checks.
    pub fn status(&self, g: &Graph, b: &VertexSet) -> Result<AccessStatus, AccessError> {
        Ok(match self.find_witness(g, b)? {
            Some(_) => AccessStatus::Authorized,
            None => AccessStatus::Forbidden,
        })
    }

    /// Full verdict with a checked certificate.
    pub fn decide(&self, g: &Graph, b: &VertexSet) -> Result<AccessVerdict, AccessError> {
        match self.find_witness(g, b)? {
            Some(d) => {
                check_witness(g, b, &d).map_err(|defect| AccessError::InvalidWitness {
                    set: b.clone(),
                    witness: d.clone(),
                    defect,
                })?;
                Ok(AccessVerdict {
                    set: b.clone(),
                    witness: Witness::Authorized { d },
                })
            }
            None => match find_dual_witness(g, b)? {
                Some(c) => Ok(AccessVerdict {
                    set: b.clone(),
                    witness: Witness::Forbidden { c },
                }),
                None => Err(AccessError::DualityViolation { set: b.clone() }),
            },
        }
    }

    pub fn enumerate(
        &self,
        g: &Graph,
        with_witnesses: bool,
    ) -> Result<AccessStructure, AccessError> {
        let n = g.order();
        if n > ENUMERATION_MAX_ORDER {
            return Err(AccessError::TooLarge {
                n,
                max: ENUMERATION_MAX_ORDER,
            });
        }
        let subsets = 1u64 << n;
        let words = subsets.div_ceil(64) as usize;
        let authorized = (0..words)
            .into_par_iter()
            .map(|w| {
                let start = w as u64 * 64;
                let end = (start + 64).min(subsets);
                let mut word = 0u64;
                for mask in start..end {
                    let b = VertexSet::from_mask(n, mask);
                    if self.status(g, &b)? == AccessStatus::Authorized {
                        word |= 1 << (mask - start);
                    }
                }
                Ok(word)
            })
            .collect::<Result<Vec<u64>, AccessError>>()?;
        let verdicts = if with_witnesses {
            Some(
                (0..subsets)
                    .into_par_iter()
                    .map(|mask| self.decide(g, &VertexSet::from_mask(n, mask)))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        } else {
            None
        };
        Ok(AccessStructure {
            n,
            authorized,
            verdicts,
        })
    }
}

/// Decides whether `b` is c-accessing, with a witness `D` or a dual witness `C`.
pub fn is_c_accessing(g: &Graph, b: &VertexSet) -> Result<AccessVerdict, AccessError> {
    AccessDecider::exact().decide(g, b)
}

/// Some `C ⊆ V \ B` with `Odd(C) ⊇ B`, from the system
/// `|N(u) ∩ C|` odd for every `u ∈ B` in the indicator variables of `V \ B`.
pub fn find_dual_witness(g: &Graph, b: &VertexSet) -> Result<Option<VertexSet>, AccessError> {
    g.check_set(b)?;
    let outside: Vec<usize> = b.complement().iter().collect();
    let cols = outside.len();
    let mut m = Bf2Matrix::zeros(0, cols);
    for u in b.iter() {
        let nu = g.neighbourhood(u)?;
        let row = BitVec::from_bools(outside.iter().map(|&v| nu.contains(v)));
        m.push_row(row).expect("row width matches");
    }
    let rhs = BitVec::ones(m.rows());
    let solution = m.solve_affine(&rhs).expect("rhs sized to rows");
    Ok(solution.map(|sol| {
        VertexSet::from_vertices(g.order(), sol.particular.iter_ones().map(|j| outside[j]))
            .expect("outside members are vertices")
    }))
}

/// Enumerates the verdict of every subset of the vertices. Capped at
/// [`ENUMERATION_MAX_ORDER`] vertices.
pub fn enumerate_access_structure(
    g: &Graph,
    with_witnesses: bool,
) -> Result<AccessStructure, AccessError> {
    AccessDecider::exact().enumerate(g, with_witnesses)
}

/// `b` is authorized and dropping any single member makes it forbidden.
pub fn is_minimal_authorized(g: &Graph, b: &VertexSet) -> Result<bool, AccessError> {
    let decider = AccessDecider::exact();
    if decider.status(g, b)? != AccessStatus::Authorized {
        return Ok(false);
    }
    for v in b.iter() {
        let mut smaller = b.clone();
        smaller.remove(v);
        if decider.status(g, &smaller)? == AccessStatus::Authorized {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Status of every subset of an `n`-vertex graph, indexed by subset mask
/// (bit `v` set means vertex `v` is in the set). One bit per subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessStructure {
    n: usize,
    authorized: Vec<u64>,
    verdicts: Option<Vec<AccessVerdict>>,
}

impl AccessStructure {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn subset_count(&self) -> u64 {
        1u64 << self.n
    }

    pub fn is_authorized(&self, mask: u64) -> bool {
        assert!(mask < self.subset_count(), "subset mask out of range");
        (self.authorized[(mask / 64) as usize] >> (mask % 64)) & 1 == 1
    }

    pub fn status(&self, mask: u64) -> AccessStatus {
        if self.is_authorized(mask) {
            AccessStatus::Authorized
        } else {
            AccessStatus::Forbidden
        }
    }

    /// Present only when enumerated with witnesses.
    pub fn verdict(&self, mask: u64) -> Option<&AccessVerdict> {
        self.verdicts.as_ref().map(|v| &v[mask as usize])
    }

    pub fn verdicts(&self) -> Option<&[AccessVerdict]> {
        self.verdicts.as_deref()
    }

    pub fn authorized_count(&self) -> u64 {
        self.authorized
            .iter()
            .map(|w| u64::from(w.count_ones()))
            .sum()
    }

    pub fn forbidden_count(&self) -> u64 {
        self.subset_count() - self.authorized_count()
    }

    /// Authorized masks in increasing order.
    pub fn authorized_masks(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.subset_count()).filter(|&m| self.is_authorized(m))
    }

    pub fn is_minimal(&self, mask: u64) -> bool {
        self.is_authorized(mask) && BitIter(mask).all(|v| !self.is_authorized(mask & !(1 << v)))
    }

    /// Minimal authorized sets, ordered by cardinality then mask.
    pub fn minimal_authorized(&self) -> Vec<VertexSet> {
        let mut masks: Vec<u64> = self
            .authorized_masks()
            .filter(|&m| self.is_minimal(m))
            .collect();
        masks.sort_by_key(|&m| (m.count_ones(), m));
        masks
            .into_iter()
            .map(|m| VertexSet::from_mask(self.n, m))
            .collect()
    }

    /// Every one-element extension of an authorized set is authorized.
    pub fn is_monotone(&self) -> bool {
        self.authorized_masks()
            .all(|m| (0..self.n).all(|v| self.is_authorized(m | (1 << v))))
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz)
    }
}
