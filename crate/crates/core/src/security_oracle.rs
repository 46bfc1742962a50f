//! Exhaustive information-theoretic audit of the scheme.
//!
//! For a coalition `B`, the joint view `((k_i, c_i))_{i ∈ B}` is tallied over
//! all `2^n` equiprobable key vectors, separately for each secret bit. The
//! two tallies are integer counts over the common denominator `2^n`, so
//! "learns nothing" (identical distributions) and "decodes" (disjoint
//! supports) are decided exactly, with no floating point involved.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::access::{AccessDecider, AccessStatus};
use crate::graph::{Graph, GraphError, VertexSet};

/// Largest order accepted by [`view_distribution`] and [`classify_security`].
pub const VIEW_MAX_ORDER: usize = 20;
/// Largest order accepted by [`audit_perfectness`].
pub const AUDIT_MAX_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has {n} vertices; exhaustive key enumeration is capped at {max}")]
    TooLarge { n: usize, max: usize },
}

/// Every share table of `g` as `(key mask, ciphertext mask)`, indexed by
/// `secret * 2^n + key mask`.
fn all_share_tables(g: &Graph) -> Vec<(u64, u64)> {
    let n = g.order();
    let adj = g.adjacency_masks().expect("order checked by caller");
    let mut out = Vec::with_capacity(2 << n);
    for s in 0..2u64 {
        for k in 0..1u64 << n {
            let mut c = 0u64;
            for (i, &row) in adj.iter().enumerate() {
                let bit = s ^ u64::from((row & k).count_ones() & 1);
                c |= bit << i;
            }
            out.push((k, c));
        }
    }
    out
}

/// Packs the view of `members` into `2 * members.len()` bits: member `j`
/// (in increasing player order) contributes `k` at bit `2j` and `c` at bit
/// `2j + 1`.
pub fn encode_view(members: &[usize], keys: u64, ciphertexts: u64) -> u64 {
    members.iter().enumerate().fold(0u64, |acc, (j, &i)| {
        acc | ((keys >> i) & 1) << (2 * j) | ((ciphertexts >> i) & 1) << (2 * j + 1)
    })
}

/// Joint view of one coalition under each secret value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewDistribution {
    set: VertexSet,
    n: usize,
    counts: [BTreeMap<u64, u64>; 2],
}

impl ViewDistribution {
    fn tally(n: usize, set: &VertexSet, tables: &[(u64, u64)]) -> Self {
        let members: Vec<usize> = set.iter().collect();
        let per_secret = 1usize << n;
        let mut counts = [BTreeMap::new(), BTreeMap::new()];
        for (s, chunk) in tables.chunks(per_secret).enumerate() {
            for &(k, c) in chunk {
                *counts[s].entry(encode_view(&members, k, c)).or_insert(0u64) += 1;
            }
        }
        Self {
            set: set.clone(),
            n,
            counts,
        }
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }

    /// `2^n`, the number of key vectors behind each distribution.
    pub fn denominator(&self) -> u64 {
        1u64 << self.n
    }

    /// Observation counts for secret `secret` (0 or 1), keyed by [`encode_view`].
    pub fn counts(&self, secret: u8) -> &BTreeMap<u64, u64> {
        &self.counts[usize::from(secret)]
    }

    /// `P(view | s)` as an exact fraction.
    pub fn probability(&self, secret: u8, view: u64) -> Ratio<u64> {
        let count = self.counts(secret).get(&view).copied().unwrap_or(0);
        Ratio::new(count, self.denominator())
    }

    /// Sum of all probabilities for `secret`; exactly one by construction.
    pub fn total_probability(&self, secret: u8) -> Ratio<u64> {
        self.counts(secret)
            .values()
            .fold(Ratio::from_integer(0), |acc, &c| {
                acc + Ratio::new(c, self.denominator())
            })
    }

    pub fn is_identical(&self) -> bool {
        self.counts[0] == self.counts[1]
    }

    pub fn supports_disjoint(&self) -> bool {
        self.counts[0]
            .keys()
            .all(|v| !self.counts[1].contains_key(v))
    }

    /// `I(S; view)` in bits for a uniform secret, computed numerically.
    fn mutual_information_numeric(&self) -> f64 {
        let denom = self.denominator() as f64;
        let mut views: Vec<u64> = self.counts[0]
            .keys()
            .chain(self.counts[1].keys())
            .copied()
            .collect();
        views.sort_unstable();
        views.dedup();
        let mut info = 0.0;
        for v in views {
            let p0 = self.counts[0].get(&v).copied().unwrap_or(0) as f64 / denom;
            let p1 = self.counts[1].get(&v).copied().unwrap_or(0) as f64 / denom;
            let pv = 0.5 * (p0 + p1);
            for p in [p0, p1] {
                if p > 0.0 {
                    info += 0.5 * p * (p / pv).log2();
                }
            }
        }
        info
    }
}

/// Tallies the joint view of `b` over all key vectors and both secrets.
pub fn view_distribution(g: &Graph, b: &VertexSet) -> Result<ViewDistribution, OracleError> {
    check_order(g, VIEW_MAX_ORDER)?;
    g.check_set(b)?;
    Ok(ViewDistribution::tally(g.order(), b, &all_share_tables(g)))
}

fn check_order(g: &Graph, max: usize) -> Result<(), OracleError> {
    if g.order() > max {
        Err(OracleError::TooLarge { n: g.order(), max })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SecurityVerdict {
    PerfectlyHidden,
    Decodable,
    PartialLeak,
}

impl fmt::Display for SecurityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PerfectlyHidden => "PerfectlyHidden",
            Self::Decodable => "Decodable",
            Self::PartialLeak => "PartialLeak",
        })
    }
}

/// Mutual information in bits: exact when it is 0 or 1, numeric otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutualInformation {
    Exact(Ratio<u64>),
    Approx(f64),
}

impl MutualInformation {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Self::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Self::Approx(x) => x,
        }
    }
}

/// `p/q` for exact values, a 17-digit decimal otherwise.
impl fmt::Display for MutualInformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Self::Approx(x) => write!(f, "{x:.17}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecurityReport {
    pub set: VertexSet,
    pub verdict: SecurityVerdict,
    pub mutual_information: MutualInformation,
}

/// Classifies a tallied view. Equality and disjointness are checked on the
/// integer counts before any logarithm is taken.
pub fn classify_distribution(dist: &ViewDistribution) -> SecurityReport {
    let (verdict, mutual_information) = if dist.is_identical() {
        (
            SecurityVerdict::PerfectlyHidden,
            MutualInformation::Exact(Ratio::from_integer(0)),
        )
    } else if dist.supports_disjoint() {
        (
            SecurityVerdict::Decodable,
            MutualInformation::Exact(Ratio::from_integer(1)),
        )
    } else {
        (
            SecurityVerdict::PartialLeak,
            MutualInformation::Approx(dist.mutual_information_numeric()),
        )
    };
    SecurityReport {
        set: dist.set.clone(),
        verdict,
        mutual_information,
    }
}

pub fn classify_security(g: &Graph, b: &VertexSet) -> Result<SecurityReport, OracleError> {
    Ok(classify_distribution(&view_distribution(g, b)?))
}

/// One subset of a perfectness audit.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub set: VertexSet,
    pub report: SecurityReport,
    /// Status from the access module, or its error message.
    pub access: Result<AccessStatus, String>,
}

impl AuditRecord {
    /// Decodable iff authorized, PerfectlyHidden iff forbidden.
    pub fn matches_access_module(&self) -> bool {
        matches!(
            (self.report.verdict, &self.access),
            (SecurityVerdict::Decodable, Ok(AccessStatus::Authorized))
                | (
                    SecurityVerdict::PerfectlyHidden,
                    Ok(AccessStatus::Forbidden)
                )
        )
    }
}

#[derive(Serialize)]
struct AuditRecordJson {
    set: Vec<usize>,
    verdict: String,
    mutual_information_bits: String,
    matches_access_module: bool,
}

impl Serialize for AuditRecord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        AuditRecordJson {
            set: self.set.iter().collect(),
            verdict: self.report.verdict.to_string(),
            mutual_information_bits: self.report.mutual_information.to_string(),
            matches_access_module: self.matches_access_module(),
        }
        .serialize(serializer)
    }
}

/// Result of auditing every subset of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfectnessAudit {
    pub n: usize,
    /// Indexed by subset mask.
    pub records: Vec<AuditRecord>,
}

impl PerfectnessAudit {
    pub fn mismatches(&self) -> impl Iterator<Item = &AuditRecord> {
        self.records.iter().filter(|r| !r.matches_access_module())
    }

    pub fn mismatch_count(&self) -> usize {
        self.mismatches().count()
    }

    pub fn partial_leak_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.report.verdict == SecurityVerdict::PartialLeak)
            .count()
    }

    /// No partial leaks and full agreement with the access module.
    pub fn is_clean(&self) -> bool {
        self.partial_leak_count() == 0 && self.mismatch_count() == 0
    }
}

/// Audits every subset of `g` against the exact access decider.
pub fn audit_perfectness(g: &Graph) -> Result<PerfectnessAudit, OracleError> {
    audit_perfectness_with(g, &AccessDecider::exact())
}

/// Audits every subset of `g` against `decider`.
pub fn audit_perfectness_with(
    g: &Graph,
    decider: &AccessDecider,
) -> Result<PerfectnessAudit, OracleError> {
    check_order(g, AUDIT_MAX_ORDER)?;
    let n = g.order();
    let tables = all_share_tables(g);
    let records = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let set = VertexSet::from_mask(n, mask);
            let report = classify_distribution(&ViewDistribution::tally(n, &set, &tables));
            let access = decider.status(g, &set).map_err(|e| e.to_string());
            AuditRecord {
                set,
                report,
                access,
            }
        })
        .collect();
    Ok(PerfectnessAudit { n, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied()).unwrap()
    }

    #[test]
    fn empty_coalition_sees_one_empty_tuple() {
        let d = view_distribution(&Graph::path(5), &VertexSet::empty(5)).unwrap();
        for s in 0..2 {
            assert_eq!(d.counts(s).len(), 1);
            assert_eq!(d.probability(s, 0), Ratio::from_integer(1));
        }
        assert!(d.is_identical());
    }

    #[test]
    fn p5_single_player_views_match() {
        let d = view_distribution(&Graph::path(5), &set(5, &[1])).unwrap();
        assert!(d.is_identical());
        assert_eq!(d.total_probability(0), Ratio::from_integer(1));
        assert_eq!(d.total_probability(1), Ratio::from_integer(1));
    }

    #[test]
    fn k1_supports_disjoint() {
        let d = view_distribution(&Graph::empty(1), &set(1, &[0])).unwrap();
        assert!(d.supports_disjoint());
        // c = s always: views (k, c) encoded as k | c << 1
        assert_eq!(
            d.counts(0).keys().copied().collect::<Vec<_>>(),
            vec![0b00, 0b01]
        );
        assert_eq!(
            d.counts(1).keys().copied().collect::<Vec<_>>(),
            vec![0b10, 0b11]
        );
    }

    #[test]
    fn p5_classifications() {
        let g = Graph::path(5);
        let r = classify_security(&g, &set(5, &[0, 1])).unwrap();
        assert_eq!(r.verdict, SecurityVerdict::Decodable);
        assert_eq!(r.mutual_information.to_string(), "1/1");
        let r = classify_security(&g, &set(5, &[1, 3])).unwrap();
        assert_eq!(r.verdict, SecurityVerdict::PerfectlyHidden);
        assert_eq!(r.mutual_information.to_string(), "0/1");
    }

    #[test]
    fn empty_graph_classifications() {
        let g = Graph::empty(3);
        for mask in 0..8u64 {
            let r = classify_security(&g, &VertexSet::from_mask(3, mask)).unwrap();
            let expected = if mask == 0 {
                SecurityVerdict::PerfectlyHidden
            } else {
                SecurityVerdict::Decodable
            };
            assert_eq!(r.verdict, expected);
        }
    }

    #[test]
    fn partial_leak_is_detected_on_a_leaky_view() {
        // Hand-built distribution: view 0 under s=0 w.p. 1; under s=1 views 0/1 w.p. 1/2.
        let d = ViewDistribution {
            set: VertexSet::empty(1),
            n: 1,
            counts: [BTreeMap::from([(0, 2)]), BTreeMap::from([(0, 1), (1, 1)])],
        };
        let r = classify_distribution(&d);
        assert_eq!(r.verdict, SecurityVerdict::PartialLeak);
        // I = H(view) - H(view|S) = h(1/4) - 1/2
        let h = |p: f64| -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
        assert!((r.mutual_information.as_f64() - (h(0.25) - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn p5_audit_is_clean() {
        let audit = audit_perfectness(&Graph::path(5)).unwrap();
        assert_eq!(audit.records.len(), 32);
        assert!(audit.is_clean());
    }

    #[test]
    fn order_caps() {
        assert_eq!(
            view_distribution(&Graph::empty(21), &VertexSet::empty(21)).unwrap_err(),
            OracleError::TooLarge { n: 21, max: 20 }
        );
        assert!(matches!(
            audit_perfectness(&Graph::empty(13)),
            Err(OracleError::TooLarge { n: 13, max: 12 })
        ));
    }

    #[test]
    fn audit_record_json_shape() {
        let audit = audit_perfectness(&Graph::path(2)).unwrap();
        let json = serde_json::to_value(&audit.records[3]).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "set": [0, 1],
                "verdict": "Decodable",
                "mutual_information_bits": "1/1",
                "matches_access_module": true
            })
        );
    }
}
