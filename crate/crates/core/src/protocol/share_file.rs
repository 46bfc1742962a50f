//! JSON share files.
//!
//! ```json
//! { "n": 5, "graph_edges": [[0,1],[1,2]], "graph_hash": "…", "seed": 7,
//!   "rng_algorithm": "…", "shares": [{"player": 0, "k": 0, "c": 1}] }
//! ```
//!
//! `graph_hash` is the lowercase hex SHA-256 of the graph's canonical edge
//! list (see [`Graph::to_edge_list`]). The secret is only written when the
//! dealer explicitly asks for it.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ProtocolError, Secret, Share, ShareTable, KEY_RNG_ALGORITHM};
use crate::graph::Graph;

/// Hex SHA-256 of the canonical edge list.
pub fn graph_hash(g: &Graph) -> String {
    Sha256::digest(g.to_edge_list().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareRecord {
    pub player: usize,
    pub k: u8,
    pub c: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareFile {
    pub n: usize,
    pub graph_edges: Vec<[usize; 2]>,
    pub graph_hash: String,
    pub seed: Option<u64>,
    #[serde(default)]
    pub rng_algorithm: Option<String>,
    pub shares: Vec<ShareRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<u8>,
}

impl ShareFile {
    /// `seed` is `None` when the keys were supplied explicitly.
    pub fn new(g: &Graph, table: &ShareTable, seed: Option<u64>) -> Self {
        Self {
            n: g.order(),
            graph_edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            graph_hash: graph_hash(g),
            seed,
            rng_algorithm: seed.map(|_| KEY_RNG_ALGORITHM.to_string()),
            shares: table
                .shares()
                .iter()
                .enumerate()
                .map(|(player, s)| ShareRecord {
                    player,
                    k: u8::from(s.k),
                    c: u8::from(s.c),
                })
                .collect(),
            secret: None,
        }
    }

    /// Testing aid: embeds the secret in the file.
    pub fn reveal(mut self, secret: Secret) -> Self {
        self.secret = Some(secret.bit());
        self
    }

    /// Rebuilds the dealer's graph from `graph_edges`, checking it against `graph_hash`.
    pub fn graph(&self) -> Result<Graph, ProtocolError> {
        let g = Graph::from_edges(self.n, self.graph_edges.iter().map(|&[u, v]| (u, v)))
            .map_err(|e| ProtocolError::MalformedShareFile(e.to_string()))?;
        let actual = graph_hash(&g);
        if actual != self.graph_hash {
            return Err(ProtocolError::GraphMismatch {
                expected: self.graph_hash.clone(),
                found: actual,
            });
        }
        Ok(g)
    }

    /// Fails with [`ProtocolError::GraphMismatch`] unless the file was dealt on `g`.
    pub fn verify_graph(&self, g: &Graph) -> Result<(), ProtocolError> {
        let dealt = self.graph()?;
        if dealt != *g {
            return Err(ProtocolError::GraphMismatch {
                expected: graph_hash(g),
                found: self.graph_hash.clone(),
            });
        }
        Ok(())
    }

    pub fn share_table(&self) -> Result<ShareTable, ProtocolError> {
        let bad = |msg: String| ProtocolError::MalformedShareFile(msg);
        if self.shares.len() != self.n {
            return Err(bad(format!(
                "{} shares for {} players",
                self.shares.len(),
                self.n
            )));
        }
        let mut shares = vec![None; self.n];
        for rec in &self.shares {
            if rec.player >= self.n {
                return Err(bad(format!("player {} out of range", rec.player)));
            }
            if rec.k > 1 || rec.c > 1 {
                return Err(bad(format!(
                    "share of player {} is not a pair of bits",
                    rec.player
                )));
            }
            if shares[rec.player].is_some() {
                return Err(bad(format!("duplicate share for player {}", rec.player)));
            }
            shares[rec.player] = Some(Share {
                k: rec.k == 1,
                c: rec.c == 1,
            });
        }
        Ok(ShareTable::from_shares(
            shares
                .into_iter()
                .map(|s| s.expect("every player present"))
                .collect(),
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("share file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ProtocolError> {
        serde_json::from_str(text).map_err(|e| ProtocolError::MalformedShareFile(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{make_shares, sample_keys};

    #[test]
    fn round_trip_preserves_table() {
        let g = Graph::cycle(5);
        let table = make_shares(&g, Secret::ONE, &sample_keys(5, 3)).unwrap();
        let file = ShareFile::new(&g, &table, Some(3));
        let back = ShareFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.share_table().unwrap(), table);
        back.verify_graph(&g).unwrap();
        assert!(!file.to_json().contains("secret"));
        assert!(file
            .clone()
            .reveal(Secret::ONE)
            .to_json()
            .contains("\"secret\": 1"));
    }

    #[test]
    fn other_graph_rejected() {
        let g = Graph::path(5);
        let table = make_shares(&g, Secret::ONE, &sample_keys(5, 3)).unwrap();
        let file = ShareFile::new(&g, &table, None);
        assert!(matches!(
            file.verify_graph(&Graph::cycle(5)),
            Err(ProtocolError::GraphMismatch { .. })
        ));
        let mut tampered = file.clone();
        tampered.graph_edges.pop();
        assert!(matches!(
            tampered.graph(),
            Err(ProtocolError::GraphMismatch { .. })
        ));
    }

    #[test]
    fn hash_ignores_edge_input_order() {
        let a = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let b = Graph::from_edges(4, [(3, 2), (1, 0)]).unwrap();
        assert_eq!(graph_hash(&a), graph_hash(&b));
        assert_ne!(graph_hash(&a), graph_hash(&Graph::path(4)));
        assert_eq!(graph_hash(&a).len(), 64);
    }

    #[test]
    fn malformed_shares_rejected() {
        let g = Graph::path(3);
        let table = make_shares(&g, Secret::ZERO, &sample_keys(3, 1)).unwrap();
        let mut file = ShareFile::new(&g, &table, Some(1));
        file.shares[1].k = 2;
        assert!(file.share_table().is_err());
        let mut file = ShareFile::new(&g, &table, Some(1));
        file.shares[2].player = 0;
        assert!(file.share_table().is_err());
        assert!(ShareFile::from_json("{").is_err());
    }
}
