//! The sharing protocol: key sampling, share generation and reconstruction.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::access::{check_witness, is_c_accessing, AccessError, Witness, WitnessDefect};
use crate::bits::BitVec;
use crate::graph::{Graph, GraphError, VertexSet};

pub mod share_file;

pub use share_file::{graph_hash, ShareFile, ShareRecord};

/// Identifier of the generator behind [`sample_keys`], recorded in share files.
pub const KEY_RNG_ALGORITHM: &str = "chacha20/rand_chacha-0.3/seed_from_u64";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Access(#[from] AccessError),
    #[error("key vector has length {found}, graph has {expected} vertices")]
    KeyLengthMismatch { expected: usize, found: usize },
    #[error("invalid witness {witness} for set {set}: {defect}")]
    InvalidWitness {
        set: VertexSet,
        witness: VertexSet,
        defect: WitnessDefect,
    },
    #[error("share of player {player} is required but missing")]
    MissingShare { player: usize },
    #[error("share of player {player} does not belong to the coalition")]
    ShareOutsideSet { player: usize },
    #[error("set {set} is not authorized")]
    NotAuthorized { set: VertexSet },
    #[error("share file was produced for graph {found}, expected {expected}")]
    GraphMismatch { expected: String, found: String },
    #[error("malformed share file: {0}")]
    MalformedShareFile(String),
}

/// A one-bit secret.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Secret(bool);

impl Secret {
    pub const ZERO: Secret = Secret(false);
    pub const ONE: Secret = Secret(true);

    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Self::ZERO),
            1 => Some(Self::ONE),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        u8::from(self.0)
    }

    pub fn as_bool(self) -> bool {
        self.0
    }
}

impl From<bool> for Secret {
    fn from(b: bool) -> Self {
        Secret(b)
    }
}

impl fmt::Display for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// One key bit per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KeyVector(BitVec);

impl KeyVector {
    pub fn new(bits: BitVec) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(BitVec::zeros(n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0.get(i)
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }
}

/// Parses a bitstring, player 0 first: `"01101"`.
impl FromStr for KeyVector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid key character {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|bits| Self(BitVec::from_bools(bits)))
    }
}

impl fmt::Display for KeyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `n` uniform key bits from ChaCha20 seeded with `seed`.
pub fn sample_keys(n: usize, seed: u64) -> KeyVector {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    KeyVector(BitVec::from_bools((0..n).map(|_| rng.gen::<bool>())))
}

/// The couple `(k_i, c_i)` held by one player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Share {
    pub k: bool,
    pub c: bool,
}

/// Shares held by a coalition, keyed by player index.
pub type PartialShares = BTreeMap<usize, Share>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShareTable {
    shares: Vec<Share>,
}

impl ShareTable {
    pub fn from_shares(shares: Vec<Share>) -> Self {
        Self { shares }
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn share(&self, player: usize) -> Share {
        self.shares[player]
    }

    pub fn shares(&self) -> &[Share] {
        &self.shares
    }

    pub fn ciphertexts(&self) -> BitVec {
        BitVec::from_bools(self.shares.iter().map(|s| s.c))
    }

    /// The shares of the players in `set`.
    pub fn restrict(&self, set: &VertexSet) -> PartialShares {
        set.iter().map(|i| (i, self.shares[i])).collect()
    }
}

/// Deals `(k_i, s + Σ_{j ∈ N(i)} k_j)` to every player `i`.
pub fn make_shares(
    g: &Graph,
    secret: Secret,
    keys: &KeyVector,
) -> Result<ShareTable, ProtocolError> {
    if keys.len() != g.order() {
        return Err(ProtocolError::KeyLengthMismatch {
            expected: g.order(),
            found: keys.len(),
        });
    }
    let shares = (0..g.order())
        .map(|i| {
            let nbrs = g.neighbourhood(i).expect("i < n");
            let mask = nbrs.bits().dot(keys.bits());
            Share {
                k: keys.get(i),
                c: secret.as_bool() ^ mask,
            }
        })
        .collect();
    Ok(ShareTable { shares })
}

/// Computes `Σ_{i ∈ D} c_i + Σ_{j ∈ Odd(D)} k_j (mod 2)` from the shares of `b`
/// after checking that `d` is a valid witness for `b`.
pub fn reconstruct(
    g: &Graph,
    b: &VertexSet,
    d: &VertexSet,
    partial: &PartialShares,
) -> Result<Secret, ProtocolError> {
    g.check_set(b)?;
    g.check_set(d)?;
    check_witness(g, b, d).map_err(|defect| ProtocolError::InvalidWitness {
        set: b.clone(),
        witness: d.clone(),
        defect,
    })?;
    if let Some(&player) = partial.keys().find(|&&p| !b.contains(p)) {
        return Err(ProtocolError::ShareOutsideSet { player });
    }
    let lookup = |player: usize| {
        partial
            .get(&player)
            .ok_or(ProtocolError::MissingShare { player })
    };

    let mut acc = false;
    for i in d.iter() {
        acc ^= lookup(i)?.c;
    }
    for j in g.odd_neighbourhood(d)?.iter() {
        acc ^= lookup(j)?.k;
    }
    Ok(Secret(acc))
}

/// The secret recovered by a coalition together with the witness it used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovery {
    pub secret: Secret,
    pub witness: VertexSet,
}

/// Finds a witness for `b` and reconstructs. Forbidden sets get
/// [`ProtocolError::NotAuthorized`], never a guessed bit.
pub fn recover_as_set(
    g: &Graph,
    b: &VertexSet,
    partial: &PartialShares,
) -> Result<Recovery, ProtocolError> {
    let verdict = is_c_accessing(g, b)?;
    match verdict.witness {
        Witness::Authorized { d } => {
            let secret = reconstruct(g, b, &d, partial)?;
            Ok(Recovery { secret, witness: d })
        }
        Witness::Forbidden { .. } => Err(ProtocolError::NotAuthorized { set: b.clone() }),
    }
}
