#![allow(dead_code)]

use gss_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Adjacency masks read edge by edge through `has_edge`, independent of the
/// crate's row storage.
pub fn adjacency(g: &Graph) -> Vec<u64> {
    let n = g.order();
    (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| g.has_edge(u, v))
                .fold(0u64, |m, v| m | 1 << v)
        })
        .collect()
}

/// {v : |N(v) ∩ D| odd}, by counting neighbours one vertex at a time.
pub fn odd_by_counting(adj: &[u64], d: u64) -> u64 {
    (0..adj.len())
        .filter(|&v| {
            (0..adj.len())
                .filter(|&u| d >> u & 1 == 1 && adj[v] >> u & 1 == 1)
                .count()
                % 2
                == 1
        })
        .fold(0u64, |m, v| m | 1 << v)
}

/// Literal reading of the definition: some odd-size D ⊆ B with Odd(D) ⊆ B.
pub fn naive_c_accessing(adj: &[u64], b: u64) -> bool {
    submasks(b).any(|d| d.count_ones() % 2 == 1 && odd_by_counting(adj, d) & !b == 0)
}

/// All witnesses D of B, by search.
pub fn naive_witnesses(adj: &[u64], b: u64) -> Vec<u64> {
    submasks(b)
        .filter(|&d| d.count_ones() % 2 == 1 && odd_by_counting(adj, d) & !b == 0)
        .collect()
}

/// Every submask of `m`, including 0 and `m`.
pub fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Structured families plus seeded random graphs on `2..=max_n` vertices.
pub fn test_graphs(max_n: usize, random_per_order: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push(Graph::empty(n));
        out.push(Graph::complete(n));
        out.push(Graph::path(n));
        out.push(Graph::star(n));
        if n >= 3 {
            out.push(Graph::cycle(n));
        }
        if n >= 2 {
            for i in 0..random_per_order {
                let p = [0.25, 0.5, 0.75][i % 3];
                out.push(random_graph(&mut rng, n, p));
            }
        }
    }
    out
}
