//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use gss_core::access::{AccessDecider, AdjacencyFault};
use gss_core::protocol::{make_shares, recover_as_set, KeyVector, Secret};
use gss_core::quantum_access::{gsqss_quantum_verdict, no_cloning_audit, QuantumStatus};
use gss_core::security_oracle::{
    audit_perfectness, audit_perfectness_with, view_distribution, SecurityVerdict,
};
use gss_core::{find_dual_witness, is_c_accessing, BitVec, Graph, VertexSet};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn adjacency(g: &Graph) -> Vec<u64> {
    let n = g.order();
    (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| g.has_edge(u, v))
                .fold(0u64, |m, v| m | 1 << v)
        })
        .collect()
}

fn odd_by_counting(adj: &[u64], d: u64) -> u64 {
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

/// Some odd D ⊆ B with Odd(D) ⊆ B, by trying every D.
fn naive_c_accessing(adj: &[u64], b: u64) -> bool {
    let mut d = b;
    loop {
        if d.count_ones() % 2 == 1 && odd_by_counting(adj, d) & !b == 0 {
            return true;
        }
        if d == 0 {
            return false;
        }
        d = (d - 1) & b;
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p = rng.gen_range(0.2..0.8);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Every labelled graph on 1..=5 vertices plus 200 seeded random graphs on 6.
fn small_graph_population() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=5usize {
        let pairs = n * (n - 1) / 2;
        out.extend((0..1u64 << pairs).map(|m| Graph::from_edge_mask(n, m)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce55);
    out.extend((0..200).map(|_| random_graph(&mut rng, 6)));
    out
}

/// P5, C5, K_n, stars and empty graphs up to `max_n`, plus `random` seeded graphs on 2..=max_n.
fn audit_population(max_n: usize, random: usize, seed: u64) -> Vec<Graph> {
    let mut out = vec![Graph::path(5), Graph::cycle(5)];
    for n in 1..=max_n {
        out.push(Graph::complete(n));
        out.push(Graph::star(n));
        out.push(Graph::empty(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.extend((0..random).map(|i| {
        let n = 2 + i % (max_n - 1);
        random_graph(&mut rng, n)
    }));
    out
}

fn set(n: usize, vs: &[usize]) -> VertexSet {
    VertexSet::from_vertices(n, vs.iter().copied()).unwrap()
}

fn ac1_fig1_fixture() -> Outcome {
    let keys: KeyVector = "01101".parse().unwrap();
    let table = make_shares(&Graph::path(5), Secret::ONE, &keys).map_err(|e| e.to_string())?;
    let c: Vec<u8> = table.shares().iter().map(|s| u8::from(s.c)).collect();
    ensure(c == [0, 0, 0, 1, 1], || format!("c = {c:?}"))?;

    let bin = env!("CARGO_BIN_EXE_gss");
    let graph = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/p5.txt");
    let out = Command::new(bin)
        .args(["share", "--secret", "1", "--keys", "01101", "--graph"])
        .arg(&graph)
        .output()
        .map_err(|e| e.to_string())?;
    let file: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let cli_c: Vec<u64> = file["shares"]
        .as_array()
        .ok_or("no shares")?
        .iter()
        .map(|r| r["c"].as_u64().unwrap())
        .collect();
    ensure(cli_c == [0, 0, 0, 1, 1], || format!("cli c = {cli_c:?}"))?;
    Ok("c = (0,0,0,1,1) from library and CLI".into())
}

fn ac2_listed_sets() -> Outcome {
    let g = Graph::path(5);
    let mut checked = 0;
    for base in [&[0, 1][..], &[1, 2, 3], &[3, 4], &[0, 2, 4]] {
        let bmask = set(5, base).to_mask().unwrap();
        for mask in 0..32u64 {
            if mask & bmask == bmask {
                let v = is_c_accessing(&g, &VertexSet::from_mask(5, mask))
                    .map_err(|e| e.to_string())?;
                ensure(v.is_authorized(), || format!("{mask:05b} not authorized"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} set/superset checks authorized"))
}

fn ac3_naive_equivalence(decider: &AccessDecider) -> Outcome {
    let graphs = small_graph_population();
    let mut sets = 0u64;
    let mut mismatches = 0u64;
    for g in &graphs {
        let adj = adjacency(g);
        let n = g.order();
        for mask in 0..1u64 << n {
            let b = VertexSet::from_mask(n, mask);
            let fast = decider.status(g, &b).map_err(|e| e.to_string())?;
            if (fast == gss_core::AccessStatus::Authorized) != naive_c_accessing(&adj, mask) {
                mismatches += 1;
            }
            sets += 1;
        }
    }
    ensure(mismatches == 0, || {
        format!("{mismatches} mismatches over {sets} sets")
    })?;
    Ok(format!(
        "{} graphs, {sets} sets, 0 mismatches",
        graphs.len()
    ))
}

fn ac4_duality() -> Outcome {
    let graphs = small_graph_population();
    let mut sets = 0u64;
    for g in &graphs {
        let adj = adjacency(g);
        let n = g.order();
        for mask in 0..1u64 << n {
            let b = VertexSet::from_mask(n, mask);
            let verdict = is_c_accessing(g, &b).map_err(|e| e.to_string())?;
            let dual = find_dual_witness(g, &b).map_err(|e| e.to_string())?;
            ensure(verdict.is_authorized() != dual.is_some(), || {
                format!("{g:?} B={b}")
            })?;
            if let Some(c) = dual {
                let cm = c.to_mask().unwrap();
                ensure(
                    cm & mask == 0 && mask & !odd_by_counting(&adj, cm) == 0,
                    || format!("bad dual witness {c} for {b}"),
                )?;
            }
            sets += 1;
        }
    }
    Ok(format!(
        "{} graphs, {sets} sets, 0 violations",
        graphs.len()
    ))
}

fn ac5_perfectness(decider: &AccessDecider) -> Outcome {
    let graphs = audit_population(7, 120, 0x5ec);
    let mut subsets = 0usize;
    let mut mismatches = 0usize;
    let mut leaks = 0usize;
    for g in &graphs {
        let audit = audit_perfectness_with(g, decider).map_err(|e| e.to_string())?;
        subsets += audit.records.len();
        mismatches += audit.mismatch_count();
        leaks += audit.partial_leak_count();
    }
    // exact probabilities: each conditional view distribution sums to 1
    for g in graphs.iter().take(10) {
        let n = g.order();
        for mask in 0..1u64 << n {
            let d =
                view_distribution(g, &VertexSet::from_mask(n, mask)).map_err(|e| e.to_string())?;
            for s in 0..2 {
                ensure(d.total_probability(s) == Ratio::from_integer(1), || {
                    "mass != 1".into()
                })?;
            }
        }
    }
    ensure(mismatches == 0 && leaks == 0, || {
        format!("{mismatches} mismatches, {leaks} partial leaks over {subsets} subsets")
    })?;
    Ok(format!(
        "{} graphs, {subsets} subsets, 0 mismatches, 0 partial leaks",
        graphs.len()
    ))
}

fn ac6_round_trip() -> Outcome {
    let graphs = audit_population(7, 30, 0x7e7);
    let mut decodes = 0u64;
    for g in &graphs {
        let n = g.order();
        let authorized: Vec<VertexSet> = (0..1u64 << n)
            .map(|m| VertexSet::from_mask(n, m))
            .filter(|b| is_c_accessing(g, b).unwrap().is_authorized())
            .collect();
        for s in [Secret::ZERO, Secret::ONE] {
            for k in 0..1u64 << n {
                let table = make_shares(g, s, &KeyVector::new(BitVec::from_u64(n, k)))
                    .map_err(|e| e.to_string())?;
                for b in &authorized {
                    let got =
                        recover_as_set(g, b, &table.restrict(b)).map_err(|e| e.to_string())?;
                    ensure(got.secret == s, || format!("{g:?} B={b} k={k:b} s={s}"))?;
                    decodes += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} graphs, {decodes} decodes, 0 failures",
        graphs.len()
    ))
}

fn ac7_quantum_routes() -> Outcome {
    let graphs = audit_population(8, 60, 0x9a);
    let mut sets = 0u64;
    for g in &graphs {
        let n = g.order();
        for mask in 0..1u64 << n {
            let v = gsqss_quantum_verdict(g, &VertexSet::from_mask(n, mask))
                .map_err(|e| e.to_string())?;
            if v.quantum_status == QuantumStatus::Authorized {
                let other = VertexSet::from_mask(n, mask).complement();
                let w = gsqss_quantum_verdict(g, &other).map_err(|e| e.to_string())?;
                ensure(w.quantum_status == QuantumStatus::NotAuthorized, || {
                    format!("{g:?}: {mask:b} and its complement both authorized")
                })?;
            }
            sets += 1;
        }
        let audit = no_cloning_audit(g).map_err(|e| e.to_string())?;
        ensure(audit.is_clean(), || format!("{g:?}: {audit:?}"))?;
    }
    Ok(format!(
        "{} graphs, {sets} sets, 0 disagreements, 0 complement violations",
        graphs.len()
    ))
}

fn ac8_negative_control() -> Outcome {
    let faulty = AccessDecider::with_fault(AdjacencyFault { row: 0, col: 1 });
    let ac5 = ac5_perfectness(&faulty);
    let ac3 = ac3_naive_equivalence(&faulty);
    ensure(ac5.is_err() || ac3.is_err(), || {
        "mutated decider passed both oracles".into()
    })?;

    let clean = audit_perfectness(&Graph::path(5)).map_err(|e| e.to_string())?;
    ensure(clean.is_clean(), || "unmutated P5 audit not clean".into())?;
    let mutated = audit_perfectness_with(&Graph::path(5), &faulty).map_err(|e| e.to_string())?;
    let p5_mismatches = mutated
        .mismatches()
        .filter(|r| r.report.verdict == SecurityVerdict::PerfectlyHidden)
        .count();

    let graph = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/p5.txt");
    let code = Command::new(env!("CARGO_BIN_EXE_gss"))
        .args(["audit-security", "--inject-fault", "0,1", "--graph"])
        .arg(&graph)
        .output()
        .map_err(|e| e.to_string())?
        .status
        .code();
    ensure(code == Some(6), || {
        format!("CLI exit code {code:?}, expected 6")
    })?;
    Ok(format!(
        "flipped bit (0,1): perfectness audit {}, naive equivalence {}, P5 mismatches {p5_mismatches}, CLI exit 6",
        if ac5.is_err() { "fails" } else { "passes" },
        if ac3.is_err() { "fails" } else { "passes" },
    ))
}

fn main() -> ExitCode {
    let exact = AccessDecider::exact();
    let criteria: Vec<Criterion> = vec![
        ("AC1 share fixture bit-exact", Box::new(ac1_fig1_fixture)),
        (
            "AC2 listed P5 sets and supersets authorized",
            Box::new(ac2_listed_sets),
        ),
        (
            "AC3 GF(2) decision equals naive search (n<=6)",
            Box::new(move || ac3_naive_equivalence(&exact)),
        ),
        (
            "AC4 witness / dual-witness duality (n<=6)",
            Box::new(ac4_duality),
        ),
        (
            "AC5 perfectness audit (n<=7)",
            Box::new(move || ac5_perfectness(&exact)),
        ),
        ("AC6 round-trip decoding (n<=7)", Box::new(ac6_round_trip)),
        (
            "AC7 quantum reduction routes agree (n<=8)",
            Box::new(ac7_quantum_routes),
        ),
        (
            "AC8 negative control: mutated decider is caught",
            Box::new(ac8_negative_control),
        ),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
