//! Text and JSON rendering of command results.

use std::fmt::Write;

use gss_core::protocol::Recovery;
use gss_core::quantum_access::{QuantumAudit, QuantumVerdict};
use gss_core::security_oracle::{PerfectnessAudit, SecurityReport};
use gss_core::{AccessStatus, AccessStructure, AccessVerdict, Graph, VertexSet};
use serde_json::{json, Value};

use crate::Format;

const LABEL_NOTE: &str = "note: vertices are 0-indexed; add 1 to match 1-indexed figure labels\n";

fn list(set: &VertexSet) -> Vec<usize> {
    set.iter().collect()
}

fn status_name(status: AccessStatus) -> &'static str {
    match status {
        AccessStatus::Authorized => "Authorized",
        AccessStatus::Forbidden => "Forbidden",
    }
}

fn to_json(value: Value) -> String {
    serde_json::to_string_pretty(&value).expect("json renders") + "\n"
}

fn verdict_json(v: &AccessVerdict) -> Value {
    json!({
        "set": list(&v.set),
        "status": status_name(v.status()),
        "witness_d": v.witness_d().map(list),
        "dual_witness_c": v.dual_witness_c().map(list),
    })
}

fn verdict_line(v: &AccessVerdict) -> String {
    match (v.witness_d(), v.dual_witness_c()) {
        (Some(d), _) => format!("{} Authorized  D={d}", v.set),
        (_, Some(c)) => format!("{} Forbidden   C={c}", v.set),
        _ => unreachable!("verdict carries exactly one certificate"),
    }
}

pub fn analyze(g: &Graph, s: &AccessStructure, format: Format) -> String {
    let minimal = s.minimal_authorized();
    match format {
        Format::Json => {
            let mut value = json!({
                "n": g.order(),
                "edges": g.edges(),
                "subsets": s.subset_count(),
                "authorized_count": s.authorized_count(),
                "forbidden_count": s.forbidden_count(),
                "minimal_authorized": minimal.iter().map(list).collect::<Vec<_>>(),
            });
            if let Some(verdicts) = s.verdicts() {
                value["sets"] = verdicts.iter().map(verdict_json).collect();
            }
            to_json(value)
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "graph: {} vertices, {} edges",
                g.order(),
                g.edge_count()
            )
            .unwrap();
            writeln!(
                out,
                "subsets: {}  authorized: {}  forbidden: {}",
                s.subset_count(),
                s.authorized_count(),
                s.forbidden_count()
            )
            .unwrap();
            writeln!(out, "minimal authorized sets ({}):", minimal.len()).unwrap();
            for m in &minimal {
                writeln!(out, "  {m}").unwrap();
            }
            if let Some(verdicts) = s.verdicts() {
                writeln!(out, "all sets:").unwrap();
                for v in verdicts {
                    writeln!(out, "  {}", verdict_line(v)).unwrap();
                }
            }
            out.push_str(LABEL_NOTE);
            out
        }
    }
}

pub fn classify(
    g: &Graph,
    v: &AccessVerdict,
    security: Option<&SecurityReport>,
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let mut value = verdict_json(v);
            value["odd_neighbourhood_of_witness"] = match (v.witness_d(), v.dual_witness_c()) {
                (Some(d), _) => json!(list(&g.odd_neighbourhood(d).expect("same graph"))),
                (_, Some(c)) => json!(list(&g.odd_neighbourhood(c).expect("same graph"))),
                _ => Value::Null,
            };
            if let Some(r) = security {
                value["security"] = json!({
                    "verdict": r.verdict.to_string(),
                    "mutual_information_bits": r.mutual_information.to_string(),
                });
            }
            to_json(value)
        }
        Format::Text => {
            let mut out = format!("{}\n", verdict_line(v));
            if let Some(r) = security {
                writeln!(
                    out,
                    "security: {} (I = {} bits)",
                    r.verdict, r.mutual_information
                )
                .unwrap();
            }
            out.push_str(LABEL_NOTE);
            out
        }
    }
}

pub fn reconstruct(b: &VertexSet, r: &Recovery, odd: &VertexSet, format: Format) -> String {
    match format {
        Format::Json => to_json(json!({
            "set": list(b),
            "secret": r.secret.bit(),
            "witness_d": list(&r.witness),
            "odd_neighbourhood": list(odd),
        })),
        Format::Text => format!(
            "{}\nwitness D={} (ciphertexts of D, keys of Odd(D)={})\n",
            r.secret, r.witness, odd
        ),
    }
}

pub fn audit_security(audit: &PerfectnessAudit, format: Format) -> String {
    match format {
        Format::Json => to_json(json!({
            "n": audit.n,
            "subsets": audit.records.len(),
            "mismatches": audit.mismatch_count(),
            "partial_leaks": audit.partial_leak_count(),
            "records": audit.records,
        })),
        Format::Text => {
            let mut out = format!(
                "subsets: {}  mismatches: {}  partial leaks: {}\n",
                audit.records.len(),
                audit.mismatch_count(),
                audit.partial_leak_count()
            );
            for r in audit.mismatches() {
                let access = match &r.access {
                    Ok(s) => status_name(*s).to_string(),
                    Err(e) => format!("error: {e}"),
                };
                writeln!(
                    out,
                    "  mismatch {}: oracle {} vs access {access}",
                    r.set, r.report.verdict
                )
                .unwrap();
            }
            out
        }
    }
}

pub fn quantum(v: &QuantumVerdict, format: Format) -> String {
    match format {
        Format::Json => to_json(json!({
            "set": list(&v.set),
            "classical_status": status_name(v.classical_status),
            "quantum_status": v.quantum_status,
            "in_graph": verdict_json(&v.in_graph),
            "in_complement_graph": verdict_json(&v.in_complement_graph),
            "complement_set_in_graph": verdict_json(&v.complement_set),
        })),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "set {}", v.set).unwrap();
            writeln!(out, "classical secret: {}", status_name(v.classical_status)).unwrap();
            writeln!(out, "quantum secret:   {:?}", v.quantum_status).unwrap();
            writeln!(out, "  B in G:              {}", verdict_line(&v.in_graph)).unwrap();
            writeln!(
                out,
                "  B in complement(G):  {}",
                verdict_line(&v.in_complement_graph)
            )
            .unwrap();
            writeln!(
                out,
                "  V\\B in G:            {}",
                verdict_line(&v.complement_set)
            )
            .unwrap();
            out.push_str(LABEL_NOTE);
            out
        }
    }
}

pub fn audit_quantum(audit: &QuantumAudit, format: Format) -> String {
    match format {
        Format::Json => to_json(json!(audit)),
        Format::Text => {
            let mut out = format!(
                "subsets: {}  quantum authorized: {}  classical authorized: {}\n\
                 route disagreements: {}  complement violations: {}\n",
                audit.subsets,
                audit.quantum_authorized,
                audit.classical_authorized,
                audit.route_disagreements.len(),
                audit.complement_violations.len()
            );
            for set in &audit.route_disagreements {
                writeln!(out, "  routes disagree on {set:?}").unwrap();
            }
            for (a, b) in &audit.complement_violations {
                writeln!(out, "  both authorized: {a:?} and {b:?}").unwrap();
            }
            out
        }
    }
}
