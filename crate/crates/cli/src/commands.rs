use std::fs;
use std::path::Path;

use gss_core::access::{AccessDecider, AdjacencyFault, ENUMERATION_MAX_ORDER};
use gss_core::protocol::{
    make_shares, recover_as_set, sample_keys, KeyVector, ProtocolError, Secret, ShareFile,
};
use gss_core::quantum_access::{gsqss_quantum_verdict, no_cloning_audit, QuantumError};
use gss_core::security_oracle::{
    audit_perfectness_with, classify_security, OracleError, VIEW_MAX_ORDER,
};
use gss_core::{is_c_accessing, AccessError, Graph, VertexSet};

use crate::report;
use crate::{Command, Common, Format};

pub const EXIT_INVALID_INPUT: u8 = 2;
pub const EXIT_TOO_LARGE: u8 = 3;
pub const EXIT_GRAPH_MISMATCH: u8 = 4;
pub const EXIT_NOT_AUTHORIZED: u8 = 5;
pub const EXIT_AUDIT_MISMATCH: u8 = 6;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    /// Report still worth printing on failure.
    pub output: Option<String>,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            output: None,
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID_INPUT, message)
    }
}

impl From<AccessError> for CliError {
    fn from(e: AccessError) -> Self {
        match e {
            AccessError::TooLarge { .. } => Self::new(EXIT_TOO_LARGE, e.to_string()),
            AccessError::Graph(_) => Self::invalid(e.to_string()),
            AccessError::DualityViolation { .. } | AccessError::InvalidWitness { .. } => {
                Self::new(EXIT_AUDIT_MISMATCH, e.to_string())
            }
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => Self::new(EXIT_TOO_LARGE, e.to_string()),
            OracleError::Graph(_) => Self::invalid(e.to_string()),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::Access(inner) => inner.into(),
            QuantumError::TooLarge { .. } => Self::new(EXIT_TOO_LARGE, e.to_string()),
            QuantumError::RouteDisagreement { .. } => Self::new(EXIT_AUDIT_MISMATCH, e.to_string()),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Access(inner) => inner.into(),
            ProtocolError::GraphMismatch { .. } => Self::new(EXIT_GRAPH_MISMATCH, e.to_string()),
            ProtocolError::NotAuthorized { .. } => Self::new(EXIT_NOT_AUTHORIZED, e.to_string()),
            _ => Self::invalid(e.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    read_text(path)?
        .parse()
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn parse_set(g: &Graph, text: &str) -> Result<VertexSet, CliError> {
    VertexSet::parse_list(g.order(), text)
        .map_err(|e| CliError::invalid(format!("--set {text:?}: {e}")))
}

fn parse_fault(text: &str) -> Result<AdjacencyFault, CliError> {
    let bad = || CliError::invalid(format!("--inject-fault expects ROW,COL, got {text:?}"));
    let (row, col) = text.split_once(',').ok_or_else(bad)?;
    Ok(AdjacencyFault {
        row: row.trim().parse().map_err(|_| bad())?,
        col: col.trim().parse().map_err(|_| bad())?,
    })
}

pub fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Analyze {
            common,
            with_witnesses,
        } => analyze(&common, with_witnesses),
        Command::Classify { common, set } => classify(&common, &set),
        Command::Share {
            common,
            secret,
            keys,
            seed,
            reveal,
            out,
        } => share(
            &common,
            secret,
            keys.as_deref(),
            seed,
            reveal,
            out.as_deref(),
        ),
        Command::Reconstruct {
            common,
            shares,
            set,
        } => reconstruct(&common, &shares, &set),
        Command::AuditSecurity {
            common,
            inject_fault,
        } => audit_security(&common, inject_fault.as_deref()),
        Command::Quantum { common, set } => quantum(&common, &set),
        Command::AuditQuantum { common } => audit_quantum(&common),
    }
}

fn analyze(common: &Common, with_witnesses: bool) -> Result<String, CliError> {
    let g = load_graph(&common.graph)?;
    if g.order() > ENUMERATION_MAX_ORDER {
        return Err(CliError::new(
            EXIT_TOO_LARGE,
            format!(
                "graph has {} vertices; analyze enumerates all subsets and is capped at {ENUMERATION_MAX_ORDER}",
                g.order()
            ),
        ));
    }
    let structure = AccessDecider::exact().enumerate(&g, with_witnesses)?;
    Ok(report::analyze(&g, &structure, common.format))
}

fn classify(common: &Common, set: &str) -> Result<String, CliError> {
    let g = load_graph(&common.graph)?;
    let b = parse_set(&g, set)?;
    let verdict = is_c_accessing(&g, &b)?;
    let security = if g.order() <= VIEW_MAX_ORDER {
        Some(classify_security(&g, &b)?)
    } else {
        None
    };
    Ok(report::classify(
        &g,
        &verdict,
        security.as_ref(),
        common.format,
    ))
}

fn share(
    common: &Common,
    secret: u8,
    keys: Option<&str>,
    seed: Option<u64>,
    reveal: bool,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let g = load_graph(&common.graph)?;
    let secret =
        Secret::from_bit(secret).ok_or_else(|| CliError::invalid("--secret must be 0 or 1"))?;
    let keys = match (keys, seed) {
        (Some(text), _) => text
            .parse::<KeyVector>()
            .map_err(|e| CliError::invalid(format!("--keys: {e}")))?,
        (None, Some(seed)) => sample_keys(g.order(), seed),
        (None, None) => return Err(CliError::invalid("share needs --keys or --seed")),
    };
    let table = make_shares(&g, secret, &keys)?;
    let mut file = ShareFile::new(&g, &table, seed);
    if reveal {
        file = file.reveal(secret);
    }
    let json = file.to_json() + "\n";
    match out {
        Some(path) => {
            fs::write(path, &json)
                .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
            Ok(match common.format {
                Format::Json => String::new(),
                Format::Text => format!("wrote {} shares to {}\n", g.order(), path.display()),
            })
        }
        None => Ok(json),
    }
}

fn reconstruct(common: &Common, shares: &Path, set: &str) -> Result<String, CliError> {
    let g = load_graph(&common.graph)?;
    let file = ShareFile::from_json(&read_text(shares)?)?;
    file.verify_graph(&g)?;
    let table = file.share_table()?;
    let b = parse_set(&g, set)?;
    let recovery = recover_as_set(&g, &b, &table.restrict(&b))?;
    let odd = g
        .odd_neighbourhood(&recovery.witness)
        .expect("witness lives in g");
    Ok(report::reconstruct(&b, &recovery, &odd, common.format))
}

fn audit_security(common: &Common, fault: Option<&str>) -> Result<String, CliError> {
    let g = load_graph(&common.graph)?;
    let decider = match fault {
        Some(text) => AccessDecider::with_fault(parse_fault(text)?),
        None => AccessDecider::exact(),
    };
    let audit = audit_perfectness_with(&g, &decider)?;
    let output = report::audit_security(&audit, common.format);
    if audit.is_clean() {
        Ok(output)
    } else {
        Err(CliError {
            code: EXIT_AUDIT_MISMATCH,
            message: format!(
                "{} mismatches and {} partial leaks over {} subsets",
                audit.mismatch_count(),
                audit.partial_leak_count(),
                audit.records.len()
            ),
            output: Some(output),
        })
    }
}

fn quantum(common: &Common, set: &str) -> Result<String, CliError> {
    let g = load_graph(&common.graph)?;
    let b = parse_set(&g, set)?;
    let verdict = gsqss_quantum_verdict(&g, &b)?;
    Ok(report::quantum(&verdict, common.format))
}

fn audit_quantum(common: &Common) -> Result<String, CliError> {
    let g = load_graph(&common.graph)?;
    let audit = no_cloning_audit(&g)?;
    let output = report::audit_quantum(&audit, common.format);
    if audit.is_clean() {
        Ok(output)
    } else {
        Err(CliError {
            code: EXIT_AUDIT_MISMATCH,
            message: format!(
                "{} route disagreements and {} complement violations",
                audit.route_disagreements.len(),
                audit.complement_violations.len()
            ),
            output: Some(output),
        })
    }
}
