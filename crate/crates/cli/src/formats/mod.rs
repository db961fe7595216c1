//! Instance ingestion: the native edge-list format, SNDlib network files and
//! DIMACS max-flow files, behind one loader with format sniffing.
//!
//! All three parsers produce the same thing: node names, a source, a
//! terminal and a list of raw edges that are repaired to full
//! source-terminal connectivity (seeded, like the generator) before the
//! network is built. SNDlib and DIMACS files do not carry routing costs or
//! trustworthy capacities for this model, so those are drawn from seeded
//! uniform ranges; the native format states everything explicitly.

mod dimacs;
mod native;
mod sndlib;

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ramf_core::model::{repair_connectivity, NetError, Network, NetworkBuilder, RawEdge};

pub use native::write_native;

/// On-disk instance format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceFormat {
    /// One `tail head capacity cost post_attack_capacity` line per edge.
    Native,
    /// SNDlib native text format (NODES/LINKS sections).
    Sndlib,
    /// DIMACS max-flow format (`p max`, `n`, `a` lines).
    Dimacs,
}

/// A parse failure, pointing at the offending line.
#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Net(#[from] NetError),
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> ParseError {
        ParseError::Malformed { line: line + 1, message: message.into() }
    }
}

/// Knobs shared by every loader invocation.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Parse as this format instead of sniffing.
    pub format: Option<InstanceFormat>,
    /// Override the source node (by name for SNDlib/native, by id for DIMACS).
    pub source: Option<String>,
    /// Override the terminal node.
    pub sink: Option<String>,
    /// Seed for capacity/cost draws and connectivity repair.
    pub seed: u64,
    /// Override the post-attack residual capacity of every attackable edge.
    pub post_attack_capacity: Option<f64>,
}

/// What a parser extracts from a file before network construction.
struct RawInstance {
    name: String,
    nodes: Vec<String>,
    source: usize,
    terminal: usize,
    edges: Vec<RawEdge>,
    /// Per-edge post-attack capacities; `None` means all zero.
    residuals: Option<Vec<f64>>,
    /// Extra sources/terminals beyond the primary (native format only).
    extra_sources: Vec<usize>,
    extra_terminals: Vec<usize>,
    /// Ranges used for repair edges, matching the parser's own draws.
    repair_capacity_range: (f64, f64),
    repair_cost_range: (f64, f64),
}

/// Guesses the format from the extension, falling back to content sniffing:
/// SNDlib files open with a `?SNDlib` preamble or a `NODES (` section, and
/// DIMACS files carry a `p max` problem line.
pub fn sniff_format(path: &Path, text: &str) -> InstanceFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("max") | Some("dimacs") => return InstanceFormat::Dimacs,
        Some("sndlib") | Some("snd") => return InstanceFormat::Sndlib,
        _ => {}
    }
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with("?SNDlib") || line.starts_with("NODES (") {
            return InstanceFormat::Sndlib;
        }
        if line.starts_with("p max") || line.starts_with("p min") {
            return InstanceFormat::Dimacs;
        }
    }
    InstanceFormat::Native
}

/// Reads and parses an instance file into a ready network.
pub fn load_instance(path: &Path, options: &LoadOptions) -> anyhow::Result<Network> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let format = options.format.unwrap_or_else(|| sniff_format(path, &text));
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("instance")
        .to_string();
    let net = parse_instance(&text, format, &stem, options)?;
    Ok(net)
}

/// Parses already-read text in the given format.
pub fn parse_instance(
    text: &str,
    format: InstanceFormat,
    default_name: &str,
    options: &LoadOptions,
) -> Result<Network, ParseError> {
    let mut raw = match format {
        InstanceFormat::Native => native::parse(text, default_name)?,
        InstanceFormat::Sndlib => sndlib::parse(text, default_name, options.seed)?,
        InstanceFormat::Dimacs => dimacs::parse(text, default_name, options.seed)?,
    };
    apply_endpoint_overrides(&mut raw, options)?;
    let net = assemble(raw, options.seed)?;
    Ok(match options.post_attack_capacity {
        Some(m) => net.with_residual_capacity(m),
        None => net,
    })
}

fn apply_endpoint_overrides(raw: &mut RawInstance, options: &LoadOptions) -> Result<(), ParseError> {
    let resolve = |wanted: &str| {
        raw.nodes.iter().position(|n| n == wanted).ok_or_else(|| {
            ParseError::Structure(format!("node {wanted:?} not found in the instance"))
        })
    };
    if let Some(source) = &options.source {
        raw.source = resolve(source)?;
        raw.extra_sources.clear();
    }
    if let Some(sink) = &options.sink {
        raw.terminal = resolve(sink)?;
        raw.extra_terminals.clear();
    }
    if raw.source == raw.terminal {
        return Err(ParseError::Structure(
            "source and terminal resolve to the same node".into(),
        ));
    }
    Ok(())
}

fn assemble(mut raw: RawInstance, seed: u64) -> Result<Network, ParseError> {
    // Multi-endpoint instances go through the builder's super-node
    // transform, which guarantees connectivity on its own terms; repair is
    // only meaningful for the single source/terminal case.
    let repaired = if raw.extra_sources.is_empty() && raw.extra_terminals.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7265_7061_6972); // distinct stream per role
        let before = raw.edges.len();
        let added = repair_connectivity(
            raw.nodes.len(),
            raw.source,
            raw.terminal,
            &mut raw.edges,
            &mut rng,
            raw.repair_capacity_range,
            raw.repair_cost_range,
        );
        if let Some(residuals) = &mut raw.residuals {
            residuals.resize(before + added, 0.0);
        }
        added
    } else {
        0
    };

    let mut builder = NetworkBuilder::new();
    builder.name(&raw.name);
    for node in &raw.nodes {
        builder.add_node(node)?;
    }
    for (i, e) in raw.edges.iter().enumerate() {
        let residual = raw.residuals.as_ref().map_or(0.0, |r| r[i]);
        builder.add_edge(e.tail, e.head, e.capacity, e.cost, residual)?;
    }
    builder.add_source(raw.source)?;
    for &s in &raw.extra_sources {
        builder.add_source(s)?;
    }
    builder.add_terminal(raw.terminal)?;
    for &t in &raw.extra_terminals {
        builder.add_terminal(t)?;
    }
    let mut net = builder.build()?;
    if repaired > 0 {
        net.metadata.push(format!("connectivity repair added {repaired} edges"));
    }
    Ok(net)
}
