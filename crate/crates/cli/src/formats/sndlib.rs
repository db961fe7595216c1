//! SNDlib native text format: `NODES ( ... )` and `LINKS ( ... )` sections.
//!
//! A link line reads
//!
//! ```text
//! linkId ( sourceNode targetNode ) preCap preCapCost routingCost setupCost ( modCap modCost ... )
//! ```
//!
//! and becomes one directed edge source->target in listed order. The
//! capacity is the pre-installed capacity when positive, else the first
//! module capacity; links that still come out at zero get a seeded uniform
//! draw from [500, 1000]. Routing costs in these files describe a different
//! objective than this model's per-unit tolls, so costs are always drawn
//! seeded uniform from [0.01, 0.1]. The source defaults to the first
//! declared node and the terminal to the last; callers override by flag.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramf_core::model::RawEdge;

use super::{ParseError, RawInstance};

const FALLBACK_CAPACITY: (f64, f64) = (500.0, 1000.0);
const COST_RANGE: (f64, f64) = (0.01, 0.1);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Nodes,
    Links,
    Other,
}

pub(super) fn parse(text: &str, default_name: &str, seed: u64) -> Result<RawInstance, ParseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes: Vec<String> = Vec::new();
    let mut links: Vec<(usize, usize, f64)> = Vec::new();
    let mut section = Section::None;

    for (line_no, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('?') {
            continue;
        }
        if section == Section::None {
            section = match line.split_whitespace().next() {
                Some("NODES") => Section::Nodes,
                Some("LINKS") => Section::Links,
                Some(word) if word.chars().all(|c| c.is_ascii_uppercase() || c == '_') => {
                    Section::Other
                }
                _ => {
                    return Err(ParseError::at(
                        line_no,
                        format!("unexpected content outside any section: {line:?}"),
                    ))
                }
            };
            continue;
        }
        if line == ")" {
            section = Section::None;
            continue;
        }
        match section {
            Section::Nodes => {
                let name = line
                    .split_whitespace()
                    .next()
                    .ok_or_else(|| ParseError::at(line_no, "empty node line"))?;
                if nodes.iter().any(|n| n == name) {
                    return Err(ParseError::at(line_no, format!("duplicate node {name:?}")));
                }
                nodes.push(name.to_string());
            }
            Section::Links => {
                links.push(parse_link(line, line_no, &nodes)?);
            }
            Section::Other | Section::None => {}
        }
    }

    if nodes.is_empty() {
        return Err(ParseError::Structure("no NODES section".into()));
    }
    if links.is_empty() {
        return Err(ParseError::Structure("no links in the LINKS section".into()));
    }

    let edges = links
        .into_iter()
        .map(|(tail, head, capacity)| RawEdge {
            tail,
            head,
            capacity: if capacity > 0.0 {
                capacity
            } else {
                rng.gen_range(FALLBACK_CAPACITY.0..=FALLBACK_CAPACITY.1)
            },
            cost: rng.gen_range(COST_RANGE.0..=COST_RANGE.1),
        })
        .collect();

    Ok(RawInstance {
        name: default_name.to_string(),
        source: 0,
        terminal: nodes.len() - 1,
        nodes,
        edges,
        residuals: None,
        extra_sources: Vec::new(),
        extra_terminals: Vec::new(),
        repair_capacity_range: FALLBACK_CAPACITY,
        repair_cost_range: COST_RANGE,
    })
}

/// Extracts (tail, head, capacity) from one link line; capacity 0 marks
/// "draw one for me".
fn parse_link(line: &str, line_no: usize, nodes: &[String]) -> Result<(usize, usize, f64), ParseError> {
    let spaced = line.replace('(', " ( ").replace(')', " ) ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    let mut it = tokens.iter().copied();
    let _link_id = it
        .next()
        .ok_or_else(|| ParseError::at(line_no, "empty link line"))?;
    if it.next() != Some("(") {
        return Err(ParseError::at(line_no, "expected `( source target )` after the link id"));
    }
    let node = |token: Option<&str>| -> Result<usize, ParseError> {
        let token = token.ok_or_else(|| ParseError::at(line_no, "truncated link line"))?;
        nodes
            .iter()
            .position(|n| n == token)
            .ok_or_else(|| ParseError::at(line_no, format!("unknown node {token:?}")))
    };
    let tail = node(it.next())?;
    let head = node(it.next())?;
    if it.next() != Some(")") {
        return Err(ParseError::at(line_no, "expected `)` closing the endpoint pair"));
    }

    // Remainder: preCap preCapCost routingCost setupCost, then optional
    // module list. Missing numeric fields are tolerated (some files stop
    // after the endpoints); modules open with another `(`.
    let rest: Vec<&str> = it.collect();
    let pre_capacity = rest
        .first()
        .filter(|&&t| t != "(")
        .map(|t| {
            t.parse::<f64>().map_err(|_| {
                ParseError::at(line_no, format!("pre-installed capacity {t:?} is not a number"))
            })
        })
        .transpose()?
        .unwrap_or(0.0);
    let capacity = if pre_capacity > 0.0 {
        pre_capacity
    } else {
        // First module capacity, if any.
        rest.iter()
            .position(|&t| t == "(")
            .and_then(|open| rest.get(open + 1))
            .and_then(|t| t.parse::<f64>().ok())
            .unwrap_or(0.0)
    };
    Ok((tail, head, capacity))
}
