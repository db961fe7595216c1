//! DIMACS max-flow reader (`p max`, `n`, `a` lines).
//!
//! The benchmark files carry capacities tuned for pure max-flow solvers and
//! no costs at all, so both are redrawn from seeded ranges: integer
//! capacities in `[10, 50]`, unit costs in `[0.01, 0.1]`. Node names keep
//! the original one-based ids.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ramf_core::model::RawEdge;

use super::{ParseError, RawInstance};

const CAPACITY_RANGE: (f64, f64) = (10.0, 50.0);
const COST_RANGE: (f64, f64) = (0.01, 0.1);

pub(super) fn parse(
    text: &str,
    default_name: &str,
    seed: u64,
) -> Result<RawInstance, ParseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut node_count: Option<usize> = None;
    let mut source: Option<usize> = None;
    let mut terminal: Option<usize> = None;
    let mut edges: Vec<RawEdge> = Vec::new();

    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "c" => {}
            "p" => {
                if node_count.is_some() {
                    return Err(ParseError::at(line_no, "second problem line"));
                }
                let [_, kind, nodes, _arcs] = tokens[..] else {
                    return Err(ParseError::at(line_no, "expected `p max <nodes> <arcs>`"));
                };
                if kind != "max" && kind != "min" {
                    return Err(ParseError::at(
                        line_no,
                        format!("unsupported problem kind {kind:?}"),
                    ));
                }
                let nodes: usize = nodes
                    .parse()
                    .map_err(|_| ParseError::at(line_no, "node count is not a number"))?;
                if nodes < 2 {
                    return Err(ParseError::at(line_no, "need at least two nodes"));
                }
                node_count = Some(nodes);
            }
            "n" => {
                let n = node_count
                    .ok_or_else(|| ParseError::at(line_no, "node designator before the problem line"))?;
                let [_, id, role] = tokens[..] else {
                    return Err(ParseError::at(line_no, "expected `n <id> s|t`"));
                };
                let id = parse_node(id, n, line_no)?;
                match role {
                    "s" => source = Some(id),
                    "t" => terminal = Some(id),
                    other => {
                        return Err(ParseError::at(
                            line_no,
                            format!("node role must be `s` or `t`, got {other:?}"),
                        ))
                    }
                }
            }
            "a" => {
                let n = node_count
                    .ok_or_else(|| ParseError::at(line_no, "arc before the problem line"))?;
                let [_, tail, head, _capacity] = tokens[..] else {
                    return Err(ParseError::at(line_no, "expected `a <tail> <head> <capacity>`"));
                };
                let tail = parse_node(tail, n, line_no)?;
                let head = parse_node(head, n, line_no)?;
                if tail == head {
                    return Err(ParseError::at(line_no, "self-loops are not allowed"));
                }
                edges.push(RawEdge {
                    tail,
                    head,
                    capacity: rng.gen_range(10..=50) as f64,
                    cost: rng.gen_range(COST_RANGE.0..=COST_RANGE.1),
                });
            }
            other => {
                return Err(ParseError::at(line_no, format!("unknown line kind {other:?}")));
            }
        }
    }

    let node_count = node_count.ok_or_else(|| ParseError::Structure("missing problem line".into()))?;
    let source = source.ok_or_else(|| ParseError::Structure("no source (`n <id> s`) declared".into()))?;
    let terminal =
        terminal.ok_or_else(|| ParseError::Structure("no sink (`n <id> t`) declared".into()))?;
    if source == terminal {
        return Err(ParseError::Structure("source and sink coincide".into()));
    }

    Ok(RawInstance {
        name: default_name.to_string(),
        nodes: (1..=node_count).map(|id| id.to_string()).collect(),
        source,
        terminal,
        edges,
        residuals: None,
        extra_sources: Vec::new(),
        extra_terminals: Vec::new(),
        repair_capacity_range: CAPACITY_RANGE,
        repair_cost_range: COST_RANGE,
    })
}

/// Maps a one-based id token to a zero-based index, bounds-checked.
fn parse_node(token: &str, node_count: usize, line_no: usize) -> Result<usize, ParseError> {
    let id: usize = token
        .parse()
        .map_err(|_| ParseError::at(line_no, format!("node id {token:?} is not a number")))?;
    if id == 0 || id > node_count {
        return Err(ParseError::at(
            line_no,
            format!("node id {id} outside 1..={node_count}"),
        ));
    }
    Ok(id - 1)
}
