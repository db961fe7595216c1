//! The native instance format: a line-oriented text file that states
//! everything and draws nothing.
//!
//! ```text
//! # comments and blank lines are skipped
//! network d1            (optional)
//! node s
//! node a
//! node t
//! source s              (repeatable for multi-source instances)
//! terminal t            (repeatable; `sink` is accepted as an alias)
//! s a 10 0.01 0         (tail head capacity cost post_attack_capacity)
//! a t  6 0.01 0
//! ```
//!
//! Nodes must be declared before edges mention them; an edge line has
//! exactly five whitespace-separated fields.

use std::fmt::Write as _;

use ramf_core::model::{Network, RawEdge};

use super::{ParseError, RawInstance};

pub(super) fn parse(text: &str, default_name: &str) -> Result<RawInstance, ParseError> {
    let mut name = default_name.to_string();
    let mut nodes: Vec<String> = Vec::new();
    let mut sources: Vec<usize> = Vec::new();
    let mut terminals: Vec<usize> = Vec::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    let mut residuals: Vec<f64> = Vec::new();

    let node_index = |nodes: &[String], token: &str, line: usize| {
        nodes
            .iter()
            .position(|n| n == token)
            .ok_or_else(|| ParseError::at(line, format!("undeclared node {token:?}")))
    };

    for (line_no, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "network" => {
                let rest = tokens.get(1..).unwrap_or_default();
                if rest.is_empty() {
                    return Err(ParseError::at(line_no, "network line needs a name"));
                }
                name = rest.join(" ");
            }
            "node" => {
                let [_, node] = tokens[..] else {
                    return Err(ParseError::at(line_no, "expected `node <name>`"));
                };
                if nodes.iter().any(|n| n == node) {
                    return Err(ParseError::at(line_no, format!("duplicate node {node:?}")));
                }
                nodes.push(node.to_string());
            }
            "source" => {
                let [_, node] = tokens[..] else {
                    return Err(ParseError::at(line_no, "expected `source <name>`"));
                };
                sources.push(node_index(&nodes, node, line_no)?);
            }
            "terminal" | "sink" => {
                let [_, node] = tokens[..] else {
                    return Err(ParseError::at(line_no, "expected `terminal <name>`"));
                };
                terminals.push(node_index(&nodes, node, line_no)?);
            }
            _ => {
                let [tail, head, capacity, cost, residual] = tokens[..] else {
                    return Err(ParseError::at(
                        line_no,
                        "expected `tail head capacity cost post_attack_capacity`",
                    ));
                };
                let number = |token: &str, what: &str| {
                    token.parse::<f64>().map_err(|_| {
                        ParseError::at(line_no, format!("{what} {token:?} is not a number"))
                    })
                };
                edges.push(RawEdge {
                    tail: node_index(&nodes, tail, line_no)?,
                    head: node_index(&nodes, head, line_no)?,
                    capacity: number(capacity, "capacity")?,
                    cost: number(cost, "cost")?,
                });
                residuals.push(number(residual, "post-attack capacity")?);
            }
        }
    }

    let mut sources = sources.into_iter();
    let mut terminals = terminals.into_iter();
    let source = sources.next().ok_or_else(|| ParseError::Structure("no source line".into()))?;
    let terminal =
        terminals.next().ok_or_else(|| ParseError::Structure("no terminal line".into()))?;
    Ok(RawInstance {
        name,
        nodes,
        source,
        terminal,
        edges,
        residuals: Some(residuals),
        extra_sources: sources.collect(),
        extra_terminals: terminals.collect(),
        // Native files are taken at face value; repair edges (for instances
        // that genuinely need them) reuse the plain generator ranges.
        repair_capacity_range: (1.0, 10.0),
        repair_cost_range: (0.01, 0.1),
    })
}

/// Renders a network back into the native format. Only the physical edges
/// are written; the return edge and any super-node transform the builder
/// applied are reconstructed on the next parse.
pub fn write_native(net: &Network) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network {}", net.name());
    for note in &net.metadata {
        let _ = writeln!(out, "# {note}");
    }
    for v in 0..net.node_count() {
        let _ = writeln!(out, "node {}", net.node_name(v));
    }
    let _ = writeln!(out, "source {}", net.node_name(net.source()));
    let _ = writeln!(out, "terminal {}", net.node_name(net.terminal()));
    for e in net.edges().iter().filter(|e| e.id != net.return_edge()) {
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            net.node_name(e.tail),
            net.node_name(e.head),
            e.capacity,
            e.cost,
            e.post_attack_capacity,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse_instance, InstanceFormat, LoadOptions};
    use super::*;

    const DIAMOND: &str = "\
network d1
node s
node a
node b
node t
source s
terminal t
s a 10 0.01 0
s b 5 0.01 0
a t 6 0.01 0
a b 4 0.01 0
b t 8 0.01 0
";

    #[test]
    fn parses_the_diamond() {
        let net =
            parse_instance(DIAMOND, InstanceFormat::Native, "x", &LoadOptions::default()).unwrap();
        assert_eq!(net.name(), "d1");
        assert_eq!(net.node_count(), 4);
        assert_eq!(net.edge_count(), 6); // five physical + return
        assert_eq!(net.edge(0).capacity, 10.0);
        assert_eq!(net.node_name(net.source()), "s");
    }

    #[test]
    fn round_trips_through_the_writer() {
        let options = LoadOptions::default();
        let net = parse_instance(DIAMOND, InstanceFormat::Native, "x", &options).unwrap();
        let text = write_native(&net);
        let again = parse_instance(&text, InstanceFormat::Native, "x", &options).unwrap();
        assert_eq!(net.node_count(), again.node_count());
        assert_eq!(net.edge_count(), again.edge_count());
        for (a, b) in net.edges().iter().zip(again.edges()) {
            assert_eq!(a.tail, b.tail);
            assert_eq!(a.capacity, b.capacity);
            assert_eq!(a.cost, b.cost);
        }
    }

    #[test]
    fn reports_the_offending_line() {
        let bad = "node s\nnode t\nsource s\nterminal t\ns t five 0.01 0\n";
        let err = parse_instance(bad, InstanceFormat::Native, "x", &LoadOptions::default())
            .unwrap_err();
        assert!(err.to_string().contains("line 5"), "got: {err}");
        assert!(err.to_string().contains("five"), "got: {err}");
    }

    #[test]
    fn rejects_edges_touching_undeclared_nodes() {
        let bad = "node s\nnode t\nsource s\nterminal t\ns q 5 0.01 0\n";
        let err = parse_instance(bad, InstanceFormat::Native, "x", &LoadOptions::default())
            .unwrap_err();
        assert!(err.to_string().contains("undeclared node"), "got: {err}");
    }

    #[test]
    fn multi_source_files_go_through_the_super_node_transform() {
        let text = "\
node s1
node s2
node m
node t
source s1
source s2
terminal t
s1 m 4 0.01 0
s2 m 4 0.01 0
m t 6 0.01 0
";
        let net =
            parse_instance(text, InstanceFormat::Native, "x", &LoadOptions::default()).unwrap();
        assert_eq!(net.node_name(net.source()), "@source");
        assert_eq!(net.node_count(), 5);
    }
}
