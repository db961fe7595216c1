//! Small hand-built networks used across tests, docs and the CLI examples.

use crate::model::{FlowScenario, Network, NetworkBuilder};

/// Looks up the first edge from `tail` to `head` by node name.
pub fn edge_between(net: &Network, tail: &str, head: &str) -> usize {
    let t = net.node_id(tail).expect("tail exists");
    let h = net.node_id(head).expect("head exists");
    net.edges()
        .iter()
        .find(|e| e.tail == t && e.head == h)
        .map(|e| e.id)
        .expect("edge exists")
}

/// Four nodes, five edges, uniform routing cost 0.01, total destruction on
/// attack. Small enough to reason about by hand, rich enough to exercise
/// rerouting:
///
/// ```text
///   s --10--> a --6--> t
///   s --5---> b --8--> t
///         a --4--> b
/// ```
pub fn small_diamond() -> Network {
    let mut b = NetworkBuilder::new();
    b.name("small-diamond");
    let s = b.add_node("s").unwrap();
    let a = b.add_node("a").unwrap();
    let bb = b.add_node("b").unwrap();
    let t = b.add_node("t").unwrap();
    b.add_edge(s, a, 10.0, 0.01, 0.0).unwrap();
    b.add_edge(s, bb, 5.0, 0.01, 0.0).unwrap();
    b.add_edge(a, t, 6.0, 0.01, 0.0).unwrap();
    b.add_edge(a, bb, 4.0, 0.01, 0.0).unwrap();
    b.add_edge(bb, t, 8.0, 0.01, 0.0).unwrap();
    b.set_source(s).unwrap();
    b.set_terminal(t).unwrap();
    b.build().unwrap()
}

/// A maximum-throughput committed flow on [`small_diamond`]: 14 units at
/// routing cost 0.32. All worked adjustment examples in the test-suite are
/// anchored to this flow. Note it is not the cheapest max flow — that one
/// routes (9, 5, 6, 3, 8) at cost 0.31 — but a heavier routing that leans on
/// the a->b detour, which makes the post-attack arithmetic more interesting.
pub fn small_diamond_committed_flow(net: &Network) -> FlowScenario {
    let mut flow = FlowScenario::zeros(net);
    flow.set(edge_between(net, "s", "a"), 10.0);
    flow.set(edge_between(net, "s", "b"), 4.0);
    flow.set(edge_between(net, "a", "t"), 6.0);
    flow.set(edge_between(net, "a", "b"), 4.0);
    flow.set(edge_between(net, "b", "t"), 8.0);
    flow.set(net.return_edge(), 14.0);
    flow
}

/// One edge from source to terminal.
pub fn single_edge(capacity: f64, cost: f64) -> Network {
    let mut b = NetworkBuilder::new();
    b.name("single-edge");
    let s = b.add_node("s").unwrap();
    let t = b.add_node("t").unwrap();
    b.add_edge(s, t, capacity, cost, 0.0).unwrap();
    b.set_source(s).unwrap();
    b.set_terminal(t).unwrap();
    b.build().unwrap()
}

/// Two node-disjoint s->t paths of the given capacity, cost-free.
pub fn two_disjoint_paths(capacity: f64) -> Network {
    let mut b = NetworkBuilder::new();
    b.name("two-paths");
    let s = b.add_node("s").unwrap();
    let u = b.add_node("u").unwrap();
    let v = b.add_node("v").unwrap();
    let t = b.add_node("t").unwrap();
    b.add_edge(s, u, capacity, 0.0, 0.0).unwrap();
    b.add_edge(u, t, capacity, 0.0, 0.0).unwrap();
    b.add_edge(s, v, capacity, 0.0, 0.0).unwrap();
    b.add_edge(v, t, capacity, 0.0, 0.0).unwrap();
    b.set_source(s).unwrap();
    b.set_terminal(t).unwrap();
    b.build().unwrap()
}

/// Eight nodes, eleven physical edges, cost-free. The committed flow ships
/// three parallel streams:
///
/// ```text
///   s -> n2 -(e26)-> n6 -----------(e6t)--> t     3 units
///   s -> n3 -(e37)-> n7 -----------(e7t)--> t     3 units
///   s -> n4 -(e45)-> n5 -----------(e5t)--> t     2 units
/// ```
///
/// plus two idle detour edges n3->n6 and n4->n6 that only become usable when
/// an upstream attack frees capacity on e6t. The marginal damage of attacking
/// e37 is 3 on its own, 0 after {e26}, and 2 after {e26, e45} — the gain
/// function is neither submodular nor supermodular.
pub fn modularity_witness() -> (Network, FlowScenario) {
    let mut b = NetworkBuilder::new();
    b.name("modularity-witness");
    let s = b.add_node("s").unwrap();
    let n2 = b.add_node("n2").unwrap();
    let n3 = b.add_node("n3").unwrap();
    let n4 = b.add_node("n4").unwrap();
    let n5 = b.add_node("n5").unwrap();
    let n6 = b.add_node("n6").unwrap();
    let n7 = b.add_node("n7").unwrap();
    let t = b.add_node("t").unwrap();
    let mut add = |tail, head, cap: f64| b.add_edge(tail, head, cap, 0.0, 0.0).unwrap();
    let s2 = add(s, n2, 3.0);
    let s3 = add(s, n3, 3.0);
    let s4 = add(s, n4, 2.0);
    let e26 = add(n2, n6, 3.0);
    let e37 = add(n3, n7, 3.0);
    let e45 = add(n4, n5, 2.0);
    let e36 = add(n3, n6, 3.0);
    let e46 = add(n4, n6, 2.0);
    let e6t = add(n6, t, 3.0);
    let e7t = add(n7, t, 3.0);
    let e5t = add(n5, t, 2.0);
    b.set_source(s).unwrap();
    b.set_terminal(t).unwrap();
    let net = b.build().unwrap();

    let mut flow = FlowScenario::zeros(&net);
    for (e, x) in [
        (s2, 3.0),
        (s3, 3.0),
        (s4, 2.0),
        (e26, 3.0),
        (e37, 3.0),
        (e45, 2.0),
        (e36, 0.0),
        (e46, 0.0),
        (e6t, 3.0),
        (e7t, 3.0),
        (e5t, 2.0),
        (net.return_edge(), 8.0),
    ] {
        flow.set(e, x);
    }
    (net, flow)
}
