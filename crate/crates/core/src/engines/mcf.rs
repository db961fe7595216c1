//! Successive-shortest-path flow machinery shared by the engines in this
//! module.
//!
//! All engines route flow along cheapest augmenting paths found by Dijkstra
//! with node potentials, stopping once the marginal path cost reaches the
//! value of delivering one more unit (1 per unit crossing the return edge).
//! Arc and node scans always run in ascending index order and heap entries
//! carry a total order, so the augmenting sequence is fully deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::model::{FlowScenario, Network};

/// Augmenting stops when a path costs at least `1 - COST_CEILING_EPS`.
pub(crate) const COST_CEILING_EPS: f64 = 1e-12;
/// Residual capacities below this are treated as exhausted.
pub(crate) const RESIDUAL_EPS: f64 = 1e-9;

/// A forward arc of a path-flow instance. Residual traversal uses the arc in
/// both directions.
#[derive(Debug, Clone)]
pub(crate) struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
    pub cost: f64,
    pub flow: f64,
}

impl Arc {
    pub(crate) fn new(from: usize, to: usize, capacity: f64, cost: f64) -> Arc {
        Arc { from, to, capacity, cost, flow: 0.0 }
    }
}

/// Min-heap key: distance first, node index as the deterministic tie-break.
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the smallest distance.
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

#[derive(Debug, Clone, Copy)]
struct ParentStep {
    arc: u32,
    backward: bool,
}

/// Reusable successive-shortest-path engine. Buffers persist across calls so
/// hot loops (adversary evaluations) avoid reallocation.
#[derive(Default)]
pub(crate) struct SspSolver {
    dist: Vec<f64>,
    potential: Vec<f64>,
    parent: Vec<Option<ParentStep>>,
    adj_out: Vec<Vec<u32>>,
    adj_in: Vec<Vec<u32>>,
    heap: BinaryHeap<HeapEntry>,
}

impl SspSolver {
    pub(crate) fn new() -> SspSolver {
        SspSolver::default()
    }

    /// Routes up to `max_units` from `source` to `terminal` along cheapest
    /// residual paths while a path costs less than `cost_ceiling`. Arc flows
    /// are left in `arcs`; the total routed amount is returned.
    pub(crate) fn run(
        &mut self,
        node_count: usize,
        arcs: &mut [Arc],
        source: usize,
        terminal: usize,
        max_units: f64,
        cost_ceiling: f64,
    ) -> f64 {
        if max_units <= RESIDUAL_EPS {
            return 0.0;
        }
        self.prepare(node_count, arcs);
        let mut total = 0.0;
        loop {
            if !self.dijkstra(node_count, arcs, source, terminal) {
                break;
            }
            // Distances are in reduced costs; recover the true path cost by
            // walking the parent chain.
            let mut true_cost = 0.0;
            let mut v = terminal;
            while v != source {
                let step = self.parent[v].expect("reached node lacks a parent");
                let arc = &arcs[step.arc as usize];
                if step.backward {
                    true_cost -= arc.cost;
                    v = arc.to;
                } else {
                    true_cost += arc.cost;
                    v = arc.from;
                }
            }
            if true_cost >= cost_ceiling {
                break;
            }
            for v in 0..node_count {
                if self.dist[v].is_finite() {
                    self.potential[v] += self.dist[v];
                }
            }
            let mut bottleneck = max_units - total;
            let mut v = terminal;
            while v != source {
                let step = self.parent[v].expect("reached node lacks a parent");
                let arc = &arcs[step.arc as usize];
                let residual = if step.backward { arc.flow } else { arc.capacity - arc.flow };
                bottleneck = bottleneck.min(residual);
                v = if step.backward { arc.to } else { arc.from };
            }
            if bottleneck <= RESIDUAL_EPS {
                break;
            }
            let mut v = terminal;
            while v != source {
                let step = self.parent[v].expect("reached node lacks a parent");
                let arc = &mut arcs[step.arc as usize];
                if step.backward {
                    arc.flow -= bottleneck;
                    v = arc.to;
                } else {
                    arc.flow += bottleneck;
                    v = arc.from;
                }
            }
            total += bottleneck;
            if total >= max_units - RESIDUAL_EPS {
                break;
            }
        }
        total
    }

    fn prepare(&mut self, node_count: usize, arcs: &[Arc]) {
        self.dist.resize(node_count, f64::INFINITY);
        self.potential.clear();
        self.potential.resize(node_count, 0.0);
        self.parent.resize(node_count, None);
        self.adj_out.resize_with(node_count, Vec::new);
        self.adj_in.resize_with(node_count, Vec::new);
        for adj in &mut self.adj_out[..node_count] {
            adj.clear();
        }
        for adj in &mut self.adj_in[..node_count] {
            adj.clear();
        }
        for (i, arc) in arcs.iter().enumerate() {
            self.adj_out[arc.from].push(i as u32);
            self.adj_in[arc.to].push(i as u32);
        }
    }

    /// Shortest reduced-cost distances from `source`; true when `terminal`
    /// is reachable in the residual graph.
    fn dijkstra(
        &mut self,
        node_count: usize,
        arcs: &[Arc],
        source: usize,
        terminal: usize,
    ) -> bool {
        self.dist[..node_count].fill(f64::INFINITY);
        self.parent[..node_count].fill(None);
        self.heap.clear();
        self.dist[source] = 0.0;
        self.heap.push(HeapEntry { dist: 0.0, node: source });
        while let Some(HeapEntry { dist, node }) = self.heap.pop() {
            if dist > self.dist[node] {
                continue;
            }
            for &ai in &self.adj_out[node] {
                let arc = &arcs[ai as usize];
                if arc.capacity - arc.flow <= RESIDUAL_EPS {
                    continue;
                }
                let rc = (arc.cost + self.potential[node] - self.potential[arc.to]).max(0.0);
                let nd = dist + rc;
                if nd < self.dist[arc.to] - 1e-15 {
                    self.dist[arc.to] = nd;
                    self.parent[arc.to] = Some(ParentStep { arc: ai, backward: false });
                    self.heap.push(HeapEntry { dist: nd, node: arc.to });
                }
            }
            for &ai in &self.adj_in[node] {
                let arc = &arcs[ai as usize];
                if arc.flow <= RESIDUAL_EPS {
                    continue;
                }
                let rc = (-arc.cost + self.potential[node] - self.potential[arc.from]).max(0.0);
                let nd = dist + rc;
                if nd < self.dist[arc.from] - 1e-15 {
                    self.dist[arc.from] = nd;
                    self.parent[arc.from] = Some(ParentStep { arc: ai, backward: true });
                    self.heap.push(HeapEntry { dist: nd, node: arc.from });
                }
            }
        }
        self.dist[terminal].is_finite()
    }
}

/// Routes as much profitable flow as possible from source to terminal:
/// every unit delivered is worth 1, every unit-kilometre of routing costs the
/// edge's toll, and augmentation stops once the cheapest remaining path
/// would cost at least as much as it earns.
pub fn max_flow_min_cost(net: &Network) -> FlowScenario {
    let mut solver = SspSolver::new();
    max_flow_min_cost_with(net, &mut solver)
}

pub(crate) fn max_flow_min_cost_with(net: &Network, solver: &mut SspSolver) -> FlowScenario {
    let mut arcs: Vec<Arc> = (0..net.return_edge())
        .map(|e| {
            let edge = net.edge(e);
            Arc::new(edge.tail, edge.head, edge.capacity, edge.cost)
        })
        .collect();
    let total = solver.run(
        net.node_count(),
        &mut arcs,
        net.source(),
        net.terminal(),
        f64::INFINITY,
        1.0 - COST_CEILING_EPS,
    );
    let mut flow = FlowScenario::zeros(net);
    for (e, arc) in arcs.iter().enumerate() {
        flow.set(e, arc.flow);
    }
    flow.set(net.return_edge(), total);
    flow
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_flow;
    use crate::samples;

    #[test]
    fn diamond_routes_fourteen_units_cheaply() {
        let net = samples::small_diamond();
        let flow = max_flow_min_cost(&net);
        assert!(validate_flow(&net, &flow).is_valid());
        assert!((flow.throughput(&net) - 14.0).abs() < 1e-9);
        // 14 units delivered over 31 edge-units: both two-hop paths run
        // full (6 + 5) and only 3 units take the three-hop detour. The
        // heavier 32-edge-unit routing of the committed fixture is feasible
        // but not cheapest.
        let e = |t, h| samples::edge_between(&net, t, h);
        assert!((flow.get(e("s", "a")) - 9.0).abs() < 1e-9);
        assert!((flow.get(e("s", "b")) - 5.0).abs() < 1e-9);
        assert!((flow.get(e("a", "t")) - 6.0).abs() < 1e-9);
        assert!((flow.get(e("a", "b")) - 3.0).abs() < 1e-9);
        assert!((flow.get(e("b", "t")) - 8.0).abs() < 1e-9);
        assert!((flow.net_value(&net) - 13.69).abs() < 1e-9);
    }

    #[test]
    fn expensive_paths_left_unused() {
        // Two parallel edges; the second one's toll exceeds the unit reward.
        let mut b = Network::builder();
        let s = b.add_node("s").unwrap();
        let t = b.add_node("t").unwrap();
        b.add_edge(s, t, 5.0, 0.2, 0.0).unwrap();
        b.add_edge(s, t, 5.0, 1.5, 0.0).unwrap();
        b.set_source(s).unwrap();
        b.set_terminal(t).unwrap();
        let net = b.build().unwrap();
        let flow = max_flow_min_cost(&net);
        assert!((flow.get(0) - 5.0).abs() < 1e-9);
        assert!(flow.get(1).abs() < 1e-9);
        assert!((flow.throughput(&net) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn rich_path_preferred_then_detour() {
        // s -> a -> t cheap, s -> b -> t dear but still profitable.
        let mut b = Network::builder();
        let s = b.add_node("s").unwrap();
        let a = b.add_node("a").unwrap();
        let bb = b.add_node("b").unwrap();
        let t = b.add_node("t").unwrap();
        b.add_edge(s, a, 3.0, 0.01, 0.0).unwrap();
        b.add_edge(a, t, 3.0, 0.01, 0.0).unwrap();
        b.add_edge(s, bb, 2.0, 0.3, 0.0).unwrap();
        b.add_edge(bb, t, 2.0, 0.3, 0.0).unwrap();
        b.set_source(s).unwrap();
        b.set_terminal(t).unwrap();
        let net = b.build().unwrap();
        let flow = max_flow_min_cost(&net);
        assert!((flow.throughput(&net) - 5.0).abs() < 1e-9);
        assert!((flow.net_value(&net) - (5.0 - 0.06 - 1.2)).abs() < 1e-9);
    }

    #[test]
    fn unprofitable_edge_carries_nothing() {
        // A toll above the unit reward makes shipping pointless.
        let net = samples::single_edge(5.0, 1.5);
        let flow = max_flow_min_cost(&net);
        assert_eq!(flow.throughput(&net), 0.0);
    }

    #[test]
    fn negative_reduced_cost_never_panics_on_reroute() {
        // Forces a backward-arc traversal: the first path uses the middle
        // edge, the second must partially undo it.
        let mut b = Network::builder();
        let s = b.add_node("s").unwrap();
        let a = b.add_node("a").unwrap();
        let c = b.add_node("c").unwrap();
        let t = b.add_node("t").unwrap();
        b.add_edge(s, a, 1.0, 0.0, 0.0).unwrap();
        b.add_edge(a, c, 1.0, 0.0, 0.0).unwrap();
        b.add_edge(c, t, 1.0, 0.0, 0.0).unwrap();
        b.add_edge(s, c, 1.0, 0.05, 0.0).unwrap();
        b.add_edge(a, t, 1.0, 0.05, 0.0).unwrap();
        b.set_source(s).unwrap();
        b.set_terminal(t).unwrap();
        let net = b.build().unwrap();
        let flow = max_flow_min_cost(&net);
        assert!((flow.throughput(&net) - 2.0).abs() < 1e-9);
        assert!(validate_flow(&net, &flow).is_valid());
    }
}
