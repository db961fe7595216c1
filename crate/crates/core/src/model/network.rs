use std::collections::HashMap;

use thiserror::Error;

use super::reach::ReachabilityIndex;

pub type NodeId = usize;
pub type EdgeId = usize;

/// A directed capacitated edge. `post_attack_capacity` is what remains of the
/// capacity when the edge is attacked (0 for total destruction).
#[derive(Debug, Clone)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: f64,
    pub cost: f64,
    pub post_attack_capacity: f64,
    /// False for the circulation return edge and structural helper edges.
    pub attackable: bool,
}

#[derive(Debug, Error)]
pub enum NetError {
    #[error("duplicate node name {0:?}")]
    DuplicateNode(String),
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("self-loop on node {0:?}")]
    SelfLoop(String),
    #[error("edge {tail:?} -> {head:?} has non-positive capacity {capacity}")]
    BadCapacity { tail: String, head: String, capacity: f64 },
    #[error("edge {tail:?} -> {head:?} has invalid cost {cost}")]
    BadCost { tail: String, head: String, cost: f64 },
    #[error("edge {tail:?} -> {head:?} has post-attack capacity {residual} outside [0, {capacity}]")]
    BadResidualCapacity { tail: String, head: String, residual: f64, capacity: f64 },
    #[error("no source node designated")]
    NoSource,
    #[error("no terminal node designated")]
    NoTerminal,
    #[error("source and terminal are the same node {0:?}")]
    SourceIsTerminal(String),
    #[error("node {0:?} has no incident edges")]
    IsolatedNode(String),
    #[error("network needs at least two nodes")]
    TooSmall,
}

/// Immutable directed network with a single source, a single terminal and an
/// artificial terminal->source return edge that closes the circulation.
///
/// Edge ids are dense indices in insertion order; the return edge is always
/// the last id. Reachability is precomputed over all edges except the return
/// edge (reroute paths never traverse it).
#[derive(Debug, Clone)]
pub struct Network {
    name: String,
    nodes: Vec<String>,
    edges: Vec<Edge>,
    source: NodeId,
    terminal: NodeId,
    return_edge: EdgeId,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    attackable: Vec<EdgeId>,
    reach: ReachabilityIndex,
    /// Free-form notes accumulated while building (repairs, warnings).
    pub metadata: Vec<String>,
}

impl Network {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::new()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn terminal(&self) -> NodeId {
        self.terminal
    }

    pub fn return_edge(&self) -> EdgeId {
        self.return_edge
    }

    pub fn is_return(&self, e: EdgeId) -> bool {
        e == self.return_edge
    }

    pub fn node_name(&self, v: NodeId) -> &str {
        &self.nodes[v]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// Edge ids eligible for attack, sorted ascending.
    pub fn attackable_edges(&self) -> &[EdgeId] {
        &self.attackable
    }

    pub fn reach(&self) -> &ReachabilityIndex {
        &self.reach
    }

    /// Largest finite capacity over attackable edges (normalisation base for
    /// reporting relative gains).
    pub fn max_attackable_capacity(&self) -> f64 {
        self.attackable
            .iter()
            .map(|&e| self.edges[e].capacity)
            .filter(|c| c.is_finite())
            .fold(0.0, f64::max)
    }

    /// Copy of the network where every edge in `attacked` has its capacity
    /// clamped to its post-attack residual.
    pub fn with_attack_applied(&self, attacked: &[EdgeId]) -> Network {
        let mut net = self.clone();
        for &e in attacked {
            let cap = net.edges[e].post_attack_capacity;
            net.edges[e].capacity = cap;
        }
        net
    }

    /// Uniformly overrides the post-attack residual capacity of every
    /// attackable edge (clamped to the edge capacity).
    pub fn with_residual_capacity(&self, residual: f64) -> Network {
        let mut net = self.clone();
        for e in &mut net.edges {
            if e.attackable {
                e.post_attack_capacity = residual.min(e.capacity).max(0.0);
            }
        }
        net
    }

    pub fn with_name(mut self, name: &str) -> Network {
        self.name = name.to_string();
        self
    }
}

#[derive(Debug, Clone)]
struct EdgeSpec {
    tail: NodeId,
    head: NodeId,
    capacity: f64,
    cost: f64,
    post_attack_capacity: f64,
    attackable: bool,
}

/// Incremental construction of a [`Network`]. Multiple sources or terminals
/// are folded into single super nodes by [`transform_multi_terminal`], which
/// `build` calls implicitly.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    name: String,
    nodes: Vec<String>,
    node_index: HashMap<String, NodeId>,
    edges: Vec<EdgeSpec>,
    sources: Vec<NodeId>,
    terminals: Vec<NodeId>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        NetworkBuilder { name: "unnamed".to_string(), ..Default::default() }
    }

    pub fn name(&mut self, name: &str) -> &mut Self {
        self.name = name.to_string();
        self
    }

    pub fn add_node(&mut self, name: &str) -> Result<NodeId, NetError> {
        if self.node_index.contains_key(name) {
            return Err(NetError::DuplicateNode(name.to_string()));
        }
        let id = self.nodes.len();
        self.nodes.push(name.to_string());
        self.node_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Returns the id for `name`, creating the node on first use.
    pub fn intern_node(&mut self, name: &str) -> NodeId {
        match self.node_index.get(name) {
            Some(&id) => id,
            None => self.add_node(name).expect("fresh node"),
        }
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.node_index.get(name).copied()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(
        &mut self,
        tail: NodeId,
        head: NodeId,
        capacity: f64,
        cost: f64,
        post_attack_capacity: f64,
    ) -> Result<usize, NetError> {
        self.push_edge(tail, head, capacity, cost, post_attack_capacity, true)
    }

    fn push_edge(
        &mut self,
        tail: NodeId,
        head: NodeId,
        capacity: f64,
        cost: f64,
        post_attack_capacity: f64,
        attackable: bool,
    ) -> Result<usize, NetError> {
        let node_name = |id: NodeId| self.nodes.get(id).cloned().unwrap_or_else(|| format!("#{id}"));
        if tail >= self.nodes.len() {
            return Err(NetError::UnknownNode(tail));
        }
        if head >= self.nodes.len() {
            return Err(NetError::UnknownNode(head));
        }
        if tail == head {
            return Err(NetError::SelfLoop(node_name(tail)));
        }
        if capacity.is_nan() || capacity <= 0.0 {
            return Err(NetError::BadCapacity { tail: node_name(tail), head: node_name(head), capacity });
        }
        if !cost.is_finite() || cost < 0.0 {
            return Err(NetError::BadCost { tail: node_name(tail), head: node_name(head), cost });
        }
        if !post_attack_capacity.is_finite()
            || post_attack_capacity < 0.0
            || post_attack_capacity > capacity
        {
            return Err(NetError::BadResidualCapacity {
                tail: node_name(tail),
                head: node_name(head),
                residual: post_attack_capacity,
                capacity,
            });
        }
        self.edges.push(EdgeSpec { tail, head, capacity, cost, post_attack_capacity, attackable });
        Ok(self.edges.len() - 1)
    }

    pub fn add_source(&mut self, v: NodeId) -> Result<&mut Self, NetError> {
        if v >= self.nodes.len() {
            return Err(NetError::UnknownNode(v));
        }
        if !self.sources.contains(&v) {
            self.sources.push(v);
        }
        Ok(self)
    }

    pub fn add_terminal(&mut self, v: NodeId) -> Result<&mut Self, NetError> {
        if v >= self.nodes.len() {
            return Err(NetError::UnknownNode(v));
        }
        if !self.terminals.contains(&v) {
            self.terminals.push(v);
        }
        Ok(self)
    }

    pub fn set_source(&mut self, v: NodeId) -> Result<&mut Self, NetError> {
        self.sources.clear();
        self.add_source(v)
    }

    pub fn set_terminal(&mut self, v: NodeId) -> Result<&mut Self, NetError> {
        self.terminals.clear();
        self.add_terminal(v)
    }

    pub fn build(self) -> Result<Network, NetError> {
        transform_multi_terminal(self)
    }
}

/// Folds a multi-source / multi-sink description into the single-source
/// single-terminal form the solvers expect: a super source feeds every
/// declared source through uncapacitated cost-free edges (symmetrically for
/// terminals), then the artificial return edge closes the circulation.
/// Single-source single-sink inputs pass through unchanged apart from the
/// return edge.
pub fn transform_multi_terminal(mut builder: NetworkBuilder) -> Result<Network, NetError> {
    if builder.nodes.len() < 2 {
        return Err(NetError::TooSmall);
    }
    if builder.sources.is_empty() {
        return Err(NetError::NoSource);
    }
    if builder.terminals.is_empty() {
        return Err(NetError::NoTerminal);
    }

    let mut metadata = Vec::new();

    let source = if builder.sources.len() == 1 {
        builder.sources[0]
    } else {
        let sources = builder.sources.clone();
        let sup = builder.add_node("@source")?;
        for s in sources {
            builder.push_edge(sup, s, f64::INFINITY, 0.0, 0.0, false)?;
        }
        metadata.push(format!("super source over {} nodes", builder.sources.len()));
        sup
    };
    let terminal = if builder.terminals.len() == 1 {
        builder.terminals[0]
    } else {
        let terminals = builder.terminals.clone();
        let sup = builder.add_node("@terminal")?;
        for t in terminals {
            builder.push_edge(t, sup, f64::INFINITY, 0.0, 0.0, false)?;
        }
        metadata.push(format!("super terminal over {} nodes", builder.terminals.len()));
        sup
    };
    if source == terminal {
        return Err(NetError::SourceIsTerminal(builder.nodes[source].clone()));
    }

    // Isolated nodes cannot participate in any flow; reject them early. The
    // source/terminal are exempt because the return edge touches them.
    let mut incident = vec![false; builder.nodes.len()];
    incident[source] = true;
    incident[terminal] = true;
    for e in &builder.edges {
        incident[e.tail] = true;
        incident[e.head] = true;
    }
    if let Some(v) = incident.iter().position(|&ok| !ok) {
        return Err(NetError::IsolatedNode(builder.nodes[v].clone()));
    }

    let return_edge = builder.edges.len();
    builder.push_edge(terminal, source, f64::INFINITY, 0.0, 0.0, false)?;

    let n = builder.nodes.len();
    let edges: Vec<Edge> = builder
        .edges
        .iter()
        .enumerate()
        .map(|(id, e)| Edge {
            id,
            tail: e.tail,
            head: e.head,
            capacity: e.capacity,
            cost: e.cost,
            post_attack_capacity: e.post_attack_capacity,
            attackable: e.attackable,
        })
        .collect();

    let mut out_edges = vec![Vec::new(); n];
    let mut in_edges = vec![Vec::new(); n];
    for e in &edges {
        out_edges[e.tail].push(e.id);
        in_edges[e.head].push(e.id);
    }
    let attackable: Vec<EdgeId> = edges.iter().filter(|e| e.attackable).map(|e| e.id).collect();

    // Routing costs are assumed small relative to the unit value of delivered
    // flow; N-1 bounds the length of any simple path, so this check is
    // conservative. Violations only degrade the model, hence a note not an
    // error.
    let cost_bound = 1.0 / (2.0 * (n as f64 - 1.0));
    let worst_cost = edges.iter().map(|e| e.cost).fold(0.0, f64::max);
    if worst_cost > cost_bound {
        metadata.push(format!(
            "routing cost {worst_cost} exceeds 1/(2(N-1)) = {cost_bound:.6}; rerouting may be mispriced"
        ));
    }

    let reach = ReachabilityIndex::build(n, edges.iter().filter(|e| e.id != return_edge).map(|e| (e.tail, e.head)));

    Ok(Network {
        name: builder.name,
        nodes: builder.nodes,
        edges,
        source,
        terminal,
        return_edge,
        out_edges,
        in_edges,
        attackable,
        reach,
        metadata,
    })
}
