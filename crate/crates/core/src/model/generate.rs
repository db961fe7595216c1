use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::network::{NetError, Network, NetworkBuilder};

/// Parameters for [`generate_random`]. Capacities are drawn uniformly from
/// `capacity_range` (integer-valued when both endpoints are integers, which
/// keeps instances readable), costs uniformly from `cost_range`.
#[derive(Debug, Clone)]
pub struct RandomNetParams {
    pub nodes: usize,
    pub density: f64,
    pub capacity_range: (f64, f64),
    pub cost_range: (f64, f64),
    pub seed: u64,
}

/// An edge before network construction; what parsers and the generator
/// assemble prior to validation.
#[derive(Debug, Clone)]
pub struct RawEdge {
    pub tail: usize,
    pub head: usize,
    pub capacity: f64,
    pub cost: f64,
}

fn sample_capacity(rng: &mut ChaCha8Rng, range: (f64, f64)) -> f64 {
    let (lo, hi) = range;
    if lo.fract() == 0.0 && hi.fract() == 0.0 && hi >= lo {
        rng.gen_range(lo as i64..=hi as i64) as f64
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Seeded uniform random network: node 0 is the source, the last node the
/// terminal, and each ordered node pair carries an edge with probability
/// `density`. If some node ends up off every source->terminal walk, repair
/// edges are added (recorded in the network metadata). Pure function of its
/// arguments: the same parameters always produce the identical network.
pub fn generate_random(params: &RandomNetParams) -> Result<Network, NetError> {
    if params.nodes < 2 {
        return Err(NetError::TooSmall);
    }
    let n = params.nodes;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen::<f64>() < params.density {
                edges.push(RawEdge {
                    tail: u,
                    head: v,
                    capacity: sample_capacity(&mut rng, params.capacity_range),
                    cost: rng.gen_range(params.cost_range.0..=params.cost_range.1),
                });
            }
        }
    }
    let repaired = repair_connectivity(
        n,
        0,
        n - 1,
        &mut edges,
        &mut rng,
        params.capacity_range,
        params.cost_range,
    );

    let mut builder = NetworkBuilder::new();
    builder.name(&format!("random-n{}-d{}-s{}", n, params.density, params.seed));
    for v in 0..n {
        builder.add_node(&format!("n{v}"))?;
    }
    for e in &edges {
        builder.add_edge(e.tail, e.head, e.capacity, e.cost, 0.0)?;
    }
    builder.set_source(0)?;
    builder.set_terminal(n - 1)?;
    let mut net = builder.build()?;
    if repaired > 0 {
        net.metadata.push(format!("connectivity repair added {repaired} edges"));
    }
    Ok(net)
}

/// Adds seeded random edges until every node lies on some source->terminal
/// walk (reachable from the source and able to reach the terminal). Returns
/// the number of edges added. Shared by the generator and instance loaders
/// whose on-disk formats do not guarantee connectivity.
pub fn repair_connectivity(
    n: usize,
    source: usize,
    terminal: usize,
    edges: &mut Vec<RawEdge>,
    rng: &mut ChaCha8Rng,
    capacity_range: (f64, f64),
    cost_range: (f64, f64),
) -> usize {
    let mut added = 0;
    loop {
        let from_source = reachable_set(n, edges, source, false);
        let to_terminal = reachable_set(n, edges, terminal, true);
        let mut fixed_one = false;
        for v in 0..n {
            if !from_source[v] {
                // Hook v up from some node the source already reaches.
                let candidates: Vec<usize> =
                    (0..n).filter(|&u| from_source[u] && u != v).collect();
                let u = candidates[rng.gen_range(0..candidates.len())];
                edges.push(RawEdge {
                    tail: u,
                    head: v,
                    capacity: sample_capacity(rng, capacity_range),
                    cost: rng.gen_range(cost_range.0..=cost_range.1),
                });
                added += 1;
                fixed_one = true;
                break;
            }
            if !to_terminal[v] {
                let candidates: Vec<usize> =
                    (0..n).filter(|&u| to_terminal[u] && u != v).collect();
                let u = candidates[rng.gen_range(0..candidates.len())];
                edges.push(RawEdge {
                    tail: v,
                    head: u,
                    capacity: sample_capacity(rng, capacity_range),
                    cost: rng.gen_range(cost_range.0..=cost_range.1),
                });
                added += 1;
                fixed_one = true;
                break;
            }
        }
        if !fixed_one {
            return added;
        }
    }
}

/// Nodes reachable from `start` following edges forward (`reverse = false`)
/// or backward (`reverse = true`).
fn reachable_set(n: usize, edges: &[RawEdge], start: usize, reverse: bool) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        if reverse {
            adj[e.head].push(e.tail);
        } else {
            adj[e.tail].push(e.head);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}
