//! Minimum s-t cut over the physical edges, by plain augmenting-path max
//! flow (costs ignored) followed by a residual-reachability sweep.

use std::collections::VecDeque;

use crate::model::{EdgeId, Network, NodeId};

use super::mcf::RESIDUAL_EPS;

/// A minimum cut: the source-side node set, the edges crossing it, and
/// their combined capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct MinCut {
    pub source_side: Vec<NodeId>,
    pub cut_edges: Vec<EdgeId>,
    pub capacity: f64,
}

/// Computes a minimum s-t cut. Breadth-first augmentation scans edges in
/// ascending id order, so the returned cut is the same on every run.
pub fn min_cut(net: &Network) -> MinCut {
    let n = net.node_count();
    let ret = net.return_edge();
    let mut flow = vec![0.0; ret];

    let mut parent: Vec<Option<(EdgeId, bool)>> = vec![None; n];
    let mut queue = VecDeque::new();
    loop {
        parent.iter_mut().for_each(|p| *p = None);
        queue.clear();
        queue.push_back(net.source());
        let mut reached_terminal = false;
        'bfs: while let Some(u) = queue.pop_front() {
            for &e in net.out_edges(u) {
                if e == ret {
                    continue;
                }
                let edge = net.edge(e);
                if edge.capacity - flow[e] <= RESIDUAL_EPS {
                    continue;
                }
                if parent[edge.head].is_none() && edge.head != net.source() {
                    parent[edge.head] = Some((e, false));
                    if edge.head == net.terminal() {
                        reached_terminal = true;
                        break 'bfs;
                    }
                    queue.push_back(edge.head);
                }
            }
            for &e in net.in_edges(u) {
                if e == ret {
                    continue;
                }
                if flow[e] <= RESIDUAL_EPS {
                    continue;
                }
                let edge = net.edge(e);
                if parent[edge.tail].is_none() && edge.tail != net.source() {
                    parent[edge.tail] = Some((e, true));
                    if edge.tail == net.terminal() {
                        reached_terminal = true;
                        break 'bfs;
                    }
                    queue.push_back(edge.tail);
                }
            }
        }
        if !reached_terminal {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = net.terminal();
        while v != net.source() {
            let (e, backward) = parent[v].expect("path step");
            let edge = net.edge(e);
            if backward {
                bottleneck = bottleneck.min(flow[e]);
                v = edge.head;
            } else {
                bottleneck = bottleneck.min(edge.capacity - flow[e]);
                v = edge.tail;
            }
        }
        let mut v = net.terminal();
        while v != net.source() {
            let (e, backward) = parent[v].expect("path step");
            let edge = net.edge(e);
            if backward {
                flow[e] -= bottleneck;
                v = edge.head;
            } else {
                flow[e] += bottleneck;
                v = edge.tail;
            }
        }
    }

    // Source side = still residually reachable from s.
    let mut in_cut = vec![false; n];
    in_cut[net.source()] = true;
    queue.clear();
    queue.push_back(net.source());
    while let Some(u) = queue.pop_front() {
        for &e in net.out_edges(u) {
            if e == ret {
                continue;
            }
            let edge = net.edge(e);
            if edge.capacity - flow[e] > RESIDUAL_EPS && !in_cut[edge.head] {
                in_cut[edge.head] = true;
                queue.push_back(edge.head);
            }
        }
        for &e in net.in_edges(u) {
            if e == ret {
                continue;
            }
            let edge = net.edge(e);
            if flow[e] > RESIDUAL_EPS && !in_cut[edge.tail] {
                in_cut[edge.tail] = true;
                queue.push_back(edge.tail);
            }
        }
    }

    let source_side: Vec<NodeId> = (0..n).filter(|&v| in_cut[v]).collect();
    let cut_edges: Vec<EdgeId> = (0..ret)
        .filter(|&e| {
            let edge = net.edge(e);
            in_cut[edge.tail] && !in_cut[edge.head]
        })
        .collect();
    let capacity = cut_edges.iter().map(|&e| net.edge(e).capacity).sum();
    MinCut { source_side, cut_edges, capacity }
}
