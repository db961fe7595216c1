use std::collections::VecDeque;

use super::network::NodeId;

/// Precomputed directed reachability between all node pairs. Reflexive.
/// Backed by a bitset row per node.
#[derive(Debug, Clone)]
pub struct ReachabilityIndex {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ReachabilityIndex {
    pub fn build(n: usize, edges: impl Iterator<Item = (NodeId, NodeId)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            adj[u].push(v);
        }
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        let mut queue = VecDeque::new();
        for start in 0..n {
            let row = start * words;
            bits[row + start / 64] |= 1 << (start % 64);
            queue.clear();
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    let (word, bit) = (row + v / 64, 1u64 << (v % 64));
                    if bits[word] & bit == 0 {
                        bits[word] |= bit;
                        queue.push_back(v);
                    }
                }
            }
        }
        ReachabilityIndex { n, words, bits }
    }

    /// True iff a directed path from `u` to `v` exists (trivially for u == v).
    pub fn reaches(&self, u: NodeId, v: NodeId) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.bits[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }
}
