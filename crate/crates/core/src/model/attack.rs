use super::network::{EdgeId, Network};

/// A set of attacked edge ids, kept sorted so that attacks have a canonical
/// form: equality, ordering (lexicographic by edge id) and hashing all agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Attack {
    edges: Vec<EdgeId>,
}

impl Attack {
    pub fn empty() -> Self {
        Attack::default()
    }

    pub fn new(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut edges: Vec<EdgeId> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        Attack { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn with_edge(&self, e: EdgeId) -> Attack {
        let mut edges = self.edges.clone();
        match edges.binary_search(&e) {
            Ok(_) => {}
            Err(pos) => edges.insert(pos, e),
        }
        Attack { edges }
    }
}

/// Attacks serialize as the plain array of attacked edge ids.
impl serde::Serialize for Attack {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.edges.serialize(serializer)
    }
}

/// Rerouting eligibility under `attack`: edge e may carry flow up to its full
/// capacity (instead of the committed amount) iff it can lie on a detour for
/// some attacked edge. The detour test is the reachability relaxation: for an
/// attacked edge leaving node u, every edge whose tail is reachable from u and
/// whose head reaches the terminal is eligible. The return edge never is.
pub fn reroute_eligibility(net: &Network, attack: &Attack) -> Vec<bool> {
    let reach = net.reach();
    let t = net.terminal();
    let mut eligible = vec![false; net.edge_count()];
    for &attacked in attack.edges() {
        let u = net.edge(attacked).tail;
        for e in net.edges() {
            if e.id != net.return_edge() && !eligible[e.id] {
                eligible[e.id] = reach.reaches(u, e.tail) && reach.reaches(e.head, t);
            }
        }
    }
    eligible
}

/// Number of attacks with at most `gamma` edges drawn from the attackable
/// edge set: sum of binomial coefficients, saturating at u128::MAX.
pub fn attack_space_size(net: &Network, gamma: usize) -> u128 {
    let n = net.attackable_edges().len();
    let gamma = gamma.min(n);
    let mut total: u128 = 0;
    let mut choose: u128 = 1; // C(n, 0)
    for k in 0..=gamma {
        if k > 0 {
            choose = match choose
                .checked_mul((n - k + 1) as u128)
                .map(|c| c / k as u128)
            {
                Some(c) => c,
                None => return u128::MAX,
            };
        }
        total = match total.checked_add(choose) {
            Some(t) => t,
            None => return u128::MAX,
        };
    }
    total
}

/// Iterator over every attack of size 0..=gamma on the attackable edges, in
/// deterministic order: by size, then lexicographically by edge ids.
pub fn attack_space(net: &Network, gamma: usize) -> AttackSpace<'_> {
    let universe = net.attackable_edges();
    AttackSpace {
        universe,
        gamma: gamma.min(universe.len()),
        size: 0,
        indices: Vec::new(),
        started: false,
        done: false,
    }
}

pub struct AttackSpace<'a> {
    universe: &'a [EdgeId],
    gamma: usize,
    size: usize,
    indices: Vec<usize>,
    started: bool,
    done: bool,
}

impl Iterator for AttackSpace<'_> {
    type Item = Attack;

    fn next(&mut self) -> Option<Attack> {
        if self.done {
            return None;
        }
        if !self.started {
            // The empty attack opens the enumeration.
            self.started = true;
            self.indices.clear();
        } else if !advance(&mut self.indices, self.universe.len()) {
            self.size += 1;
            if self.size > self.gamma {
                self.done = true;
                return None;
            }
            self.indices = (0..self.size).collect();
        }
        let edges = self.indices.iter().map(|&i| self.universe[i]);
        Some(Attack { edges: edges.collect() })
    }
}

/// Advances a sorted index combination to its lexicographic successor.
pub(crate) fn advance(indices: &mut [usize], n: usize) -> bool {
    let k = indices.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if indices[i] < n - (k - i) {
            indices[i] += 1;
            for j in i + 1..k {
                indices[j] = indices[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
