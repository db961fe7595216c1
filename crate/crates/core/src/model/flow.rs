use super::network::{EdgeId, Network, NodeId};
use crate::EPS_FLOW;

/// A complete flow assignment, one value per edge id (return edge included).
#[derive(Debug, Clone, PartialEq)]
pub struct FlowScenario {
    values: Vec<f64>,
}

/// Flows serialize as an object keyed by edge id, in ascending edge order.
impl serde::Serialize for FlowScenario {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.values.len()))?;
        for (e, value) in self.values.iter().enumerate() {
            map.serialize_entry(&e.to_string(), value)?;
        }
        map.end()
    }
}

impl FlowScenario {
    pub fn zeros(net: &Network) -> Self {
        FlowScenario { values: vec![0.0; net.edge_count()] }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        FlowScenario { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> f64 {
        self.values[e]
    }

    pub fn set(&mut self, e: EdgeId, v: f64) {
        self.values[e] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Delivered flow: the value carried by the return edge.
    pub fn throughput(&self, net: &Network) -> f64 {
        self.values[net.return_edge()]
    }

    /// Total routing cost sum(p_e * x_e).
    pub fn routing_cost(&self, net: &Network) -> f64 {
        net.edges().iter().map(|e| e.cost * self.values[e.id]).sum()
    }

    /// Throughput net of routing cost; the administrator's committed value.
    pub fn net_value(&self, net: &Network) -> f64 {
        self.throughput(net) - self.routing_cost(net)
    }

    /// Gross flow leaving the source on physical edges.
    pub fn sent_from_source(&self, net: &Network) -> f64 {
        net.out_edges(net.source())
            .iter()
            .filter(|&&e| !net.is_return(e))
            .map(|&e| self.values[e])
            .sum()
    }

    pub fn linf_distance(&self, other: &FlowScenario) -> f64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &FlowScenario, tol: f64) -> bool {
        self.values.len() == other.values.len() && self.linf_distance(other) <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlowViolation {
    LengthMismatch { expected: usize, got: usize },
    NonFinite { edge: EdgeId },
    Negative { edge: EdgeId, value: f64 },
    OverCapacity { edge: EdgeId, value: f64, capacity: f64 },
    Conservation { node: NodeId, residual: f64 },
}

/// Outcome of [`validate_flow`]: all violations, not just the first.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<FlowViolation>,
    pub max_conservation_residual: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks capacity bounds, non-negativity and flow conservation at every node
/// except the source (the return edge makes conservation hold at the terminal
/// too). Tolerance `EPS_FLOW` absorbs solver round-off.
pub fn validate_flow(net: &Network, flow: &FlowScenario) -> ValidationReport {
    let mut report = ValidationReport::default();
    if flow.len() != net.edge_count() {
        report.violations.push(FlowViolation::LengthMismatch {
            expected: net.edge_count(),
            got: flow.len(),
        });
        return report;
    }
    for e in net.edges() {
        let x = flow.get(e.id);
        if !x.is_finite() {
            report.violations.push(FlowViolation::NonFinite { edge: e.id });
            continue;
        }
        if x < -EPS_FLOW {
            report.violations.push(FlowViolation::Negative { edge: e.id, value: x });
        }
        if x > e.capacity + EPS_FLOW {
            report.violations.push(FlowViolation::OverCapacity {
                edge: e.id,
                value: x,
                capacity: e.capacity,
            });
        }
    }
    for v in 0..net.node_count() {
        if v == net.source() {
            continue;
        }
        let inflow: f64 = net.in_edges(v).iter().map(|&e| flow.get(e)).sum();
        let outflow: f64 = net.out_edges(v).iter().map(|&e| flow.get(e)).sum();
        let residual = (inflow - outflow).abs();
        report.max_conservation_residual = report.max_conservation_residual.max(residual);
        if residual > EPS_FLOW {
            report.violations.push(FlowViolation::Conservation { node: v, residual });
        }
    }
    report
}
