//! Topology-weighted purity and F-measure.
//!
//! Each node's purity is weighted by how strongly it is anchored in its
//! reference community. With the default scheme a node weighs
//! `d_int(u) / max_v d(v)`: its degree normalized by the largest degree,
//! times its embeddedness. Misclassifying a community hub therefore costs
//! more than misclassifying a node sitting on a community boundary.
//!
//! Weights are always computed against the reference partition, so the
//! same weights serve both directions of the weighted purity.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::measures::{harmonic_mean, node_purities};
use crate::partition::Partition;

/// How node importance is derived from the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// Internal degree over the maximal degree of the graph.
    InternalDegree,
    /// `1/n` for every node; reduces weighted purity to plain purity.
    Uniform,
    /// Internal strength over the maximal strength, for weighted links.
    Strength,
    /// Caller-supplied weights.
    Custom,
}

impl WeightScheme {
    pub fn name(self) -> &'static str {
        match self {
            WeightScheme::InternalDegree => "internal-degree",
            WeightScheme::Uniform => "uniform",
            WeightScheme::Strength => "strength",
            WeightScheme::Custom => "custom",
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "internal-degree" => Ok(WeightScheme::InternalDegree),
            "uniform" => Ok(WeightScheme::Uniform),
            "strength" => Ok(WeightScheme::Strength),
            other => Err(Error::InvalidConfig(format!(
                "unknown weight scheme {other:?}"
            ))),
        }
    }
}

/// Non-negative per-node weights, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeights {
    values: Vec<f64>,
    total: f64,
    scheme: WeightScheme,
}

impl NodeWeights {
    /// Wraps arbitrary non-negative weights.
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        Self::new(values, WeightScheme::Custom)
    }

    fn new(values: Vec<f64>, scheme: WeightScheme) -> Result<Self> {
        if let Some((i, &w)) = values
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::NegativeWeight {
                node: format!("#{i}"),
                weight: w,
            });
        }
        let total = values.iter().sum();
        Ok(Self {
            values,
            total,
            scheme,
        })
    }

    pub fn uniform(n: usize) -> Self {
        let w = if n == 0 { 0.0 } else { 1.0 / n as f64 };
        Self::new(vec![w; n], WeightScheme::Uniform).expect("uniform weights are valid")
    }

    pub fn get(&self, u: NodeId) -> f64 {
        self.values[u.index()]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Node weights of `g` anchored on the `reference` partition.
pub fn node_weights(g: &Graph, reference: &Partition, scheme: WeightScheme) -> Result<NodeWeights> {
    if !g.nodes().same_as(reference.nodes()) {
        return Err(Error::MismatchedNodeSets);
    }
    let n = g.node_count();
    match scheme {
        WeightScheme::Uniform => Ok(NodeWeights::uniform(n)),
        WeightScheme::InternalDegree => {
            let max = g.max_degree()?;
            if max == 0 {
                return Err(Error::EdgelessGraph);
            }
            let values = g
                .nodes()
                .ids()
                .map(|u| Ok(g.internal_degree(reference, u)? as f64 / max as f64))
                .collect::<Result<Vec<_>>>()?;
            NodeWeights::new(values, scheme)
        }
        WeightScheme::Strength => {
            let max = g.max_strength()?;
            if max == 0.0 {
                return Err(Error::EdgelessGraph);
            }
            let values = g
                .nodes()
                .ids()
                .map(|u| Ok(g.internal_strength(reference, u)? / max))
                .collect::<Result<Vec<_>>>()?;
            NodeWeights::new(values, scheme)
        }
        WeightScheme::Custom => Err(Error::InvalidConfig(
            "custom weights cannot be derived from a graph".into(),
        )),
    }
}

/// Purity of `x` against `y` where node `u` contributes `w_u / Σ_v w_v`
/// instead of `1/n`.
pub fn weighted_purity(x: &Partition, y: &Partition, weights: &NodeWeights) -> Result<f64> {
    let pure = node_purities(x, y)?;
    if weights.len() != pure.len() {
        return Err(Error::MismatchedNodeSets);
    }
    if weights.total() <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let hit: f64 = pure
        .iter()
        .zip(weights.values())
        .filter(|(&p, _)| p)
        .map(|(_, &w)| w)
        .sum();
    Ok((hit / weights.total()).clamp(0.0, 1.0))
}

/// Harmonic mean of both weighted purity directions under fixed weights.
pub fn topo_f_measure_with(x: &Partition, y: &Partition, weights: &NodeWeights) -> Result<f64> {
    let p = weighted_purity(x, y, weights)?;
    let q = weighted_purity(y, x, weights)?;
    Ok(harmonic_mean(p, q))
}

/// Topological F-measure of the estimate `x` against the reference `y`,
/// with weights derived from `g` and `y`.
pub fn topo_f_measure(
    x: &Partition,
    y: &Partition,
    g: &Graph,
    scheme: WeightScheme,
) -> Result<f64> {
    let weights = node_weights(g, y, scheme)?;
    topo_f_measure_with(x, y, &weights)
}
