//! Evaluation of community-detection results against a reference partition.
//!
//! Besides the classic external measures (purity, F-measure, NMI, Rand,
//! Newman's fraction of correctly classified nodes) and modularity, the
//! crate implements a topology-aware purity where each node's contribution
//! is weighted by how embedded it is in its reference community, so that
//! misplacing a community hub costs more than misplacing a boundary node.
//!
//! It also ships seeded benchmark generators ([`generator`]) and an
//! ANOVA / Tukey HSD ranking engine ([`ranking`]) for comparing algorithms
//! over several networks.

pub mod cli;
pub mod error;
pub mod generator;
pub mod graph;
pub mod measures;
pub mod partition;
pub mod ranking;
pub mod report;
pub mod topo;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, Graph, NodeId, NodeSet};
pub use measures::{
    f_measure, inverse_purity, modularity, newman_fcc, nmi, node_purity, purity, rand_index,
};
pub use partition::{contingency, parse_partition, ContingencyTable, Partition};
pub use report::{EvalOptions, Evaluator, Measure, MeasureReport, ZeroWeightPolicy};
pub use topo::{node_weights, topo_f_measure, weighted_purity, NodeWeights, WeightScheme};
