//! Bundles of measures computed for one estimated partition.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::measures;
use crate::partition::Partition;
use crate::topo::{self, NodeWeights, WeightScheme};

/// Every measure the evaluator can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Purity,
    InversePurity,
    FMeasure,
    NewmanFcc,
    Nmi,
    Rand,
    ModularityReference,
    ModularityPredicted,
    TopoPurity,
    TopoInversePurity,
    TopoFMeasure,
}

impl Measure {
    pub const ALL: [Measure; 11] = [
        Measure::Purity,
        Measure::InversePurity,
        Measure::FMeasure,
        Measure::NewmanFcc,
        Measure::Nmi,
        Measure::Rand,
        Measure::ModularityReference,
        Measure::ModularityPredicted,
        Measure::TopoPurity,
        Measure::TopoInversePurity,
        Measure::TopoFMeasure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Purity => "purity",
            Measure::InversePurity => "inverse_purity",
            Measure::FMeasure => "f_measure",
            Measure::NewmanFcc => "newman_fcc",
            Measure::Nmi => "nmi",
            Measure::Rand => "rand",
            Measure::ModularityReference => "modularity_reference",
            Measure::ModularityPredicted => "modularity_predicted",
            Measure::TopoPurity => "topo_purity",
            Measure::TopoInversePurity => "topo_inverse_purity",
            Measure::TopoFMeasure => "topo_f_measure",
        }
    }

    pub fn is_topological(self) -> bool {
        matches!(
            self,
            Measure::TopoPurity | Measure::TopoInversePurity | Measure::TopoFMeasure
        )
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown measure {s:?}")))
    }
}

/// What to do when the reference leaves every node with zero weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroWeightPolicy {
    #[default]
    Error,
    /// Fall back to uniform weights and record a warning.
    Uniform,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub measures: Vec<Measure>,
    pub scheme: WeightScheme,
    pub on_zero_weights: ZeroWeightPolicy,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            measures: Measure::ALL.to_vec(),
            scheme: WeightScheme::InternalDegree,
            on_zero_weights: ZeroWeightPolicy::Error,
        }
    }
}

/// Values of the requested measures, or the reason a measure could not be
/// computed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasureReport {
    pub values: BTreeMap<Measure, f64>,
    pub errors: BTreeMap<Measure, String>,
}

impl MeasureReport {
    pub fn get(&self, m: Measure) -> Option<f64> {
        self.values.get(&m).copied()
    }
}

/// Evaluates estimated partitions against one reference on one graph.
#[derive(Debug)]
pub struct Evaluator<'a> {
    graph: &'a Graph,
    reference: &'a Partition,
    options: EvalOptions,
    weights: std::result::Result<NodeWeights, String>,
    reference_modularity: std::result::Result<f64, String>,
    warnings: Vec<String>,
}

impl<'a> Evaluator<'a> {
    /// Prepares node weights and the reference modularity.
    ///
    /// Fails with [`Error::ZeroTotalWeight`] when topological measures are
    /// requested, the reference gives every node zero weight, and the
    /// policy is [`ZeroWeightPolicy::Error`].
    pub fn new(graph: &'a Graph, reference: &'a Partition, options: EvalOptions) -> Result<Self> {
        if !graph.nodes().same_as(reference.nodes()) {
            return Err(Error::MismatchedNodeSets);
        }
        let mut warnings = Vec::new();
        let weights = if options.measures.iter().any(|m| m.is_topological()) {
            match topo::node_weights(graph, reference, options.scheme) {
                Ok(w) if w.total() > 0.0 => Ok(w),
                Ok(_) => match options.on_zero_weights {
                    ZeroWeightPolicy::Error => return Err(Error::ZeroTotalWeight),
                    ZeroWeightPolicy::Uniform => {
                        warnings.push(format!(
                            "{} weights sum to zero for the reference; using uniform weights",
                            options.scheme
                        ));
                        Ok(NodeWeights::uniform(graph.node_count()))
                    }
                },
                Err(e) => Err(e.to_string()),
            }
        } else {
            Err("not requested".to_owned())
        };
        let reference_modularity =
            measures::modularity(graph, reference).map_err(|e| e.to_string());
        Ok(Self {
            graph,
            reference,
            options,
            weights,
            reference_modularity,
            warnings,
        })
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn weights(&self) -> Option<&NodeWeights> {
        self.weights.as_ref().ok()
    }

    pub fn evaluate(&self, predicted: &Partition) -> Result<MeasureReport> {
        predicted.check_same_nodes(self.reference)?;
        let (x, y) = (predicted, self.reference);
        let mut report = MeasureReport::default();
        let weighted = |a: &Partition, b: &Partition| {
            self.weights
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|w| topo::weighted_purity(a, b, w).map_err(|e| e.to_string()))
        };
        for &m in &self.options.measures {
            let value: std::result::Result<f64, String> = match m {
                Measure::Purity => measures::purity(x, y).map_err(|e| e.to_string()),
                Measure::InversePurity => measures::inverse_purity(x, y).map_err(|e| e.to_string()),
                Measure::FMeasure => measures::f_measure(x, y).map_err(|e| e.to_string()),
                Measure::NewmanFcc => measures::newman_fcc(x, y).map_err(|e| e.to_string()),
                Measure::Nmi => measures::nmi(x, y).map_err(|e| e.to_string()),
                Measure::Rand => measures::rand_index(x, y).map_err(|e| e.to_string()),
                Measure::ModularityReference => self.reference_modularity.clone(),
                Measure::ModularityPredicted => {
                    measures::modularity(self.graph, x).map_err(|e| e.to_string())
                }
                Measure::TopoPurity => weighted(x, y),
                Measure::TopoInversePurity => weighted(y, x),
                Measure::TopoFMeasure => weighted(x, y)
                    .and_then(|p| weighted(y, x).map(|q| measures::harmonic_mean(p, q))),
            };
            match value {
                Ok(v) => {
                    report.values.insert(m, v);
                }
                Err(e) => {
                    report.errors.insert(m, e);
                }
            }
        }
        Ok(report)
    }
}

/// Identifies an input file by the path given and the SHA-256 of its bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionResult {
    pub partition: InputDigest,
    pub measures: BTreeMap<&'static str, f64>,
    pub errors: BTreeMap<&'static str, String>,
}

impl PartitionResult {
    pub fn new(partition: InputDigest, report: &MeasureReport) -> Self {
        Self {
            partition,
            measures: report.values.iter().map(|(m, &v)| (m.name(), v)).collect(),
            errors: report
                .errors
                .iter()
                .map(|(m, e)| (m.name(), e.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inputs {
    pub graph: InputDigest,
    pub reference: InputDigest,
}

/// Everything `commeval eval` emits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub weights: &'static str,
    pub inputs: Inputs,
    pub results: Vec<PartitionResult>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        to_stable_json(self)
    }

    /// One `partition,measure,value,error` row per requested measure.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["partition", "measure", "value", "error"])
            .map_err(io)?;
        for r in &self.results {
            let mut rows: Vec<(&str, String, &str)> = r
                .measures
                .iter()
                .map(|(m, &v)| (*m, format_float(v), ""))
                .collect();
            rows.extend(
                r.errors
                    .iter()
                    .map(|(m, e)| (*m, String::new(), e.as_str())),
            );
            rows.sort_by(|a, b| a.0.cmp(b.0));
            for (m, v, e) in rows {
                w.write_record([r.partition.path.as_str(), m, &v, e])
                    .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

/// Rounds to 12 significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest representation of `x` rounded to 12 significant digits.
pub fn format_float(x: f64) -> String {
    let r = round_significant(x);
    if r.is_finite() && r == r.trunc() && r.abs() < 1e15 {
        format!("{r:.1}")
    } else {
        format!("{r}")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .and_then(|x| serde_json::Number::from_f64(round_significant(x)))
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
/// Object keys come out sorted.
pub fn to_stable_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}
