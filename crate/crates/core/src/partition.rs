//! Node partitions and the contingency table between two of them.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet};

/// A disjoint cover of a node set by non-empty named parts.
///
/// Parts are indexed in order of first appearance of their label, which
/// makes every argmax tie-break downstream deterministic.
#[derive(Debug, Clone)]
pub struct Partition {
    nodes: Arc<NodeSet>,
    assignment: Vec<usize>,
    parts: Vec<Vec<NodeId>>,
    labels: Vec<String>,
}

impl Partition {
    /// One community label per node, in node-id order.
    pub fn from_tokens<I, S>(nodes: Arc<NodeSet>, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut builder = Builder::new(nodes.len());
        let mut count = 0;
        for (i, label) in labels.into_iter().enumerate() {
            if i >= nodes.len() {
                return Err(Error::UnknownNode(format!("#{i}")));
            }
            builder.assign(NodeId(i), label.as_ref());
            count += 1;
        }
        if count < nodes.len() {
            return Err(Error::UncoveredNode(nodes.token(NodeId(count)).to_owned()));
        }
        Ok(builder.finish(nodes))
    }

    /// Integer community labels, one per node.
    pub fn from_membership(nodes: Arc<NodeSet>, membership: &[usize]) -> Result<Self> {
        Self::from_tokens(nodes, membership.iter().map(|c| c.to_string()))
    }

    /// Parts given as lists of node tokens; part `i` is labelled `i`.
    pub fn from_groups<G, S>(nodes: Arc<NodeSet>, groups: &[G]) -> Result<Self>
    where
        G: AsRef<[S]>,
        S: AsRef<str>,
    {
        let mut builder = Builder::new(nodes.len());
        for (part, group) in groups.iter().enumerate() {
            let label = part.to_string();
            for token in group.as_ref() {
                let token = token.as_ref();
                let id = nodes
                    .id(token)
                    .ok_or_else(|| Error::UnknownNode(token.to_owned()))?;
                if builder.is_assigned(id) {
                    return Err(Error::NodeAssignedTwice(token.to_owned()));
                }
                builder.assign(id, &label);
            }
        }
        builder.check_covered(&nodes)?;
        Ok(builder.finish(nodes))
    }

    /// Every node in one part.
    pub fn single(nodes: Arc<NodeSet>) -> Self {
        let n = nodes.len();
        Self::from_membership(nodes, &vec![0; n]).expect("cover is complete")
    }

    /// Every node in its own part.
    pub fn singletons(nodes: Arc<NodeSet>) -> Self {
        let membership: Vec<usize> = (0..nodes.len()).collect();
        Self::from_membership(nodes, &membership).expect("cover is complete")
    }

    pub fn nodes(&self) -> &Arc<NodeSet> {
        &self.nodes
    }

    /// Number of partitioned elements.
    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    /// Index of the part holding `u`. Panics if `u` is out of range.
    #[inline]
    pub fn part_of(&self, u: NodeId) -> usize {
        self.assignment[u.0]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn parts(&self) -> &[Vec<NodeId>] {
        &self.parts
    }

    pub fn label(&self, part: usize) -> &str {
        &self.labels[part]
    }

    pub fn check_same_nodes(&self, other: &Partition) -> Result<()> {
        if self.nodes.same_as(&other.nodes) {
            Ok(())
        } else {
            Err(Error::MismatchedNodeSets)
        }
    }

    /// A copy with each `(node, part)` pair reassigned to the given
    /// existing part. Parts left empty disappear.
    pub fn with_moves(&self, moves: &[(NodeId, usize)]) -> Result<Self> {
        let mut labels: Vec<&str> = self
            .assignment
            .iter()
            .map(|&p| self.labels[p].as_str())
            .collect();
        for &(u, part) in moves {
            if u.0 >= labels.len() {
                return Err(Error::UnknownNode(u.to_string()));
            }
            let label = self
                .labels
                .get(part)
                .ok_or_else(|| Error::InvalidConfig(format!("part index {part} out of range")))?;
            labels[u.0] = label;
        }
        Self::from_tokens(self.nodes.clone(), labels)
    }

    /// Writes one `node community` line per node, in node-id order.
    pub fn write_partition<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, &part) in self.assignment.iter().enumerate() {
            writeln!(out, "{} {}", self.nodes.token(NodeId(i)), self.labels[part])?;
        }
        Ok(())
    }
}

struct Builder {
    assignment: Vec<Option<usize>>,
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Self {
            assignment: vec![None; n],
            labels: Vec::new(),
            label_index: HashMap::new(),
        }
    }

    fn is_assigned(&self, u: NodeId) -> bool {
        self.assignment[u.0].is_some()
    }

    fn assign(&mut self, u: NodeId, label: &str) {
        let next = self.labels.len();
        let part = *self.label_index.entry(label.to_owned()).or_insert(next);
        if part == next {
            self.labels.push(label.to_owned());
        }
        self.assignment[u.0] = Some(part);
    }

    fn check_covered(&self, nodes: &NodeSet) -> Result<()> {
        match self.assignment.iter().position(Option::is_none) {
            Some(i) => Err(Error::UncoveredNode(nodes.token(NodeId(i)).to_owned())),
            None => Ok(()),
        }
    }

    fn finish(self, nodes: Arc<NodeSet>) -> Partition {
        let assignment: Vec<usize> = self
            .assignment
            .into_iter()
            .map(|p| p.expect("checked cover"))
            .collect();
        let mut parts = vec![Vec::new(); self.labels.len()];
        for (i, &p) in assignment.iter().enumerate() {
            parts[p].push(NodeId(i));
        }
        Partition {
            nodes,
            assignment,
            parts,
            labels: self.labels,
        }
    }
}

/// Parses `node community` lines over a known node set.
///
/// Every node of `nodes` must be assigned exactly once, and every node in
/// the file must belong to `nodes`.
pub fn parse_partition<R: BufRead>(input: R, nodes: &Arc<NodeSet>) -> Result<Partition> {
    let mut builder = Builder::new(nodes.len());
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let [node, community] = fields.as_slice() else {
            return Err(Error::MalformedLine {
                line: lineno,
                reason: format!("expected `node community`, found {} fields", fields.len()),
            });
        };
        let id = nodes.id(node).ok_or_else(|| Error::NodeNotInGraph {
            line: lineno,
            node: (*node).to_owned(),
        })?;
        if builder.is_assigned(id) {
            return Err(Error::NodeAssignedTwice((*node).to_owned()));
        }
        builder.assign(id, community);
    }
    builder.check_covered(nodes)?;
    Ok(builder.finish(nodes.clone()))
}

/// Intersection counts `|x_i ∩ y_j|` between two partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<usize>>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    n: usize,
}

impl ContingencyTable {
    pub fn rows(&self) -> usize {
        self.row_sums.len()
    }

    pub fn cols(&self) -> usize {
        self.col_sums.len()
    }

    pub fn count(&self, i: usize, j: usize) -> usize {
        self.counts[i][j]
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn total(&self) -> usize {
        self.n
    }

    /// Column with the largest count in row `i`, lowest index on ties.
    pub fn row_argmax(&self, i: usize) -> usize {
        let row = &self.counts[i];
        let mut best = 0;
        for (j, &c) in row.iter().enumerate().skip(1) {
            if c > row[best] {
                best = j;
            }
        }
        best
    }

    pub fn row_max(&self, i: usize) -> usize {
        self.counts[i].iter().copied().max().unwrap_or(0)
    }

    pub fn transpose(&self) -> ContingencyTable {
        let counts = (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.counts[i][j]).collect())
            .collect();
        ContingencyTable {
            counts,
            row_sums: self.col_sums.clone(),
            col_sums: self.row_sums.clone(),
            n: self.n,
        }
    }
}

/// Builds the contingency table with `x` on rows and `y` on columns.
pub fn contingency(x: &Partition, y: &Partition) -> Result<ContingencyTable> {
    x.check_same_nodes(y)?;
    let mut counts = vec![vec![0usize; y.part_count()]; x.part_count()];
    for (&i, &j) in x.assignment.iter().zip(&y.assignment) {
        counts[i][j] += 1;
    }
    let row_sums = x.parts.iter().map(Vec::len).collect();
    let col_sums = y.parts.iter().map(Vec::len).collect();
    Ok(ContingencyTable {
        counts,
        row_sums,
        col_sums,
        n: x.len(),
    })
}
