//! Undirected simple graphs with optional edge weights.
//!
//! Nodes carry the token they had in the input file; internally they are
//! addressed by a dense [`NodeId`]. All degree-style queries are relative to
//! a [`Partition`] built over the same [`NodeSet`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Dense index of a node inside a [`NodeSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Bijection between external node tokens and dense indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeSet {
    tokens: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl NodeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a node set from distinct tokens, in order.
    pub fn from_tokens<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = NodeSet::new();
        for token in tokens {
            let token = token.into();
            if set.index.contains_key(&token) {
                return Err(Error::NodeAssignedTwice(token));
            }
            set.intern(&token);
        }
        Ok(set)
    }

    /// Nodes named `0`, `1`, ..., `n - 1`.
    pub fn numbered(n: usize) -> Self {
        let mut set = NodeSet::new();
        for i in 0..n {
            set.intern(&i.to_string());
        }
        set
    }

    /// Returns the id of `token`, adding it if absent.
    pub fn intern(&mut self, token: &str) -> NodeId {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = NodeId(self.tokens.len());
        self.tokens.push(token.to_owned());
        self.index.insert(token.to_owned(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<NodeId> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: NodeId) -> &str {
        &self.tokens[id.0]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.tokens.len()).map(NodeId)
    }

    /// Same tokens under the same indexing.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self.tokens == other.tokens
    }
}

/// Immutable undirected graph without self-loops or parallel edges.
#[derive(Debug, Clone)]
pub struct Graph {
    nodes: Arc<NodeSet>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    edge_count: usize,
    weighted: bool,
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Builds a graph over `nodes` from `(u, v, weight)` triples.
    pub fn from_edges<I>(nodes: Arc<NodeSet>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut builder = GraphBuilder::with_nodes(nodes);
        for (line, (u, v, w)) in edges.into_iter().enumerate() {
            builder.insert(u, v, w, line + 1)?;
        }
        Ok(builder.build())
    }

    pub fn nodes(&self) -> &Arc<NodeSet> {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// True when at least one edge weight differs from 1.
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn node(&self, token: &str) -> Option<NodeId> {
        self.nodes.id(token)
    }

    pub fn token(&self, u: NodeId) -> &str {
        self.nodes.token(u)
    }

    fn check(&self, u: NodeId) -> Result<()> {
        if u.0 < self.adjacency.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(u.to_string()))
        }
    }

    fn check_partition(&self, p: &Partition) -> Result<()> {
        if self.nodes.same_as(p.nodes()) {
            Ok(())
        } else {
            Err(Error::MismatchedNodeSets)
        }
    }

    /// Neighbors of `u` with the connecting edge weight.
    pub fn neighbors(&self, u: NodeId) -> Result<&[(NodeId, f64)]> {
        self.check(u)?;
        Ok(&self.adjacency[u.0])
    }

    /// Every edge once, as `(u, v, weight)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, adj)| {
            adj.iter()
                .filter(move |(v, _)| v.0 > u)
                .map(move |&(v, w)| (NodeId(u), v, w))
        })
    }

    pub fn degree(&self, u: NodeId) -> Result<usize> {
        self.check(u)?;
        Ok(self.adjacency[u.0].len())
    }

    pub fn max_degree(&self) -> Result<usize> {
        self.adjacency
            .iter()
            .map(Vec::len)
            .max()
            .ok_or(Error::EmptyGraph)
    }

    /// Number of neighbors of `u` in the same part of `p`.
    pub fn internal_degree(&self, p: &Partition, u: NodeId) -> Result<usize> {
        self.check(u)?;
        self.check_partition(p)?;
        let own = p.part_of(u);
        Ok(self.adjacency[u.0]
            .iter()
            .filter(|(v, _)| p.part_of(*v) == own)
            .count())
    }

    /// Ratio of internal degree to degree; 0 for isolated nodes.
    pub fn embeddedness(&self, p: &Partition, u: NodeId) -> Result<f64> {
        let internal = self.internal_degree(p, u)?;
        let degree = self.adjacency[u.0].len();
        Ok(if degree == 0 {
            0.0
        } else {
            internal as f64 / degree as f64
        })
    }

    /// Sum of incident edge weights.
    pub fn strength(&self, u: NodeId) -> Result<f64> {
        self.check(u)?;
        Ok(self.adjacency[u.0].iter().map(|&(_, w)| w).sum())
    }

    pub fn internal_strength(&self, p: &Partition, u: NodeId) -> Result<f64> {
        self.check(u)?;
        self.check_partition(p)?;
        let own = p.part_of(u);
        Ok(self.adjacency[u.0]
            .iter()
            .filter(|(v, _)| p.part_of(*v) == own)
            .map(|&(_, w)| w)
            .sum())
    }

    pub fn max_strength(&self) -> Result<f64> {
        if self.adjacency.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(self
            .adjacency
            .iter()
            .map(|adj| adj.iter().map(|&(_, w)| w).sum::<f64>())
            .fold(0.0, f64::max))
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    /// Writes the graph in edge-list format. Isolated nodes get a line of
    /// their own; weights are written only for weighted graphs.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, adj) in self.adjacency.iter().enumerate() {
            if adj.is_empty() {
                writeln!(out, "{}", self.nodes.tokens[u])?;
            }
            for &(v, w) in adj.iter().filter(|(v, _)| v.0 > u) {
                let (a, b) = (&self.nodes.tokens[u], &self.nodes.tokens[v.0]);
                if self.weighted {
                    writeln!(out, "{a} {b} {w}")?;
                } else {
                    writeln!(out, "{a} {b}")?;
                }
            }
        }
        Ok(())
    }
}

/// Incremental graph construction with validation.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: NodeSet,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    seen: HashSet<(usize, usize)>,
    weighted: bool,
}

impl GraphBuilder {
    fn with_nodes(nodes: Arc<NodeSet>) -> Self {
        let nodes = Arc::try_unwrap(nodes).unwrap_or_else(|shared| (*shared).clone());
        let n = nodes.len();
        Self {
            nodes,
            adjacency: vec![Vec::new(); n],
            ..Self::default()
        }
    }

    pub fn add_node(&mut self, token: &str) -> NodeId {
        let id = self.nodes.intern(token);
        if id.0 == self.adjacency.len() {
            self.adjacency.push(Vec::new());
        }
        id
    }

    /// Adds an undirected edge; `line` is only used for error messages.
    pub fn add_edge(&mut self, u: &str, v: &str, weight: f64, line: usize) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop {
                line,
                node: u.to_owned(),
            });
        }
        let a = self.add_node(u);
        let b = self.add_node(v);
        self.insert(a, b, weight, line)
    }

    fn insert(&mut self, a: NodeId, b: NodeId, weight: f64, line: usize) -> Result<()> {
        let n = self.adjacency.len();
        if a.0 >= n || b.0 >= n {
            return Err(Error::UnknownNode(a.max(b).to_string()));
        }
        if a == b {
            return Err(Error::SelfLoop {
                line,
                node: self.nodes.token(a).to_owned(),
            });
        }
        if weight.is_nan() || weight <= 0.0 || weight.is_infinite() {
            return Err(Error::NonPositiveWeight { line, weight });
        }
        let key = (a.0.min(b.0), a.0.max(b.0));
        if !self.seen.insert(key) {
            return Err(Error::DuplicateEdge {
                line,
                u: self.nodes.token(a).to_owned(),
                v: self.nodes.token(b).to_owned(),
            });
        }
        if weight != 1.0 {
            self.weighted = true;
        }
        self.adjacency[a.0].push((b, weight));
        self.adjacency[b.0].push((a, weight));
        Ok(())
    }

    pub fn build(mut self) -> Graph {
        for adj in &mut self.adjacency {
            adj.sort_by_key(|&(v, _)| v);
        }
        Graph {
            nodes: Arc::new(self.nodes),
            adjacency: self.adjacency,
            edge_count: self.seen.len(),
            weighted: self.weighted,
        }
    }
}

/// Parses a whitespace-separated edge list (`u v [w]` per line).
///
/// Lines starting with `#` and blank lines are skipped. A line holding a
/// single token declares an isolated node.
pub fn parse_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut builder = GraphBuilder::default();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields.as_slice() {
            [u] => {
                builder.add_node(u);
            }
            [u, v] => builder.add_edge(u, v, 1.0, lineno)?,
            [u, v, w] => {
                let weight: f64 = w.parse().map_err(|_| Error::MalformedLine {
                    line: lineno,
                    reason: format!("invalid weight {w:?}"),
                })?;
                builder.add_edge(u, v, weight, lineno)?;
            }
            _ => {
                return Err(Error::MalformedLine {
                    line: lineno,
                    reason: format!("expected 1 to 3 fields, found {}", fields.len()),
                })
            }
        }
    }
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph> {
        parse_edge_list(text.as_bytes())
    }

    fn id(g: &Graph, token: &str) -> NodeId {
        g.node(token).unwrap()
    }

    fn clique(n: usize) -> Graph {
        let mut text = String::new();
        for a in 0..n {
            for b in a + 1..n {
                text.push_str(&format!("{a} {b}\n"));
            }
        }
        parse(&text).unwrap()
    }

    #[test]
    fn parses_simple_path() {
        let g = parse("1 2\n2 3").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_weighted());
    }

    #[test]
    fn rejects_reversed_duplicate() {
        let err = parse("1 2\n2 1").unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { line: 2, .. }), "{err}");
    }

    #[test]
    fn comments_weights_and_isolated_nodes() {
        let g = parse("1 2 0.5\n# comment\n3").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 1);
        assert!(g.is_weighted());
        assert_eq!(g.degree(id(&g, "3")).unwrap(), 0);
        assert_eq!(g.strength(id(&g, "1")).unwrap(), 0.5);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse("1 1").unwrap_err(),
            Error::SelfLoop { line: 1, .. }
        ));
        assert!(matches!(
            parse("1 2\n2 3 -1").unwrap_err(),
            Error::NonPositiveWeight { line: 2, .. }
        ));
        assert!(matches!(
            parse("1 2 0").unwrap_err(),
            Error::NonPositiveWeight { line: 1, .. }
        ));
        assert!(matches!(
            parse("1 2\n\n1 2 3 4").unwrap_err(),
            Error::MalformedLine { line: 3, .. }
        ));
        assert!(matches!(
            parse("1 2 x").unwrap_err(),
            Error::MalformedLine { line: 1, .. }
        ));
    }

    #[test]
    fn degrees() {
        let path = parse("1 2\n2 3").unwrap();
        assert_eq!(path.degree(id(&path, "2")).unwrap(), 2);
        let star = parse("0 1\n0 2\n0 3\n0 4").unwrap();
        assert_eq!(star.max_degree().unwrap(), 4);
        let edgeless = parse("a\nb\nc").unwrap();
        assert_eq!(edgeless.max_degree().unwrap(), 0);
        let path4 = parse("1 2\n2 3\n3 4").unwrap();
        assert_eq!(path4.max_degree().unwrap(), 2);
        let k5 = clique(5);
        assert!(k5.nodes().ids().all(|u| k5.degree(u).unwrap() == 4));
        assert_eq!(parse("").unwrap().max_degree(), Err(Error::EmptyGraph));
        assert!(matches!(
            path.degree(NodeId(17)),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn internal_degree_and_embeddedness() {
        let g = parse("1 2\n2 3\n3 4").unwrap();
        let p = Partition::from_tokens(g.nodes().clone(), ["a", "a", "b", "b"]).unwrap();
        let two = id(&g, "2");
        assert_eq!(g.internal_degree(&p, two).unwrap(), 1);
        assert_eq!(g.embeddedness(&p, two).unwrap(), 0.5);

        let single = Partition::single(g.nodes().clone());
        let singletons = Partition::singletons(g.nodes().clone());
        for u in g.nodes().ids() {
            assert_eq!(g.internal_degree(&single, u), g.degree(u));
            assert_eq!(g.embeddedness(&single, u).unwrap(), 1.0);
            assert_eq!(g.internal_degree(&singletons, u).unwrap(), 0);
            assert_eq!(g.embeddedness(&singletons, u).unwrap(), 0.0);
        }

        let other = Partition::single(Arc::new(NodeSet::numbered(4)));
        assert_eq!(
            g.internal_degree(&other, two),
            Err(Error::MismatchedNodeSets)
        );
    }

    #[test]
    fn isolated_node_has_zero_embeddedness() {
        let g = parse("1 2\n3").unwrap();
        let p = Partition::single(g.nodes().clone());
        assert_eq!(g.embeddedness(&p, id(&g, "3")).unwrap(), 0.0);
    }

    #[test]
    fn strengths() {
        let g = parse("1 2 0.5\n1 3 2.0").unwrap();
        assert_eq!(g.strength(id(&g, "1")).unwrap(), 2.5);
        assert_eq!(g.max_strength().unwrap(), 2.5);
        let p = Partition::from_tokens(g.nodes().clone(), ["a", "a", "b"]).unwrap();
        assert_eq!(g.internal_strength(&p, id(&g, "1")).unwrap(), 0.5);

        let unweighted = clique(4);
        for u in unweighted.nodes().ids() {
            assert_eq!(
                unweighted.strength(u).unwrap(),
                unweighted.degree(u).unwrap() as f64
            );
        }
        let iso = parse("1 2\n9").unwrap();
        assert_eq!(iso.strength(id(&iso, "9")).unwrap(), 0.0);
    }

    #[test]
    fn writes_isolated_nodes_and_weights() {
        let g = parse("1 2 0.5\n3").unwrap();
        let mut out = Vec::new();
        g.write_edge_list(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1 2 0.5\n3\n");
    }
}
