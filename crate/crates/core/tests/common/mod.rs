#![allow(dead_code)]

use std::collections::HashMap;

use commeval::graph::GraphBuilder;
use commeval::{parse_edge_list, Graph, NodeId, Partition};
use rand::seq::SliceRandom;
use rand::Rng;

/// Ten nodes in two communities of five. Node 2 is the hub of the left
/// community, node 6 hangs off the right one with a single internal link.
pub const TWO_COMMUNITY_EDGES: &str = "\
2 1
2 3
2 4
2 5
1 3
4 5
7 8
7 9
7 10
8 9
9 10
6 7
6 1
5 10
";

pub struct TwoCommunities {
    pub graph: Graph,
    pub r: Partition,
    pub a: Partition,
    pub b: Partition,
}

pub fn two_communities() -> TwoCommunities {
    let graph = parse_edge_list(TWO_COMMUNITY_EDGES.as_bytes()).unwrap();
    let left = ["1", "2", "3", "4", "5"];
    let right = ["6", "7", "8", "9", "10"];
    let r = Partition::from_groups(graph.nodes().clone(), &[left, right]).unwrap();
    let a = Partition::from_groups(
        graph.nodes().clone(),
        &[
            vec!["1", "3", "4", "5"],
            vec!["2", "6", "7", "8", "9", "10"],
        ],
    )
    .unwrap();
    let b = Partition::from_groups(
        graph.nodes().clone(),
        &[
            vec!["1", "2", "3", "4", "5", "6"],
            vec!["7", "8", "9", "10"],
        ],
    )
    .unwrap();
    TwoCommunities { graph, r, a, b }
}

pub fn node(g: &Graph, token: &str) -> NodeId {
    g.node(token).unwrap()
}

/// Erdős–Rényi graph on nodes `1..=n`, optionally with random weights.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, weighted: bool) -> Graph {
    let mut b = GraphBuilder::default();
    for i in 1..=n {
        b.add_node(&i.to_string());
    }
    let mut line = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(p) {
                line += 1;
                let w = if weighted {
                    rng.gen_range(0.1..5.0)
                } else {
                    1.0
                };
                b.add_edge(&i.to_string(), &j.to_string(), w, line).unwrap();
            }
        }
    }
    b.build()
}

pub fn random_partition<R: Rng>(rng: &mut R, g: &Graph, max_parts: usize) -> Partition {
    let k = rng.gen_range(1..=max_parts);
    let membership: Vec<usize> = (0..g.node_count()).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_membership(g.nodes().clone(), &membership).unwrap()
}

/// Moves each node in `nodes` to a uniformly chosen different part.
pub fn perturb<R: Rng>(rng: &mut R, p: &Partition, nodes: &[NodeId]) -> Partition {
    let k = p.part_count();
    assert!(k >= 2);
    let moves: Vec<(NodeId, usize)> = nodes
        .iter()
        .map(|&u| {
            let current = p.part_of(u);
            let mut target = rng.gen_range(0..k - 1);
            if target >= current {
                target += 1;
            }
            (u, target)
        })
        .collect();
    p.with_moves(&moves).unwrap()
}

pub fn sample_nodes<R: Rng>(rng: &mut R, g: &Graph, count: usize) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = g.nodes().ids().collect();
    ids.shuffle(rng);
    ids.truncate(count);
    ids
}

// Definition-level oracles, written without any library measure code.

pub fn oracle_contingency(x: &Partition, y: &Partition) -> HashMap<(usize, usize), usize> {
    let mut counts = HashMap::new();
    for u in 0..x.len() {
        *counts
            .entry((x.assignment()[u], y.assignment()[u]))
            .or_insert(0) += 1;
    }
    counts
}

pub fn oracle_rand(x: &Partition, y: &Partition) -> f64 {
    let (ax, ay) = (x.assignment(), y.assignment());
    let n = ax.len();
    let mut agree = 0u64;
    let mut pairs = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            pairs += 1;
            if (ax[i] == ax[j]) == (ay[i] == ay[j]) {
                agree += 1;
            }
        }
    }
    agree as f64 / pairs as f64
}

pub fn oracle_nmi(x: &Partition, y: &Partition) -> f64 {
    let (ax, ay) = (x.assignment(), y.assignment());
    let n = ax.len() as f64;
    let mut cx: HashMap<usize, usize> = HashMap::new();
    let mut cy: HashMap<usize, usize> = HashMap::new();
    let mut cxy: HashMap<(usize, usize), usize> = HashMap::new();
    for (&a, &b) in ax.iter().zip(ay) {
        *cx.entry(a).or_default() += 1;
        *cy.entry(b).or_default() += 1;
        *cxy.entry((a, b)).or_default() += 1;
    }
    let p = |c: usize| c as f64 / n;
    let entropy =
        |counts: &HashMap<usize, usize>| -counts.values().map(|&c| p(c) * p(c).ln()).sum::<f64>();
    let (hx, hy) = (entropy(&cx), entropy(&cy));
    if hx == 0.0 && hy == 0.0 {
        return 1.0;
    }
    let mi: f64 = cxy
        .iter()
        .map(|(&(a, b), &c)| p(c) * (p(c) / (p(cx[&a]) * p(cy[&b]))).ln())
        .sum();
    2.0 * mi / (hx + hy)
}

/// `Q = 1/2m Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)` over a dense matrix.
pub fn oracle_modularity(g: &Graph, p: &Partition) -> f64 {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (u, v, w) in g.edges() {
        a[u.index()][v.index()] += w;
        a[v.index()][u.index()] += w;
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let c = p.assignment();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if c[i] == c[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}
