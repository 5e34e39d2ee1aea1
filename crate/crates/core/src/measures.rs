//! Classic partition-comparison measures and modularity.
//!
//! Purity and its relatives are asymmetric: `purity(x, y)` looks for the
//! majority part of `y` inside each part of `x`. When `x` is an estimated
//! community structure and `y` the reference, `purity(y, x)` is the
//! inverse purity (Newman's fraction of correctly classified nodes, before
//! the penalty applied by [`newman_fcc`]).

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::{contingency, ContingencyTable, Partition};

fn non_empty(table: &ContingencyTable) -> Result<usize> {
    match table.total() {
        0 => Err(Error::TooFewElements {
            required: 1,
            actual: 0,
        }),
        n => Ok(n),
    }
}

/// `Σ_i |x_i|/n · max_j |x_i ∩ y_j| / |x_i|`, i.e. the fraction of
/// elements that sit in the majority `y` part of their `x` part.
pub fn purity(x: &Partition, y: &Partition) -> Result<f64> {
    let table = contingency(x, y)?;
    let n = non_empty(&table)?;
    let hits: usize = (0..table.rows()).map(|i| table.row_max(i)).sum();
    Ok(hits as f64 / n as f64)
}

pub fn inverse_purity(x: &Partition, y: &Partition) -> Result<f64> {
    purity(y, x)
}

/// Harmonic mean, defined as 0 when both terms are 0.
pub(crate) fn harmonic_mean(p: f64, q: f64) -> f64 {
    if p + q == 0.0 {
        0.0
    } else {
        2.0 * p * q / (p + q)
    }
}

/// Harmonic mean of purity and inverse purity. Symmetric in its arguments.
pub fn f_measure(x: &Partition, y: &Partition) -> Result<f64> {
    Ok(harmonic_mean(purity(x, y)?, purity(y, x)?))
}

/// Whether `u`'s own `y` part is the majority `y` part of `u`'s `x` part.
pub fn node_purity(u: NodeId, x: &Partition, y: &Partition) -> Result<bool> {
    if u.index() >= x.len() {
        return Err(Error::UnknownNode(u.to_string()));
    }
    let table = contingency(x, y)?;
    Ok(table.row_argmax(x.part_of(u)) == y.part_of(u))
}

/// [`node_purity`] for every node, indexed by node id.
pub fn node_purities(x: &Partition, y: &Partition) -> Result<Vec<bool>> {
    let table = contingency(x, y)?;
    let majority: Vec<usize> = (0..table.rows()).map(|i| table.row_argmax(i)).collect();
    Ok(x.assignment()
        .iter()
        .zip(y.assignment())
        .map(|(&i, &j)| majority[i] == j)
        .collect())
}

/// Inverse purity with Newman's penalty: when one estimated community is
/// the majority of several reference communities, every node of those
/// reference communities counts as misclassified.
pub fn newman_fcc(estimated: &Partition, reference: &Partition) -> Result<f64> {
    let table = contingency(reference, estimated)?;
    let n = non_empty(&table)?;
    let majority: Vec<usize> = (0..table.rows()).map(|j| table.row_argmax(j)).collect();
    let mut claims = vec![0usize; table.cols()];
    for &m in &majority {
        claims[m] += 1;
    }
    let correct: usize = majority
        .iter()
        .enumerate()
        .filter(|&(_, &m)| claims[m] == 1)
        .map(|(j, &m)| table.count(j, m))
        .sum();
    Ok(correct as f64 / n as f64)
}

fn entropy(sizes: &[usize], n: f64) -> f64 {
    sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information, `2 I(X;Y) / (H(X) + H(Y))`.
///
/// Returns 1 when both partitions have a single part.
pub fn nmi(x: &Partition, y: &Partition) -> Result<f64> {
    let table = contingency(x, y)?;
    let n = non_empty(&table)? as f64;
    let hx = entropy(table.row_sums(), n);
    let hy = entropy(table.col_sums(), n);
    if hx + hy == 0.0 {
        return Ok(1.0);
    }
    let mut mutual = 0.0;
    for (i, row) in table.counts().iter().enumerate() {
        let a = table.row_sums()[i] as f64;
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let b = table.col_sums()[j] as f64;
            let c = c as f64;
            mutual += c / n * (n * c / (a * b)).ln();
        }
    }
    Ok((2.0 * mutual / (hx + hy)).clamp(0.0, 1.0))
}

fn pairs(k: usize) -> u128 {
    let k = k as u128;
    k * k.saturating_sub(1) / 2
}

/// Plain Rand index: the fraction of element pairs on which both
/// partitions agree (together in both, or apart in both).
pub fn rand_index(x: &Partition, y: &Partition) -> Result<f64> {
    let table = contingency(x, y)?;
    let n = table.total();
    if n < 2 {
        return Err(Error::TooFewElements {
            required: 2,
            actual: n,
        });
    }
    let together_both: u128 = table.counts().iter().flatten().map(|&c| pairs(c)).sum();
    let together_x: u128 = table.row_sums().iter().map(|&c| pairs(c)).sum();
    let together_y: u128 = table.col_sums().iter().map(|&c| pairs(c)).sum();
    let total = pairs(n);
    let agreeing = total + 2 * together_both - together_x - together_y;
    Ok(agreeing as f64 / total as f64)
}

/// Newman–Girvan modularity `Q = Σ_c (e_cc − a_c²)`.
///
/// `e_cc` is the fraction of edge weight inside community `c` and `a_c`
/// the fraction of edge-endpoint weight attached to `c`. Unweighted graphs
/// use unit weights.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if !g.nodes().same_as(p.nodes()) {
        return Err(Error::MismatchedNodeSets);
    }
    let total = g.total_weight();
    if g.edge_count() == 0 || total == 0.0 {
        return Err(Error::EdgelessGraph);
    }
    let mut inside = vec![0.0; p.part_count()];
    let mut endpoints = vec![0.0; p.part_count()];
    for (u, v, w) in g.edges() {
        let (cu, cv) = (p.part_of(u), p.part_of(v));
        if cu == cv {
            inside[cu] += w;
        }
        endpoints[cu] += w;
        endpoints[cv] += w;
    }
    Ok(inside
        .iter()
        .zip(&endpoints)
        .map(|(&e, &a)| e / total - (a / (2.0 * total)).powi(2))
        .sum())
}
