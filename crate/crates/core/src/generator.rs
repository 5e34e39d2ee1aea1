//! Seeded benchmark graphs with planted community structure.
//!
//! Two families are provided:
//!
//! * [`generate_planted`]: equal-sized blocks, every intra-block pair linked
//!   with probability `p_in` and every inter-block pair with `p_out`.
//! * [`generate_lfr`]: an LFR-style generator. Degrees and community sizes
//!   follow truncated power laws, a fraction `mu` of each node's stubs is
//!   reserved for links leaving its community, and stubs are wired by a
//!   configuration model followed by edge-swap rewiring.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so the same configuration yields the same graph on every
//! platform.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};
use crate::partition::Partition;

const REWIRE_SWEEPS: usize = 100;
const SWAP_TRIES: usize = 20;
const MAX_ATTEMPTS: usize = 50;
const MAX_DROPPED: usize = 1;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("invalid value {value:?} for {key}")))
}

/// Reads `key = value` lines; `#` starts a comment line.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut settings = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::MalformedLine {
            line: i + 1,
            reason: "expected key=value".into(),
        })?;
        let key = key.trim().replace('-', "_");
        settings.insert(key, value.trim().to_owned());
    }
    Ok(settings)
}

fn community_labels(n: usize, membership: &[usize]) -> (Arc<NodeSet>, Vec<String>) {
    let nodes = Arc::new(NodeSet::from_tokens((1..=n).map(|i| i.to_string())).expect("distinct"));
    let labels = membership.iter().map(|c| (c + 1).to_string()).collect();
    (nodes, labels)
}

fn assemble(membership: &[usize], edges: Vec<(usize, usize)>) -> Result<(Graph, Partition)> {
    let (nodes, labels) = community_labels(membership.len(), membership);
    let mut edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    edges.sort_unstable();
    let graph = Graph::from_edges(
        nodes.clone(),
        edges.into_iter().map(|(a, b)| (NodeId(a), NodeId(b), 1.0)),
    )?;
    let partition = Partition::from_tokens(graph.nodes().clone(), labels)?;
    Ok((graph, partition))
}

/// Fraction of edges whose endpoints lie in different parts.
pub fn empirical_mixing(g: &Graph, p: &Partition) -> Result<f64> {
    if !g.nodes().same_as(p.nodes()) {
        return Err(Error::MismatchedNodeSets);
    }
    if g.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    let crossing = g
        .edges()
        .filter(|&(u, v, _)| p.part_of(u) != p.part_of(v))
        .count();
    Ok(crossing as f64 / g.edge_count() as f64)
}

/// Planted-partition model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub nodes: usize,
    pub communities: usize,
    /// Expected fraction of edge endpoints leaving their community.
    pub mu: f64,
    pub avg_degree: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self {
            nodes: 1000,
            communities: 10,
            mu: 0.3,
            avg_degree: 15.0,
            seed: 1,
        }
    }
}

impl PlantedConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "nodes" | "n" => self.nodes = parse_value(key, value)?,
            "communities" | "c" => self.communities = parse_value(key, value)?,
            "mu" => self.mu = parse_value(key, value)?,
            "avg_degree" => self.avg_degree = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "unknown planted setting {key:?}"
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.communities == 0 || self.communities > self.nodes {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= communities <= nodes, got {} communities for {} nodes",
                self.communities, self.nodes
            )));
        }
        if !(0.0..1.0).contains(&self.mu) {
            return Err(Error::InvalidConfig(format!(
                "mu must lie in [0, 1), got {}",
                self.mu
            )));
        }
        if !(self.avg_degree > 0.0 && self.avg_degree < self.nodes as f64 - 1.0) {
            return Err(Error::InvalidConfig(format!(
                "avg_degree must lie in (0, nodes - 1), got {}",
                self.avg_degree
            )));
        }
        Ok(())
    }

    /// Link probabilities `(p_in, p_out)` that give the requested mean
    /// degree and mixing for equal-sized communities.
    pub fn link_probabilities(&self) -> Result<(f64, f64)> {
        self.validate()?;
        let n = self.nodes as f64;
        let size = n / self.communities as f64;
        let internal = (1.0 - self.mu) * self.avg_degree;
        let external = self.mu * self.avg_degree;
        let p_in = match size - 1.0 {
            s if s > 0.0 => internal / s,
            _ => {
                return Err(Error::Infeasible(
                    "singleton communities cannot host internal links".into(),
                ))
            }
        };
        let p_out = match n - size {
            s if s > 0.0 => external / s,
            _ if external == 0.0 => 0.0,
            _ => {
                return Err(Error::Infeasible(
                    "a single community cannot host external links".into(),
                ))
            }
        };
        for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Infeasible(format!("{name} = {p} is outside [0, 1]")));
            }
        }
        Ok((p_in, p_out))
    }
}

/// Appends to `edges` every `(i, j)` with `j` in `range` kept with
/// probability `p`, skipping geometrically between successes.
fn bernoulli_range(
    rng: &mut impl RngCore,
    i: usize,
    range: std::ops::Range<usize>,
    p: f64,
    edges: &mut Vec<(usize, usize)>,
) {
    if p <= 0.0 || range.is_empty() {
        return;
    }
    if p >= 1.0 {
        edges.extend(range.map(|j| (i, j)));
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut j = range.start;
    loop {
        let skip = ((1.0 - unit(rng)).ln() / log_q).floor();
        if skip >= (range.end - j) as f64 {
            return;
        }
        j += skip as usize;
        edges.push((i, j));
        j += 1;
        if j >= range.end {
            return;
        }
    }
}

/// Samples a planted-partition graph and its communities.
pub fn generate_planted(cfg: &PlantedConfig) -> Result<(Graph, Partition)> {
    let (p_in, p_out) = cfg.link_probabilities()?;
    let (n, c) = (cfg.nodes, cfg.communities);
    let mut membership = Vec::with_capacity(n);
    let mut block_end = Vec::with_capacity(c);
    for k in 0..c {
        let size = n / c + usize::from(k < n % c);
        membership.extend(std::iter::repeat_n(k, size));
        block_end.push(membership.len());
    }
    let mut rng = rng_for(cfg.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        let end = block_end[membership[i]];
        bernoulli_range(&mut rng, i, i + 1..end, p_in, &mut edges);
        bernoulli_range(&mut rng, i, end..n, p_out, &mut edges);
    }
    assemble(&membership, edges)
}

/// LFR-style generator parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LfrConfig {
    pub nodes: usize,
    pub mu: f64,
    /// Degree power-law exponent.
    pub gamma: f64,
    /// Community-size power-law exponent.
    pub beta_c: f64,
    pub avg_degree: f64,
    pub max_degree: usize,
    pub min_community: usize,
    pub max_community: usize,
    pub seed: u64,
}

impl Default for LfrConfig {
    fn default() -> Self {
        Self {
            nodes: 1000,
            mu: 0.3,
            gamma: 2.5,
            beta_c: 2.0,
            avg_degree: 15.0,
            max_degree: 50,
            min_community: 20,
            max_community: 100,
            seed: 1,
        }
    }
}

impl LfrConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "nodes" | "n" => self.nodes = parse_value(key, value)?,
            "mu" => self.mu = parse_value(key, value)?,
            "gamma" => self.gamma = parse_value(key, value)?,
            "beta_c" | "beta" => self.beta_c = parse_value(key, value)?,
            "avg_degree" => self.avg_degree = parse_value(key, value)?,
            "max_degree" => self.max_degree = parse_value(key, value)?,
            "min_community" => self.min_community = parse_value(key, value)?,
            "max_community" => self.max_community = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            _ => return Err(Error::InvalidConfig(format!("unknown lfr setting {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(0.0..1.0).contains(&self.mu) {
            return bad(format!("mu must lie in [0, 1), got {}", self.mu));
        }
        if self.gamma.is_nan() || self.gamma <= 1.0 || self.beta_c.is_nan() || self.beta_c <= 1.0 {
            return bad("power-law exponents must exceed 1".into());
        }
        if self.min_community == 0
            || self.min_community > self.max_community
            || self.max_community > self.nodes
        {
            return bad(format!(
                "need 1 <= min_community <= max_community <= nodes, got {}..{} for {} nodes",
                self.min_community, self.max_community, self.nodes
            ));
        }
        if self.max_degree == 0 || self.max_degree >= self.nodes {
            return bad(format!(
                "max_degree must lie in [1, nodes), got {}",
                self.max_degree
            ));
        }
        if !(self.avg_degree >= 1.0 && self.avg_degree < self.max_degree as f64) {
            return bad(format!(
                "avg_degree must lie in [1, max_degree), got {}",
                self.avg_degree
            ));
        }
        Ok(())
    }
}

/// Continuous power law `x^-exponent` truncated to `[low, high]`.
#[derive(Debug, Clone, Copy)]
struct PowerLaw {
    low: f64,
    high: f64,
    exponent: f64,
}

impl PowerLaw {
    fn sample(&self, rng: &mut impl RngCore) -> f64 {
        let e = 1.0 - self.exponent;
        let (a, b) = (self.low.powf(e), self.high.powf(e));
        (a + unit(rng) * (b - a)).powf(1.0 / e)
    }

    fn mean(&self) -> f64 {
        let (a, b, g) = (self.low, self.high, self.exponent);
        if (g - 2.0).abs() < 1e-12 {
            (b / a).ln() / (1.0 / a - 1.0 / b)
        } else if (g - 1.0).abs() < 1e-12 {
            (b - a) / (b / a).ln()
        } else {
            (1.0 - g) / (2.0 - g) * (b.powf(2.0 - g) - a.powf(2.0 - g))
                / (b.powf(1.0 - g) - a.powf(1.0 - g))
        }
    }

    /// Lower cutoff in `[1, high]` such that the mean equals `target`.
    fn with_mean(target: f64, high: f64, exponent: f64) -> Result<Self> {
        let at = |low: f64| PowerLaw {
            low,
            high,
            exponent,
        };
        if at(1.0).mean() > target {
            return Err(Error::Infeasible(format!(
                "mean degree {target} is below the power-law minimum {:.3}",
                at(1.0).mean()
            )));
        }
        let (mut lo, mut hi) = (1.0, high);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if at(mid).mean() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(at(0.5 * (lo + hi)))
    }
}

fn sample_degrees(cfg: &LfrConfig, rng: &mut impl RngCore) -> Result<Vec<usize>> {
    let law = PowerLaw::with_mean(cfg.avg_degree, cfg.max_degree as f64, cfg.gamma)?;
    Ok((0..cfg.nodes)
        .map(|_| (law.sample(rng).round() as usize).clamp(1, cfg.max_degree))
        .collect())
}

fn sample_community_sizes(cfg: &LfrConfig, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let law = PowerLaw {
        low: cfg.min_community as f64,
        high: cfg.max_community as f64 + 1.0,
        exponent: cfg.beta_c,
    };
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < cfg.nodes {
        let s = (law.sample(rng).floor() as usize).clamp(cfg.min_community, cfg.max_community);
        sizes.push(s);
        total += s;
    }
    let mut excess = total - cfg.nodes;
    let slack: usize = sizes.iter().map(|s| s - cfg.min_community).sum();
    if slack < excess {
        return None;
    }
    while excess > 0 {
        let k = rng.gen_range(0..sizes.len());
        if sizes[k] > cfg.min_community {
            sizes[k] -= 1;
            excess -= 1;
        }
    }
    Some(sizes)
}

/// Places nodes, largest internal degree first, into communities large
/// enough to hold their internal links.
fn assign_communities(
    internal: &[usize],
    sizes: &[usize],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..internal.len()).collect();
    order.sort_by_key(|&u| std::cmp::Reverse(internal[u]));
    let mut free = sizes.to_vec();
    let mut membership = vec![usize::MAX; internal.len()];
    for u in order {
        let eligible: Vec<usize> = (0..sizes.len())
            .filter(|&k| free[k] > 0 && sizes[k] > internal[u])
            .collect();
        let slots: usize = eligible.iter().map(|&k| free[k]).sum();
        if slots == 0 {
            return None;
        }
        let mut pick = rng.gen_range(0..slots);
        let k = *eligible
            .iter()
            .find(|&&k| {
                if pick < free[k] {
                    true
                } else {
                    pick -= free[k];
                    false
                }
            })
            .expect("pick is within slot count");
        free[k] -= 1;
        membership[u] = k;
    }
    Some(membership)
}

type Key = (usize, usize);

fn key(a: usize, b: usize) -> Key {
    (a.min(b), a.max(b))
}

/// Configuration-model matching of `stubs` followed by edge-swap rewiring
/// until no self-loop, parallel edge, or edge rejected by `allowed` remains.
fn wire_stubs<F>(mut stubs: Vec<usize>, rng: &mut ChaCha8Rng, allowed: F) -> Option<Vec<Key>>
where
    F: Fn(usize, usize) -> bool,
{
    debug_assert!(stubs.len().is_multiple_of(2));
    stubs.shuffle(rng);
    let mut edges: Vec<Key> = stubs.chunks_exact(2).map(|p| key(p[0], p[1])).collect();
    let mut multiplicity: HashMap<Key, u32> = HashMap::new();
    for &e in &edges {
        *multiplicity.entry(e).or_insert(0) += 1;
    }
    let is_bad =
        |e: Key, mult: &HashMap<Key, u32>| e.0 == e.1 || !allowed(e.0, e.1) || mult[&e] > 1;

    for _ in 0..REWIRE_SWEEPS {
        let bad: Vec<usize> = (0..edges.len())
            .filter(|&i| is_bad(edges[i], &multiplicity))
            .collect();
        if bad.is_empty() {
            return Some(edges);
        }
        for i in bad {
            for _ in 0..SWAP_TRIES {
                if !is_bad(edges[i], &multiplicity) {
                    break;
                }
                let j = rng.gen_range(0..edges.len());
                if j == i {
                    continue;
                }
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                let (x, y) = if rng.gen::<bool>() {
                    (key(a, c), key(b, d))
                } else {
                    (key(a, d), key(b, c))
                };
                let fresh = |e: Key| {
                    e.0 != e.1
                        && allowed(e.0, e.1)
                        && multiplicity.get(&e).copied().unwrap_or(0) == 0
                };
                if x == y || !fresh(x) || !fresh(y) {
                    continue;
                }
                for old in [edges[i], edges[j]] {
                    let m = multiplicity.get_mut(&old).expect("tracked edge");
                    *m -= 1;
                    if *m == 0 {
                        multiplicity.remove(&old);
                    }
                }
                multiplicity.insert(x, 1);
                multiplicity.insert(y, 1);
                edges[i] = x;
                edges[j] = y;
            }
        }
    }
    // A stub pair or two can stay invalid when a community is nearly
    // complete; those are dropped, anything more is a failed attempt.
    let bad = edges.iter().filter(|&&e| is_bad(e, &multiplicity)).count();
    if bad > MAX_DROPPED.max(edges.len() / 100) {
        return None;
    }
    let kept = edges
        .iter()
        .copied()
        .filter(|&e| !is_bad(e, &multiplicity))
        .collect::<Vec<_>>();
    let mut seen = std::collections::HashSet::new();
    Some(kept.into_iter().filter(|&e| seen.insert(e)).collect())
}

enum Attempt {
    Done(Vec<usize>, Vec<Key>),
    Retry(&'static str),
}

fn lfr_attempt(cfg: &LfrConfig, rng: &mut ChaCha8Rng) -> Result<Attempt> {
    let mut degree = sample_degrees(cfg, rng)?;
    let mut internal: Vec<usize> = degree
        .iter()
        .map(|&d| {
            let x = (1.0 - cfg.mu) * d as f64;
            let base = x.floor();
            base as usize + usize::from(unit(rng) < x - base)
        })
        .collect();

    let Some(sizes) = sample_community_sizes(cfg, rng) else {
        return Ok(Attempt::Retry(
            "community sizes cannot sum to the node count",
        ));
    };
    let Some(membership) = assign_communities(&internal, &sizes, rng) else {
        return Ok(Attempt::Retry(
            "no community can host a node's internal degree",
        ));
    };

    let mut members = vec![Vec::new(); sizes.len()];
    for (u, &k) in membership.iter().enumerate() {
        members[k].push(u);
    }
    // each community needs an even number of internal stubs; add or
    // remove one internal link end at a random member
    for nodes in &members {
        let sum: usize = nodes.iter().map(|&u| internal[u]).sum();
        if sum.is_multiple_of(2) {
            continue;
        }
        let size = nodes.len();
        let grow = |u: usize| degree[u] < cfg.max_degree && internal[u] + 1 < size;
        let shrink = |u: usize| internal[u] > 0 && degree[u] > 1;
        let start = rng.gen_range(0..size);
        let prefer_grow = rng.gen::<bool>();
        let rotated = || (0..size).map(|o| nodes[(start + o) % size]);
        let pick = if prefer_grow {
            rotated().find(|&u| grow(u)).map(|u| (u, true))
        } else {
            rotated().find(|&u| shrink(u)).map(|u| (u, false))
        }
        .or_else(|| rotated().find(|&u| grow(u)).map(|u| (u, true)))
        .or_else(|| rotated().find(|&u| shrink(u)).map(|u| (u, false)));
        match pick {
            Some((u, true)) => {
                internal[u] += 1;
                degree[u] += 1;
            }
            Some((u, false)) => {
                internal[u] -= 1;
                degree[u] -= 1;
            }
            None => return Err(Error::Infeasible("stub parity unresolvable".into())),
        }
    }
    let external_sum: usize = degree.iter().zip(&internal).map(|(d, i)| d - i).sum();
    if external_sum % 2 == 1 {
        let n = degree.len();
        let start = rng.gen_range(0..n);
        let fix = (0..n).map(|o| (start + o) % n).find_map(|u| {
            if degree[u] > internal[u] && degree[u] > 1 {
                Some((u, false))
            } else if degree[u] < cfg.max_degree {
                Some((u, true))
            } else {
                None
            }
        });
        match fix {
            Some((u, true)) => degree[u] += 1,
            Some((u, false)) => degree[u] -= 1,
            None => return Err(Error::Infeasible("stub parity unresolvable".into())),
        }
    }

    let mut edges = Vec::new();
    for nodes in &members {
        let stubs: Vec<usize> = nodes
            .iter()
            .flat_map(|&u| std::iter::repeat_n(u, internal[u]))
            .collect();
        match wire_stubs(stubs, rng, |_, _| true) {
            Some(wired) => edges.extend(wired),
            None => {
                return Ok(Attempt::Retry(
                    "internal links could not be rewired into a simple graph",
                ))
            }
        }
    }
    let stubs: Vec<usize> = (0..degree.len())
        .flat_map(|u| std::iter::repeat_n(u, degree[u] - internal[u]))
        .collect();
    match wire_stubs(stubs, rng, |a, b| membership[a] != membership[b]) {
        Some(wired) => edges.extend(wired),
        None => {
            return Ok(Attempt::Retry(
                "external links could not be rewired into a simple graph",
            ))
        }
    }
    Ok(Attempt::Done(membership, edges))
}

/// Samples an LFR-style benchmark graph and its communities.
pub fn generate_lfr(cfg: &LfrConfig) -> Result<(Graph, Partition)> {
    cfg.validate()?;
    let needed = ((1.0 - cfg.mu) * cfg.max_degree as f64).ceil() as usize;
    if needed >= cfg.max_community {
        return Err(Error::Infeasible(format!(
            "max_community {} cannot host internal degree {needed}",
            cfg.max_community
        )));
    }
    let mut rng = rng_for(cfg.seed);
    let mut reason = "";
    for _ in 0..MAX_ATTEMPTS {
        match lfr_attempt(cfg, &mut rng)? {
            Attempt::Done(membership, edges) => return assemble(&membership, edges),
            Attempt::Retry(why) => reason = why,
        }
    }
    Err(Error::Infeasible(format!(
        "gave up after {MAX_ATTEMPTS} attempts: {reason}"
    )))
}
