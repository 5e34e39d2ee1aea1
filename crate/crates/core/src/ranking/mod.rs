//! Significance-grouped ranking of algorithms scored on several networks.
//!
//! A [`ScoreMatrix`] holds one score per (algorithm, network). The pipeline
//! is a one-way ANOVA over algorithms, Tukey's HSD for the pairwise
//! decisions, then [`rank_table`] groups algorithms that cannot be told
//! apart.

pub mod studentized_range;

use std::collections::HashMap;
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::{Error, Result};

/// Scores of every algorithm on every network, for one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    measure: String,
    algorithms: Vec<String>,
    networks: Vec<String>,
    scores: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
struct ScoreRecord {
    algorithm: String,
    network: String,
    score: f64,
}

impl ScoreMatrix {
    /// `scores[a][k]` is the score of algorithm `a` on network `k`.
    pub fn new(
        measure: impl Into<String>,
        algorithms: Vec<String>,
        networks: Vec<String>,
        scores: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if algorithms.len() < 2 {
            return Err(Error::InvalidScores(format!(
                "at least 2 algorithms are required, got {}",
                algorithms.len()
            )));
        }
        if networks.len() < 2 {
            return Err(Error::InvalidScores(format!(
                "at least 2 networks per algorithm are required, got {}",
                networks.len()
            )));
        }
        if scores.len() != algorithms.len() {
            return Err(Error::InvalidScores(
                "one score row per algorithm is required".into(),
            ));
        }
        for (name, row) in algorithms.iter().zip(&scores) {
            if row.len() != networks.len() {
                return Err(Error::InvalidScores(format!(
                    "unbalanced groups: {name} has {} scores for {} networks",
                    row.len(),
                    networks.len()
                )));
            }
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                return Err(Error::InvalidScores(format!(
                    "non-finite score {x} for {name}"
                )));
            }
        }
        Ok(Self {
            measure: measure.into(),
            algorithms,
            networks,
            scores,
        })
    }

    /// Reads `algorithm,network,score` rows. Every algorithm must have
    /// exactly one score on every network.
    pub fn from_csv<R: Read>(input: R, measure: impl Into<String>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let headers = reader
            .headers()
            .map_err(|e| Error::InvalidScores(e.to_string()))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["algorithm", "network", "score"] {
            return Err(Error::InvalidScores(format!(
                "expected header `algorithm,network,score`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut algorithms: Vec<String> = Vec::new();
        let mut networks: Vec<String> = Vec::new();
        let mut cells: HashMap<(usize, usize), f64> = HashMap::new();
        for (i, record) in reader.deserialize::<ScoreRecord>().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| Error::MalformedLine {
                line,
                reason: e.to_string(),
            })?;
            let a = position_or_push(&mut algorithms, record.algorithm);
            let k = position_or_push(&mut networks, record.network);
            if cells.insert((a, k), record.score).is_some() {
                return Err(Error::InvalidScores(format!(
                    "line {line}: duplicate score for {} on {}",
                    algorithms[a], networks[k]
                )));
            }
        }
        let mut scores = Vec::with_capacity(algorithms.len());
        for (a, name) in algorithms.iter().enumerate() {
            let row = (0..networks.len())
                .map(|k| {
                    cells.get(&(a, k)).copied().ok_or_else(|| {
                        Error::InvalidScores(format!(
                            "unbalanced groups: no score for {name} on {}",
                            networks[k]
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            scores.push(row);
        }
        Self::new(measure, algorithms, networks, scores)
    }

    pub fn measure(&self) -> &str {
        &self.measure
    }

    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    pub fn networks(&self) -> &[String] {
        &self.networks
    }

    pub fn scores(&self) -> &[Vec<f64>] {
        &self.scores
    }

    pub fn group_count(&self) -> usize {
        self.algorithms.len()
    }

    /// Observations per algorithm.
    pub fn group_size(&self) -> usize {
        self.networks.len()
    }

    pub fn means(&self) -> Vec<f64> {
        self.scores
            .iter()
            .map(|row| row.iter().sum::<f64>() / row.len() as f64)
            .collect()
    }
}

fn position_or_push(list: &mut Vec<String>, item: String) -> usize {
    match list.iter().position(|x| *x == item) {
        Some(i) => i,
        None => {
            list.push(item);
            list.len() - 1
        }
    }
}

/// Sums of squares and the F test of a one-way ANOVA.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anova {
    pub f_stat: f64,
    pub p_value: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub ms_between: f64,
    pub ms_within: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AnovaOutcome {
    /// Every observation is identical; there is nothing to test.
    NoDifferences,
    Tested(Anova),
}

impl AnovaOutcome {
    pub fn is_no_differences(&self) -> bool {
        matches!(self, AnovaOutcome::NoDifferences)
    }
}

struct Variance {
    ms_between: f64,
    ms_within: f64,
    df_between: usize,
    df_within: usize,
    constant: bool,
}

fn variance(m: &ScoreMatrix) -> Variance {
    let k = m.group_count();
    let n = m.group_size();
    let means = m.means();
    let grand = means.iter().sum::<f64>() / k as f64;
    let ss_between: f64 = means.iter().map(|mu| n as f64 * (mu - grand).powi(2)).sum();
    let ss_within: f64 = m
        .scores
        .iter()
        .zip(&means)
        .flat_map(|(row, mu)| row.iter().map(move |x| (x - mu).powi(2)))
        .sum();
    let first = m.scores[0][0];
    let constant = m.scores.iter().flatten().all(|&x| x == first);
    let df_between = k - 1;
    let df_within = k * (n - 1);
    Variance {
        ms_between: ss_between / df_between as f64,
        ms_within: ss_within / df_within as f64,
        df_between,
        df_within,
        constant,
    }
}

/// One-way ANOVA across algorithms.
pub fn one_way_anova(m: &ScoreMatrix) -> AnovaOutcome {
    let v = variance(m);
    if v.constant {
        return AnovaOutcome::NoDifferences;
    }
    let (f_stat, p_value) = if v.ms_within == 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        let f = v.ms_between / v.ms_within;
        let dist = FisherSnedecor::new(v.df_between as f64, v.df_within as f64)
            .expect("positive degrees of freedom");
        (f, dist.sf(f))
    };
    AnovaOutcome::Tested(Anova {
        f_stat,
        p_value,
        df_between: v.df_between,
        df_within: v.df_within,
        ms_between: v.ms_between,
        ms_within: v.ms_within,
    })
}

/// One pairwise Tukey comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairComparison {
    pub first: usize,
    pub second: usize,
    pub mean_difference: f64,
    /// `|mean_a − mean_b| / sqrt(MSW / n)`.
    pub q_stat: f64,
    pub p_value: f64,
    pub significant: bool,
}

/// Tukey's honestly significant difference test over all pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TukeyHsd {
    pub alpha: f64,
    pub q_critical: f64,
    pub pairs: Vec<PairComparison>,
}

impl TukeyHsd {
    pub fn significant(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        self.pairs
            .iter()
            .any(|p| p.first == a && p.second == b && p.significant)
    }

    pub fn significant_pairs(&self) -> impl Iterator<Item = &PairComparison> {
        self.pairs.iter().filter(|p| p.significant)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// Pair `(a, b)` is significant when its studentized mean difference
/// exceeds the studentized-range quantile `q(alpha, k, df_within)`.
pub fn tukey_hsd(m: &ScoreMatrix, alpha: f64) -> Result<TukeyHsd> {
    check_alpha(alpha)?;
    let v = variance(m);
    let k = m.group_count();
    let q_critical = studentized_range::quantile(alpha, k, v.df_within as f64);
    let means = m.means();
    let se = (v.ms_within / m.group_size() as f64).sqrt();
    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    for a in 0..k {
        for b in a + 1..k {
            let diff = means[a] - means[b];
            let (q_stat, p_value) = if v.constant || diff == 0.0 {
                (0.0, 1.0)
            } else if se == 0.0 {
                (f64::INFINITY, 0.0)
            } else {
                let q = diff.abs() / se;
                (q, studentized_range::sf(q, k, v.df_within as f64))
            };
            pairs.push(PairComparison {
                first: a,
                second: b,
                mean_difference: diff,
                q_stat,
                p_value,
                significant: q_stat > q_critical,
            });
        }
    }
    Ok(TukeyHsd {
        alpha,
        q_critical,
        pairs,
    })
}

/// A rank shared by algorithms that are not significantly different.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub algorithms: Vec<String>,
    pub means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankTable {
    pub measure: String,
    pub alpha: f64,
    pub rows: Vec<RankRow>,
}

impl RankTable {
    /// Rank of `algorithm`, if present.
    pub fn rank_of(&self, algorithm: &str) -> Option<usize> {
        self.rows
            .iter()
            .find(|row| row.algorithms.iter().any(|a| a == algorithm))
            .map(|row| row.rank)
    }
}

impl fmt::Display for RankTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (alpha = {})", self.measure, self.alpha)?;
        writeln!(f, "{:<6}algorithms", "rank")?;
        for row in &self.rows {
            writeln!(f, "{:<6}{}", row.rank, row.algorithms.join(", "))?;
        }
        Ok(())
    }
}

/// Groups algorithms, best mean first.
///
/// Walking the mean-sorted order, an algorithm joins the current row
/// unless Tukey's test separates it from the row's first member. Since
/// groups are balanced, every member of a row is then non-significantly
/// different from every other. A row's rank is one plus the number of
/// algorithms in better rows.
pub fn rank_table(m: &ScoreMatrix, alpha: f64) -> Result<RankTable> {
    let tukey = tukey_hsd(m, alpha)?;
    let means = m.means();
    let mut order: Vec<usize> = (0..m.group_count()).collect();
    order.sort_by(|&a, &b| {
        means[b]
            .total_cmp(&means[a])
            .then_with(|| m.algorithms[a].cmp(&m.algorithms[b]))
    });

    let mut rows: Vec<RankRow> = Vec::new();
    let mut leader = order[0];
    let mut placed = 0;
    let mut current = vec![leader];
    for &a in &order[1..] {
        if tukey.significant(leader, a) {
            rows.push(make_row(m, &means, &current, placed));
            placed += current.len();
            leader = a;
            current = vec![a];
        } else {
            current.push(a);
        }
    }
    rows.push(make_row(m, &means, &current, placed));
    Ok(RankTable {
        measure: m.measure.clone(),
        alpha,
        rows,
    })
}

fn make_row(m: &ScoreMatrix, means: &[f64], members: &[usize], better: usize) -> RankRow {
    RankRow {
        rank: better + 1,
        algorithms: members.iter().map(|&a| m.algorithms[a].clone()).collect(),
        means: members.iter().map(|&a| means[a]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(groups: &[(&str, &[f64])]) -> ScoreMatrix {
        let n = groups[0].1.len();
        ScoreMatrix::new(
            "score",
            groups.iter().map(|(a, _)| a.to_string()).collect(),
            (0..n).map(|k| format!("net{k}")).collect(),
            groups.iter().map(|(_, s)| s.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn anova_hand_fixture() {
        let m = matrix(&[("low", &[1.0, 2.0, 3.0]), ("high", &[7.0, 8.0, 9.0])]);
        let AnovaOutcome::Tested(a) = one_way_anova(&m) else {
            panic!("expected a test");
        };
        assert!((a.f_stat - 54.0).abs() < 1e-9);
        assert_eq!((a.df_between, a.df_within), (1, 4));
        assert!((a.ms_within - 1.0).abs() < 1e-12);
        assert!(a.p_value < 0.01);
    }

    #[test]
    fn anova_constant_data() {
        let m = matrix(&[("a", &[0.5, 0.5]), ("b", &[0.5, 0.5])]);
        assert!(one_way_anova(&m).is_no_differences());
        let t = tukey_hsd(&m, 0.05).unwrap();
        assert_eq!(t.significant_pairs().count(), 0);
        let r = rank_table(&m, 0.05).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].rank, 1);
    }

    #[test]
    fn anova_same_distribution_not_significant() {
        // fixed fixture drawn once from a single distribution
        let m = matrix(&[
            ("a", &[0.52, 0.47, 0.55, 0.49, 0.51]),
            ("b", &[0.50, 0.53, 0.46, 0.54, 0.48]),
            ("c", &[0.49, 0.51, 0.52, 0.47, 0.53]),
        ]);
        let AnovaOutcome::Tested(a) = one_way_anova(&m) else {
            panic!("expected a test");
        };
        // means .508 .502 .504, grand .504667; SSB = 5*(1.1111e-5+7.111e-6+4.444e-7)
        let ssb = 5.0
            * [0.508f64, 0.502, 0.504]
                .iter()
                .map(|x| (x - 0.504_666_666_666_666_7).powi(2))
                .sum::<f64>();
        assert!((a.ms_between - ssb / 2.0).abs() < 1e-12);
        assert!(a.p_value > 0.05);
    }

    #[test]
    fn identical_groups_not_significant() {
        let m = matrix(&[("a", &[1.0, 2.0, 3.0]), ("b", &[1.0, 2.0, 3.0])]);
        assert_eq!(tukey_hsd(&m, 0.05).unwrap().significant_pairs().count(), 0);
    }

    #[test]
    fn tukey_hand_fixture() {
        let m = matrix(&[("low", &[1.0, 2.0, 3.0]), ("high", &[7.0, 8.0, 9.0])]);
        let t = tukey_hsd(&m, 0.05).unwrap();
        let pair = t.pairs[0];
        assert!((pair.q_stat - 6.0 / (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((t.q_critical - 3.93).abs() < 0.01);
        assert!(pair.significant);
    }

    #[test]
    fn tukey_outlier_group() {
        let m = matrix(&[
            ("a", &[0.80, 0.82, 0.81, 0.79]),
            ("b", &[0.81, 0.80, 0.82, 0.80]),
            ("c", &[0.40, 0.42, 0.41, 0.39]),
        ]);
        let t = tukey_hsd(&m, 0.05).unwrap();
        let sig: Vec<(usize, usize)> = t.significant_pairs().map(|p| (p.first, p.second)).collect();
        assert_eq!(sig, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn rank_two_groups() {
        let m = matrix(&[("second", &[1.0, 2.0, 3.0]), ("first", &[7.0, 8.0, 9.0])]);
        let r = rank_table(&m, 0.05).unwrap();
        assert_eq!(r.rank_of("first"), Some(1));
        assert_eq!(r.rank_of("second"), Some(2));
    }

    #[test]
    fn rank_skips_after_tied_leaders() {
        let m = matrix(&[
            ("C", &[0.40, 0.42, 0.41, 0.39]),
            ("A", &[0.80, 0.82, 0.81, 0.79]),
            ("B", &[0.81, 0.80, 0.82, 0.80]),
        ]);
        let r = rank_table(&m, 0.05).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[0].rank, 1);
        let mut leaders = r.rows[0].algorithms.clone();
        leaders.sort();
        assert_eq!(leaders, ["A", "B"]);
        assert_eq!(r.rows[1].rank, 3);
        assert_eq!(r.rows[1].algorithms, ["C"]);
        let text = r.to_string();
        assert!(text.contains("3     C"), "{text}");
    }

    #[test]
    fn csv_parsing() {
        let csv = "algorithm,network,score\nA,n1,0.9\nB,n1,0.5\nA,n2,0.8\nB,n2,0.6\n";
        let m = ScoreMatrix::from_csv(csv.as_bytes(), "f").unwrap();
        assert_eq!(m.algorithms(), ["A", "B"]);
        assert_eq!(m.networks(), ["n1", "n2"]);
        assert_eq!(m.scores(), &[vec![0.9, 0.8], vec![0.5, 0.6]]);
    }

    #[test]
    fn csv_errors() {
        let bad_header = "algo,network,score\nA,n1,1\n";
        assert!(ScoreMatrix::from_csv(bad_header.as_bytes(), "f").is_err());
        let unbalanced = "algorithm,network,score\nA,n1,1\nA,n2,1\nB,n1,1\nB,n3,2\n";
        let err = ScoreMatrix::from_csv(unbalanced.as_bytes(), "f").unwrap_err();
        assert!(err.to_string().contains("unbalanced"), "{err}");
        let dup = "algorithm,network,score\nA,n1,1\nA,n1,1\n";
        assert!(ScoreMatrix::from_csv(dup.as_bytes(), "f").is_err());
        let junk = "algorithm,network,score\nA,n1,abc\n";
        assert!(matches!(
            ScoreMatrix::from_csv(junk.as_bytes(), "f"),
            Err(Error::MalformedLine { line: 2, .. })
        ));
        let single = "algorithm,network,score\nA,n1,1\nB,n1,2\n";
        assert!(ScoreMatrix::from_csv(single.as_bytes(), "f").is_err());
    }

    #[test]
    fn invalid_alpha() {
        let m = matrix(&[("a", &[1.0, 2.0]), ("b", &[2.0, 3.0])]);
        assert!(tukey_hsd(&m, 0.0).is_err());
        assert!(rank_table(&m, 1.0).is_err());
    }
}
