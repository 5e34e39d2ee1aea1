//! The `commeval` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input, 3 degenerate or
//! infeasible computation. Every failure prints one `error: ...` line to
//! stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::generator::{self, LfrConfig, PlantedConfig};
use crate::graph::{parse_edge_list, Graph, NodeSet};
use crate::partition::{parse_partition, Partition};
use crate::ranking::{self, AnovaOutcome, RankTable, ScoreMatrix, TukeyHsd};
use crate::report::{
    format_float, to_stable_json, EvalOptions, Evaluator, InputDigest, Inputs, Measure,
    PartitionResult, Report, ZeroWeightPolicy,
};
use crate::topo::WeightScheme;

pub const TOOL: &str = "commeval";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Overrides `--seed` of the generators when set.
pub const SEED_ENV: &str = "COMMEVAL_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "commeval",
    version,
    about = "Evaluate community detection results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score predicted partitions against a reference partition.
    Eval(EvalArgs),
    /// Generate a benchmark graph with planted communities.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Rank algorithms from a scores CSV with ANOVA and Tukey HSD.
    Rank(RankArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ZeroWeights {
    Error,
    Uniform,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Edge list: `u v [weight]` per line.
    #[arg(long)]
    graph: PathBuf,
    /// Reference partition: `node community` per line.
    #[arg(long)]
    reference: PathBuf,
    /// One or more predicted partitions.
    #[arg(long, required = true, num_args = 1..)]
    predicted: Vec<PathBuf>,
    /// Comma-separated measure names; all when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_measure)]
    measures: Vec<Measure>,
    #[arg(long, default_value = "internal-degree", value_parser = parse_scheme)]
    weights: WeightScheme,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[arg(long, value_enum, default_value_t = ZeroWeights::Error)]
    on_zero_weights: ZeroWeights,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// `key = value` settings, overridden by flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_graph: PathBuf,
    #[arg(long)]
    out_communities: PathBuf,
}

#[derive(Debug, Subcommand)]
enum GenerateCommand {
    /// Equal-size blocks with uniform link probabilities.
    Planted {
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        communities: Option<usize>,
        #[arg(long, value_parser = parse_mu)]
        mu: Option<f64>,
        #[arg(long)]
        avg_degree: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Power-law degrees and community sizes.
    Lfr {
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_parser = parse_mu)]
        mu: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        beta_c: Option<f64>,
        #[arg(long)]
        avg_degree: Option<f64>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        min_community: Option<usize>,
        #[arg(long)]
        max_community: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RankFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct RankArgs {
    /// CSV with header `algorithm,network,score`.
    scores: PathBuf,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    alpha: f64,
    /// Name of the measure the scores come from.
    #[arg(long, default_value = "score")]
    measure: String,
    #[arg(long, value_enum, default_value_t = RankFormat::Text)]
    format: RankFormat,
    /// Also write the JSON report here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.trim().parse().map_err(|e: Error| e.to_string())
}

fn parse_scheme(s: &str) -> Result<WeightScheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mu(s: &str) -> Result<f64, String> {
    let mu: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if (0.0..1.0).contains(&mu) {
        Ok(mu)
    } else {
        Err(format!("mu must lie in [0, 1), got {mu}"))
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must lie in (0, 1), got {a}"))
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn at(path: &Path, e: Error) -> Self {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_) => 1,
            Error::ZeroTotalWeight
            | Error::Infeasible(_)
            | Error::EmptyGraph
            | Error::EdgelessGraph
            | Error::TooFewElements { .. } => 3,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid usage");
            let _ = writeln!(
                stderr,
                "error: {}",
                one_line(first.trim_start_matches("error:"))
            );
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Eval(args) => cmd_eval(&args, stdout, stderr),
        Command::Generate(cmd) => cmd_generate(cmd, stdout),
        Command::Rank(args) => cmd_rank(&args, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", one_line(&f.message));
            f.code
        }
    }
}

struct Loaded {
    digest: InputDigest,
    bytes: Vec<u8>,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::at(path, e.into()))?;
    Ok(Loaded {
        digest: InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        },
        bytes,
    })
}

fn load_partition(path: &Path, nodes: &Arc<NodeSet>) -> Result<(InputDigest, Partition), Failure> {
    let file = load(path)?;
    let p = parse_partition(&file.bytes[..], nodes).map_err(|e| Failure::at(path, e))?;
    Ok((file.digest, p))
}

fn cmd_eval(
    args: &EvalArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let graph_file = load(&args.graph)?;
    let graph: Graph =
        parse_edge_list(&graph_file.bytes[..]).map_err(|e| Failure::at(&args.graph, e))?;
    let (reference_digest, reference) = load_partition(&args.reference, graph.nodes())?;

    let measures = if args.measures.is_empty() {
        Measure::ALL.to_vec()
    } else {
        let mut ms = args.measures.clone();
        ms.sort();
        ms.dedup();
        ms
    };
    let options = EvalOptions {
        measures,
        scheme: args.weights,
        on_zero_weights: match args.on_zero_weights {
            ZeroWeights::Error => ZeroWeightPolicy::Error,
            ZeroWeights::Uniform => ZeroWeightPolicy::Uniform,
        },
    };
    let evaluator =
        Evaluator::new(&graph, &reference, options).map_err(|e| Failure::at(&args.reference, e))?;

    let results = args
        .predicted
        .par_iter()
        .map(|path| {
            let (digest, p) = load_partition(path, graph.nodes())?;
            let report = evaluator.evaluate(&p).map_err(|e| Failure::at(path, e))?;
            Ok(PartitionResult::new(digest, &report))
        })
        .collect::<Result<Vec<_>, Failure>>()?;

    let report = Report {
        tool: TOOL,
        version: VERSION,
        weights: args.weights.name(),
        inputs: Inputs {
            graph: graph_file.digest,
            reference: reference_digest,
        },
        results,
        warnings: evaluator.warnings().to_vec(),
    };
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let io = |e: std::io::Error| Failure::from(Error::from(e));
    match args.format {
        ReportFormat::Json => stdout.write_all(report.to_json().as_bytes()).map_err(io),
        ReportFormat::Csv => report.write_csv(stdout).map_err(Failure::from),
    }
}

fn settings(output: &OutputArgs) -> Result<Vec<(String, String)>, Failure> {
    match &output.config {
        None => Ok(Vec::new()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::at(path, e.into()))?;
            let map = generator::parse_config_file(&text).map_err(|e| Failure::at(path, e))?;
            Ok(map.into_iter().collect())
        }
    }
}

fn push<T: ToString>(out: &mut Vec<(String, String)>, key: &str, value: Option<T>) {
    if let Some(v) = value {
        out.push((key.to_owned(), v.to_string()));
    }
}

fn seed_override(out: &mut Vec<(String, String)>) -> Result<(), Failure> {
    if let Ok(raw) = std::env::var(SEED_ENV) {
        let seed: u64 = raw.trim().parse().map_err(|_| {
            Failure::usage(format!(
                "{SEED_ENV} must be an unsigned integer, got {raw:?}"
            ))
        })?;
        out.push(("seed".into(), seed.to_string()));
    }
    Ok(())
}

fn cmd_generate(cmd: GenerateCommand, stdout: &mut dyn Write) -> Result<(), Failure> {
    let (output, result) = match cmd {
        GenerateCommand::Planted {
            output,
            nodes,
            communities,
            mu,
            avg_degree,
            seed,
        } => {
            let mut kv = settings(&output)?;
            push(&mut kv, "nodes", nodes);
            push(&mut kv, "communities", communities);
            push(&mut kv, "mu", mu);
            push(&mut kv, "avg_degree", avg_degree);
            push(&mut kv, "seed", seed);
            seed_override(&mut kv)?;
            let mut cfg = PlantedConfig::default();
            for (k, v) in &kv {
                cfg.set(k, v)?;
            }
            (output, generator::generate_planted(&cfg))
        }
        GenerateCommand::Lfr {
            output,
            nodes,
            mu,
            gamma,
            beta_c,
            avg_degree,
            max_degree,
            min_community,
            max_community,
            seed,
        } => {
            let mut kv = settings(&output)?;
            push(&mut kv, "nodes", nodes);
            push(&mut kv, "mu", mu);
            push(&mut kv, "gamma", gamma);
            push(&mut kv, "beta_c", beta_c);
            push(&mut kv, "avg_degree", avg_degree);
            push(&mut kv, "max_degree", max_degree);
            push(&mut kv, "min_community", min_community);
            push(&mut kv, "max_community", max_community);
            push(&mut kv, "seed", seed);
            seed_override(&mut kv)?;
            let mut cfg = LfrConfig::default();
            for (k, v) in &kv {
                cfg.set(k, v)?;
            }
            (output, generator::generate_lfr(&cfg))
        }
    };
    let (graph, communities) = result?;
    let mixing = generator::empirical_mixing(&graph, &communities)?;

    let mut buf = Vec::new();
    graph.write_edge_list(&mut buf)?;
    fs::write(&output.out_graph, &buf).map_err(|e| Failure::at(&output.out_graph, e.into()))?;
    buf.clear();
    communities.write_partition(&mut buf)?;
    fs::write(&output.out_communities, &buf)
        .map_err(|e| Failure::at(&output.out_communities, e.into()))?;

    writeln!(
        stdout,
        "nodes={} edges={} communities={} mixing={:.6}",
        graph.node_count(),
        graph.edge_count(),
        communities.part_count(),
        mixing
    )
    .map_err(|e| Failure::from(Error::from(e)))
}

#[derive(Serialize)]
struct RankReport<'a> {
    tool: &'static str,
    version: &'static str,
    input: InputDigest,
    algorithms: &'a [String],
    means: Vec<f64>,
    anova: AnovaOutcome,
    tukey: TukeyHsd,
    table: RankTable,
}

fn cmd_rank(args: &RankArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let file = load(&args.scores)?;
    let matrix = ScoreMatrix::from_csv(&file.bytes[..], args.measure.clone())
        .map_err(|e| Failure::at(&args.scores, e))?;
    let anova = ranking::one_way_anova(&matrix);
    let tukey = ranking::tukey_hsd(&matrix, args.alpha)?;
    let table = ranking::rank_table(&matrix, args.alpha)?;

    let text = {
        let mut t = String::new();
        match &anova {
            AnovaOutcome::NoDifferences => t.push_str("anova: all scores identical\n"),
            AnovaOutcome::Tested(a) => t.push_str(&format!(
                "anova: F({}, {}) = {}, p = {}\n",
                a.df_between,
                a.df_within,
                format_float(a.f_stat),
                format_float(a.p_value)
            )),
        }
        t.push_str(&table.to_string());
        t
    };
    let report = RankReport {
        tool: TOOL,
        version: VERSION,
        input: file.digest,
        algorithms: matrix.algorithms(),
        means: matrix.means(),
        anova,
        tukey,
        table,
    };
    let json = to_stable_json(&report);
    if let Some(path) = &args.json_out {
        fs::write(path, &json).map_err(|e| Failure::at(path, e.into()))?;
    }
    let shown = match args.format {
        RankFormat::Text => text,
        RankFormat::Json => json,
    };
    stdout
        .write_all(shown.as_bytes())
        .map_err(|e| Failure::from(Error::from(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("commeval").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, _, err) = run_args(&["eval", "--graph", "g.txt"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: "));
        assert_eq!(err.lines().count(), 1);

        let (code, _, _) = run_args(&["frobnicate"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn help_and_version_exit_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("eval"));
        let (code, out, _) = run_args(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.contains(VERSION));
    }

    #[test]
    fn mu_outside_unit_interval_is_usage_error() {
        let (code, _, err) = run_args(&[
            "generate",
            "planted",
            "--mu",
            "1.5",
            "--out-graph",
            "g",
            "--out-communities",
            "c",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("mu"), "{err}");
    }

    #[test]
    fn missing_file_names_path() {
        let (code, _, err) = run_args(&["rank", "/nonexistent/scores.csv"]);
        assert_eq!(code, 2);
        assert!(err.contains("/nonexistent/scores.csv"), "{err}");
    }
}
