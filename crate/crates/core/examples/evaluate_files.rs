//! Library equivalent of `commeval eval`: loads a graph, a reference and
//! any number of predicted partitions, then prints every measure.
//!
//! `cargo run --example evaluate_files -- graph.txt reference.txt predicted.txt...`

use std::fs::File;
use std::io::BufReader;

use commeval::report::{EvalOptions, Evaluator};
use commeval::{parse_edge_list, parse_partition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 3 {
        eprintln!("usage: evaluate_files GRAPH REFERENCE PREDICTED...");
        std::process::exit(1);
    }
    let open = |p: &str| File::open(p).map(BufReader::new);
    let g = parse_edge_list(open(&args[0])?)?;
    let reference = parse_partition(open(&args[1])?, g.nodes())?;
    let evaluator = Evaluator::new(&g, &reference, EvalOptions::default())?;
    for w in evaluator.warnings() {
        eprintln!("warning: {w}");
    }
    for path in &args[2..] {
        let predicted = parse_partition(open(path)?, g.nodes())?;
        let report = evaluator.evaluate(&predicted)?;
        println!("{path}");
        for (m, v) in &report.values {
            println!("  {m:<22}{v:.6}");
        }
        for (m, e) in &report.errors {
            println!("  {m:<22}unavailable: {e}");
        }
    }
    Ok(())
}
