//! Generates a planted-partition graph and an LFR-style graph and reports
//! their size and empirical mixing. Pass a directory to also write the
//! edge lists and community files there.
//!
//! `cargo run --release --example generate_benchmark -- /tmp/bench`

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use commeval::generator::{
    empirical_mixing, generate_lfr, generate_planted, LfrConfig, PlantedConfig,
};

fn main() -> commeval::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let planted = PlantedConfig {
        nodes: 1000,
        communities: 10,
        mu: 0.3,
        avg_degree: 15.0,
        seed: 42,
    };
    let lfr = LfrConfig {
        seed: 42,
        ..LfrConfig::default()
    };

    for (name, result) in [
        ("planted", generate_planted(&planted)),
        ("lfr", generate_lfr(&lfr)),
    ] {
        let (g, p) = result?;
        println!(
            "{name:<8} n={} m={} communities={} mixing={:.4}",
            g.node_count(),
            g.edge_count(),
            p.part_count(),
            empirical_mixing(&g, &p)?
        );
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            g.write_edge_list(BufWriter::new(File::create(
                dir.join(format!("{name}.edges")),
            )?))?;
            p.write_partition(BufWriter::new(File::create(
                dir.join(format!("{name}.communities")),
            )?))?;
        }
    }
    Ok(())
}
