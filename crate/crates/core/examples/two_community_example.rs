//! Two communities of five nodes. Moving the hub (node 2) or the boundary
//! node (node 6) costs the same under classic purity but not under the
//! topological F-measure.
//!
//! Run with `cargo run --example two_community_example`.

use commeval::topo::topo_f_measure_with;
use commeval::{
    f_measure, inverse_purity, node_weights, parse_edge_list, purity, Partition, WeightScheme,
};

const EDGES: &str = "2 1\n2 3\n2 4\n2 5\n1 3\n4 5\n7 8\n7 9\n7 10\n8 9\n9 10\n6 7\n6 1\n5 10\n";

fn main() -> commeval::Result<()> {
    let g = parse_edge_list(EDGES.as_bytes())?;
    let nodes = g.nodes().clone();
    let r = Partition::from_groups(
        nodes.clone(),
        &[["1", "2", "3", "4", "5"], ["6", "7", "8", "9", "10"]],
    )?;
    let a = r.with_moves(&[(g.node("2").unwrap(), 1)])?;
    let b = r.with_moves(&[(g.node("6").unwrap(), 0)])?;

    let w = node_weights(&g, &r, WeightScheme::InternalDegree)?;
    for token in ["2", "6"] {
        println!("weight of node {token}: {}", w.get(g.node(token).unwrap()));
    }
    println!(
        "{:<4}{:>10}{:>10}{:>10}{:>10}",
        "", "purity", "inverse", "F", "F'"
    );
    for (name, x) in [("A", &a), ("B", &b)] {
        println!(
            "{name:<4}{:>10.4}{:>10.4}{:>10.4}{:>10.4}",
            purity(x, &r)?,
            inverse_purity(x, &r)?,
            f_measure(x, &r)?,
            topo_f_measure_with(x, &r, &w)?
        );
    }
    Ok(())
}
