//! Node weights under each scheme on a small weighted graph, and the
//! weighted purity they produce.

use commeval::{
    node_weights, parse_edge_list, purity, weighted_purity, NodeWeights, Partition, WeightScheme,
};

fn main() -> commeval::Result<()> {
    let g =
        parse_edge_list("a b 3\na c 1\na d 1\nb c 1\nd e 0.5\ne f 2\ne g 1\nf g 1\n".as_bytes())?;
    let r = Partition::from_tokens(g.nodes().clone(), ["L", "L", "L", "L", "R", "R", "R"])?;
    // the left hub a is placed on the right
    let x = Partition::from_tokens(g.nodes().clone(), ["R", "L", "L", "L", "R", "R", "R"])?;

    for scheme in [
        WeightScheme::InternalDegree,
        WeightScheme::Strength,
        WeightScheme::Uniform,
    ] {
        let w = node_weights(&g, &r, scheme)?;
        let shown: Vec<String> = w.values().iter().map(|v| format!("{v:.2}")).collect();
        println!(
            "{scheme:<16} [{}]  Pur' = {:.4}",
            shown.join(" "),
            weighted_purity(&x, &r, &w)?
        );
    }

    // any non-negative weights work
    let custom = NodeWeights::custom(vec![10.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0])?;
    println!(
        "{:<16} Pur' = {:.4}",
        "custom",
        weighted_purity(&x, &r, &custom)?
    );
    println!("{:<16} Pur  = {:.4}", "unweighted", purity(&x, &r)?);
    Ok(())
}
