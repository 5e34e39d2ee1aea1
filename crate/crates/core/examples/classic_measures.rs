//! Every classic measure on two triangles joined by a bridge, against a
//! partition that misplaces one node.

use commeval::{
    contingency, f_measure, inverse_purity, modularity, newman_fcc, nmi, parse_edge_list, purity,
    rand_index, Partition,
};

fn main() -> commeval::Result<()> {
    let g = parse_edge_list("1 2\n2 3\n1 3\n4 5\n5 6\n4 6\n3 4\n".as_bytes())?;
    let truth = Partition::from_tokens(g.nodes().clone(), ["x", "x", "x", "y", "y", "y"])?;
    let found = Partition::from_tokens(g.nodes().clone(), ["x", "x", "y", "y", "y", "y"])?;

    let table = contingency(&found, &truth)?;
    println!("contingency (rows = found, cols = truth):");
    for row in table.counts() {
        println!("  {row:?}");
    }
    println!("purity          {:.4}", purity(&found, &truth)?);
    println!("inverse purity  {:.4}", inverse_purity(&found, &truth)?);
    println!("F-measure       {:.4}", f_measure(&found, &truth)?);
    println!("Newman FCC      {:.4}", newman_fcc(&found, &truth)?);
    println!("NMI             {:.4}", nmi(&found, &truth)?);
    println!("Rand            {:.4}", rand_index(&found, &truth)?);
    println!("Q(truth)        {:.4}", modularity(&g, &truth)?);
    println!("Q(found)        {:.4}", modularity(&g, &found)?);
    Ok(())
}
