//! Ranks three synthetic "algorithms" on five LFR networks. Each one is the
//! reference with a share of nodes moved to another community.

use commeval::generator::{generate_lfr, LfrConfig};
use commeval::ranking::{one_way_anova, rank_table, AnovaOutcome, ScoreMatrix};
use commeval::topo::topo_f_measure_with;
use commeval::{f_measure, node_weights, NodeId, Partition, WeightScheme};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn perturb(r: &Partition, share: f64, rng: &mut ChaCha8Rng) -> commeval::Result<Partition> {
    let mut ids: Vec<usize> = (0..r.len()).collect();
    ids.shuffle(rng);
    let k = r.part_count();
    let moves: Vec<(NodeId, usize)> = ids[..(share * r.len() as f64) as usize]
        .iter()
        .map(|&u| {
            let to = (r.part_of(NodeId(u)) + rng.gen_range(1..k)) % k;
            (NodeId(u), to)
        })
        .collect();
    r.with_moves(&moves)
}

fn main() -> commeval::Result<()> {
    let shares = [("none", 0.0), ("five", 0.05), ("twenty", 0.20)];
    let mut classic = vec![Vec::new(); shares.len()];
    let mut topo = vec![Vec::new(); shares.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 1..=5 {
        let (g, r) = generate_lfr(&LfrConfig {
            seed,
            ..LfrConfig::default()
        })?;
        let w = node_weights(&g, &r, WeightScheme::InternalDegree)?;
        for (i, &(_, share)) in shares.iter().enumerate() {
            let x = perturb(&r, share, &mut rng)?;
            classic[i].push(f_measure(&x, &r)?);
            topo[i].push(topo_f_measure_with(&x, &r, &w)?);
        }
    }

    let algorithms: Vec<String> = shares.iter().map(|(n, _)| n.to_string()).collect();
    let networks: Vec<String> = (1..=5).map(|k| format!("net{k}")).collect();
    for (measure, scores) in [("F", classic), ("F'", topo)] {
        let m = ScoreMatrix::new(measure, algorithms.clone(), networks.clone(), scores)?;
        if let AnovaOutcome::Tested(a) = one_way_anova(&m) {
            println!("ANOVA F = {:.3e}, p = {:.2e}", a.f_stat, a.p_value);
        }
        println!("{}", rank_table(&m, 0.05)?);
    }
    Ok(())
}
