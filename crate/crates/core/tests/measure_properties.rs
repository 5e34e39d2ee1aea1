mod common;

use commeval::graph::GraphBuilder;
use commeval::topo::topo_f_measure_with;
use commeval::{
    f_measure, inverse_purity, newman_fcc, nmi, node_weights, parse_edge_list, parse_partition,
    purity, rand_index, weighted_purity, Graph, NodeId, NodeWeights, Partition, WeightScheme,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn case(seed: u64, n: usize, parts: usize) -> (Graph, Partition, Partition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_graph(&mut rng, n, 0.2, false);
    let x = random_partition(&mut rng, &g, parts);
    let y = random_partition(&mut rng, &g, parts);
    (g, x, y)
}

/// Same partition with labels renamed in reverse part order.
fn relabel(p: &Partition) -> Partition {
    let k = p.part_count();
    let labels: Vec<String> = p
        .assignment()
        .iter()
        .map(|&c| format!("c{}", k - c))
        .collect();
    Partition::from_tokens(p.nodes().clone(), labels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inverse_purity_is_transposed_purity(seed in any::<u64>(), n in 1usize..40, k in 1usize..8) {
        let (_, x, y) = case(seed, n, k);
        prop_assert_eq!(inverse_purity(&x, &y).unwrap(), purity(&y, &x).unwrap());
        prop_assert_eq!(f_measure(&x, &y).unwrap(), f_measure(&y, &x).unwrap());
    }

    #[test]
    fn scores_lie_in_unit_interval(seed in any::<u64>(), n in 2usize..40, k in 1usize..8) {
        let (g, x, y) = case(seed, n, k);
        let mut scores = vec![
            purity(&x, &y).unwrap(),
            f_measure(&x, &y).unwrap(),
            newman_fcc(&x, &y).unwrap(),
            nmi(&x, &y).unwrap(),
            rand_index(&x, &y).unwrap(),
        ];
        if let Ok(w) = node_weights(&g, &y, WeightScheme::InternalDegree) {
            if w.total() > 0.0 {
                scores.push(topo_f_measure_with(&x, &y, &w).unwrap());
            }
        }
        for s in scores {
            prop_assert!((0.0..=1.0).contains(&s), "{}", s);
        }
    }

    #[test]
    fn identical_partitions_score_one(seed in any::<u64>(), n in 2usize..40, k in 1usize..8) {
        let (_, x, _) = case(seed, n, k);
        prop_assert_eq!(purity(&x, &x).unwrap(), 1.0);
        prop_assert_eq!(f_measure(&x, &x).unwrap(), 1.0);
        prop_assert_eq!(newman_fcc(&x, &x).unwrap(), 1.0);
        prop_assert_eq!(rand_index(&x, &x).unwrap(), 1.0);
        prop_assert!((nmi(&x, &x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn labels_do_not_matter(seed in any::<u64>(), n in 2usize..40, k in 1usize..8) {
        let (g, x, y) = case(seed, n, k);
        let (x2, y2) = (relabel(&x), relabel(&y));
        prop_assert_eq!(rand_index(&x, &y).unwrap(), rand_index(&x2, &y2).unwrap());
        prop_assert!((nmi(&x, &y).unwrap() - nmi(&x2, &y2).unwrap()).abs() < 1e-12);
        prop_assert!((purity(&x, &y).unwrap() - purity(&x2, &y2).unwrap()).abs() < 1e-12);
        let w = NodeWeights::uniform(g.node_count());
        prop_assert!(
            (weighted_purity(&x, &y, &w).unwrap() - purity(&x, &y).unwrap()).abs() < 1e-12
        );
    }

    #[test]
    fn weighted_purity_is_scale_invariant(
        seed in any::<u64>(),
        n in 1usize..40,
        k in 1usize..6,
        scale in 1e-3f64..1e3,
    ) {
        let (_, x, y) = case(seed, n, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let w = NodeWeights::custom(raw.clone()).unwrap();
        let ws = NodeWeights::custom(raw.iter().map(|v| v * scale).collect()).unwrap();
        let a = weighted_purity(&x, &y, &w).unwrap();
        let b = weighted_purity(&x, &y, &ws).unwrap();
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn topo_equals_classic_on_equal_cliques(
        seed in any::<u64>(),
        cliques in 2usize..5,
        size in 2usize..7,
        k in 1usize..6,
    ) {
        let mut b = GraphBuilder::default();
        let mut line = 0;
        for c in 0..cliques {
            for i in 0..size {
                b.add_node(&format!("{}", c * size + i));
                for j in 0..i {
                    line += 1;
                    b.add_edge(&format!("{}", c * size + i), &format!("{}", c * size + j), 1.0, line)
                        .unwrap();
                }
            }
        }
        let g = b.build();
        let membership: Vec<usize> = (0..cliques * size).map(|u| u / size).collect();
        let r = Partition::from_membership(g.nodes().clone(), &membership).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_partition(&mut rng, &g, k);
        let w = node_weights(&g, &r, WeightScheme::InternalDegree).unwrap();
        let topo = topo_f_measure_with(&x, &r, &w).unwrap();
        let classic = f_measure(&x, &r).unwrap();
        prop_assert!((topo - classic).abs() < 1e-12, "{} vs {}", topo, classic);
    }

    #[test]
    fn single_move_costs_its_weight(seed in any::<u64>()) {
        // four dense blocks of eight: one misplaced node never flips a majority
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = GraphBuilder::default();
        let mut line = 0;
        for u in 0..32usize {
            b.add_node(&u.to_string());
        }
        for u in 0..32usize {
            for v in u + 1..32 {
                let p = if u / 8 == v / 8 { 0.7 } else { 0.05 };
                if rng.gen_bool(p) {
                    line += 1;
                    b.add_edge(&u.to_string(), &v.to_string(), 1.0, line).unwrap();
                }
            }
        }
        let g = b.build();
        let membership: Vec<usize> = (0..32).map(|u| u / 8).collect();
        let r = Partition::from_membership(g.nodes().clone(), &membership).unwrap();
        let w = node_weights(&g, &r, WeightScheme::InternalDegree).unwrap();
        prop_assume!(w.total() > 0.0);
        let u = NodeId(rng.gen_range(0..32));
        let x = perturb(&mut rng, &r, &[u]);
        let expected = 1.0 - w.get(u) / w.total();
        prop_assert!((weighted_purity(&x, &r, &w).unwrap() - expected).abs() < 1e-12);
        prop_assert!((weighted_purity(&r, &x, &w).unwrap() - expected).abs() < 1e-12);
        prop_assert!((topo_f_measure_with(&x, &r, &w).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn serialized_graph_and_partition_round_trip(seed in any::<u64>(), n in 1usize..30, weighted in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 0.2, weighted);
        let p = random_partition(&mut rng, &g, 5);
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let g2 = parse_edge_list(&buf[..]).unwrap();
        prop_assert_eq!(g2.node_count(), g.node_count());
        prop_assert_eq!(g2.edge_count(), g.edge_count());
        let edges = |g: &Graph| {
            let mut e: Vec<(String, String, u64)> = g
                .edges()
                .map(|(u, v, w)| {
                    let (a, b) = (g.token(u).to_owned(), g.token(v).to_owned());
                    let (a, b) = if a < b { (a, b) } else { (b, a) };
                    (a, b, w.to_bits())
                })
                .collect();
            e.sort();
            e
        };
        prop_assert_eq!(edges(&g), edges(&g2));

        let mut buf = Vec::new();
        p.write_partition(&mut buf).unwrap();
        let p2 = parse_partition(&buf[..], g.nodes()).unwrap();
        prop_assert_eq!(p2.assignment(), p.assignment());
    }
}

#[test]
fn hub_and_boundary_moves_differ_only_with_weights() {
    let f = two_communities();
    let hub = node(&f.graph, "2");
    let boundary = node(&f.graph, "6");
    let w = node_weights(&f.graph, &f.r, WeightScheme::InternalDegree).unwrap();
    assert!(w.get(hub) > w.get(boundary));
    assert_eq!(
        f_measure(&f.a, &f.r).unwrap(),
        f_measure(&f.b, &f.r).unwrap()
    );
    assert!(
        topo_f_measure_with(&f.a, &f.r, &w).unwrap() < topo_f_measure_with(&f.b, &f.r, &w).unwrap()
    );
}
