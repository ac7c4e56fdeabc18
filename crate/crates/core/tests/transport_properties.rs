mod common;

use common::{packed_columns, random_codes};
use coset_ricci::graph::build_coset_graph;
use coset_ricci::local::min_k;
use coset_ricci::transport::{
    curvature_direction_at, curvature_graph, local_measure, w1, DistanceOracle, GraphMetric,
    LocalMeasure, Rational,
};
use coset_ricci::zoo;
use coset_ricci_oracles as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hamming distance on small integers.
struct Hamming;

impl DistanceOracle<u32> for Hamming {
    fn distance(&self, a: &u32, b: &u32) -> Option<u32> {
        Some((a ^ b).count_ones())
    }
}

fn random_measure(rng: &mut ChaCha8Rng, total: i64) -> LocalMeasure<u32> {
    let size = rng.gen_range(1..=5usize);
    let mut points: Vec<u32> = Vec::new();
    while points.len() < size {
        let p = rng.gen_range(0..32u32);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    // A random composition of `total` into `size` positive parts.
    let mut cuts: Vec<i64> = (1..total).collect();
    for i in (1..cuts.len()).rev() {
        cuts.swap(i, rng.gen_range(0..=i));
    }
    let mut cuts: Vec<i64> = cuts.into_iter().take(size - 1).collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(total);
    let mass = cuts
        .windows(2)
        .map(|w| Rational::new(w[1] - w[0], total))
        .collect();
    LocalMeasure::new(points, mass).unwrap()
}

fn oracle_w1(mu: &LocalMeasure<u32>, nu: &LocalMeasure<u32>) -> Rational {
    let cost: Vec<Vec<i64>> = mu
        .support()
        .iter()
        .map(|a| {
            nu.support()
                .iter()
                .map(|b| (a ^ b).count_ones() as i64)
                .collect()
        })
        .collect();
    oracle::w1_by_coupling_enumeration(mu.masses(), nu.masses(), &cost)
}

#[test]
fn w1_matches_coupling_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let total = rng.gen_range(5..=9);
        let mu = random_measure(&mut rng, total);
        let nu = random_measure(&mut rng, total);
        assert_eq!(w1(&mu, &nu, &Hamming).unwrap(), oracle_w1(&mu, &nu));
    }
}

#[test]
fn w1_is_a_metric_on_measures() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..60 {
        let [a, b, c] = [0, 1, 2].map(|_| random_measure(&mut rng, 6));
        let ab = w1(&a, &b, &Hamming).unwrap();
        assert_eq!(ab, w1(&b, &a, &Hamming).unwrap());
        assert!(ab <= w1(&a, &c, &Hamming).unwrap() + w1(&c, &b, &Hamming).unwrap());
        assert_eq!(w1(&a, &a, &Hamming).unwrap(), Rational::from_integer(0));
    }
}

#[test]
fn curvature_is_the_same_at_every_vertex() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for code in random_codes(20, 8, 10, 4) {
        let Ok(report) = curvature_graph(&code) else {
            continue;
        };
        let graph = build_coset_graph(&code, 24).unwrap();
        let metric = GraphMetric::new(&graph);
        for _ in 0..5 {
            let x = rng.gen_range(0..graph.vertex_count() as u32);
            for (i, k) in report.per_direction.iter().enumerate() {
                if let Some(k) = k {
                    assert_eq!(curvature_direction_at(&graph, &metric, x, i).unwrap(), *k);
                }
            }
        }
    }
}

#[test]
fn curvature_matches_oracle_on_tiny_codes() {
    let mut codes = random_codes(40, 4, 6, 5);
    codes.extend([
        zoo::perfect_3lcc_basic(),
        zoo::hadamard(2).unwrap(),
        zoo::full_space(4).unwrap(),
    ]);
    for code in codes {
        let Ok(report) = curvature_graph(&code) else {
            continue;
        };
        assert_eq!(
            Some(report.kappa_graph),
            oracle::graph_curvature(&packed_columns(&code))
        );
    }
}

#[test]
fn curvature_at_least_pair_bound() {
    let mut codes = random_codes(100, 8, 12, 6);
    codes.extend((2..=4).map(|m| zoo::hadamard(m).unwrap()));
    codes.push(zoo::perfect_3lcc_basic());
    codes.push(zoo::hadamard_plus_identity(3).unwrap());
    for code in codes {
        let (Ok(report), Ok(k)) = (curvature_graph(&code), min_k(&code)) else {
            continue;
        };
        let bound = Rational::new(2 * (k as i64 + 1), code.n() as i64 + 1);
        assert!(
            report.kappa_graph >= bound,
            "{code:?}: {} < {bound}",
            report.kappa_graph
        );
    }
}

#[test]
fn jump_of_simple_graphs() {
    for code in random_codes(40, 6, 10, 7) {
        let Ok(report) = curvature_graph(&code) else {
            continue;
        };
        let n = code.n() as i64;
        let expected = Rational::new(n - code.zero_columns() as i64, n + 1);
        assert_eq!(report.max_jump, expected);
        if code.zero_columns() == 0 && code.distinct_columns() == code.n() {
            assert_eq!(report.max_jump, Rational::new(n, n + 1));
        }
        // The jump is the same computed from the full graph.
        let graph = build_coset_graph(&code, 24).unwrap();
        let metric = GraphMetric::new(&graph);
        let m0 = local_measure(&graph, 0);
        assert_eq!(
            w1(&LocalMeasure::point_mass(0), &m0, &metric).unwrap(),
            expected
        );
    }
}
