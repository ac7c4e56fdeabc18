mod common;

use std::collections::HashMap;

use common::{packed_columns, random_codes};
use coset_ricci::graph::{build_coset_graph, covering_radius_bruteforce};
use coset_ricci::{zoo, BitMatrix, BitVector, LinearCode};
use coset_ricci_oracles as oracle;

#[test]
fn vertex_count_and_degree() {
    for code in random_codes(60, 8, 14, 1) {
        let g = build_coset_graph(&code, 24).unwrap();
        assert_eq!(g.vertex_count(), 1 << code.generator().rank());
        assert_eq!(
            g.vertex_count(),
            oracle::vertex_count(&packed_columns(&code))
        );
        for x in 0..g.vertex_count() as u32 {
            assert_eq!(g.degree(x), code.n());
        }
    }
}

#[test]
fn diameter_is_dual_covering_radius() {
    for code in random_codes(50, 8, 14, 2) {
        let g = build_coset_graph(&code, 24).unwrap();
        let cols = packed_columns(&code);
        assert_eq!(
            g.diameter() as u32,
            oracle::covering_radius(&cols),
            "{code:?}"
        );
        assert_eq!(g.diameter() as u32, oracle::cayley_diameter(&cols));
        assert_eq!(g.diameter(), covering_radius_bruteforce(&code).unwrap());
    }
}

#[test]
fn sphere_profile_is_vertex_independent() {
    for code in random_codes(20, 8, 12, 3) {
        let g = build_coset_graph(&code, 24).unwrap();
        let origin = g.sphere_profile();
        for x in 0..g.vertex_count() as u32 {
            assert_eq!(g.sphere_profile_from(x), origin);
        }
    }
}

/// Neighbor multisets keyed by vertex, for comparing adjacency structures.
fn adjacency(g: &coset_ricci::graph::CosetGraph) -> Vec<HashMap<u32, usize>> {
    (0..g.vertex_count() as u32)
        .map(|x| g.neighbors(x).collect())
        .collect()
}

#[test]
fn product_graph_is_cartesian_product() {
    let factors = [
        zoo::hadamard(2).unwrap(),
        zoo::hadamard(3).unwrap(),
        zoo::full_space(2).unwrap(),
        zoo::perfect_3lcc_basic(),
        zoo::random_code(3, 5, 11).unwrap(),
    ];
    for a in &factors {
        for b in &factors {
            let p = zoo::direct_product(a, b).unwrap();
            if p.dim() > 10 {
                continue;
            }
            let (ga, gb, gp) = (
                build_coset_graph(a, 24).unwrap(),
                build_coset_graph(b, 24).unwrap(),
                build_coset_graph(&p, 24).unwrap(),
            );
            assert_eq!(gp.vertex_count(), ga.vertex_count() * gb.vertex_count());
            // Block-diagonal rows keep each factor's labels in its own bits.
            let shift = a.dim();
            let pair = |x: u32, y: u32| x | (y << shift);
            let (adj_a, adj_b, adj_p) = (adjacency(&ga), adjacency(&gb), adjacency(&gp));
            for x in 0..ga.vertex_count() as u32 {
                for y in 0..gb.vertex_count() as u32 {
                    let mut expected: HashMap<u32, usize> = HashMap::new();
                    for (&x2, &m) in &adj_a[x as usize] {
                        *expected.entry(pair(x2, y)).or_default() += m;
                    }
                    for (&y2, &m) in &adj_b[y as usize] {
                        *expected.entry(pair(x, y2)).or_default() += m;
                    }
                    assert_eq!(adj_p[pair(x, y) as usize], expected);
                }
            }
            assert_eq!(gp.diameter(), ga.diameter() + gb.diameter());
        }
    }
}

#[test]
fn loops_count_once_toward_degree() {
    let cols: Vec<BitVector> = [0u64, 0, 1, 2, 3]
        .iter()
        .map(|&v| BitVector::from_u64(2, v))
        .collect();
    let code = LinearCode::new(BitMatrix::from_columns(2, &cols).unwrap()).unwrap();
    let g = build_coset_graph(&code, 24).unwrap();
    assert_eq!(g.loops(), 2);
    assert!((0..4).all(|x| g.degree(x) == 5));
}
