mod common;

use quantum_graph::forest::ENUMERATION_LIMIT;
use quantum_graph::transfer::cluster_center;
use quantum_graph::{
    assemble_scaled, build_bouquet, enumerate_odd_saturated_forests, enumerate_saturated_forests,
    exact_incidence_determinant, forest_expansion, BouquetShape, EdgePotential, Error, MetricGraph,
    QuantumGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Leibniz expansion; independent of the elimination used by the library.
fn leibniz(m: &[Vec<i64>]) -> i128 {
    fn go(m: &[Vec<i64>], row: usize, used: &mut Vec<bool>, sign: i128) -> i128 {
        if row == m.len() {
            return sign;
        }
        let mut total = 0;
        let mut passed = 0;
        for col in 0..m.len() {
            if used[col] {
                continue;
            }
            let s = if passed % 2 == 0 { sign } else { -sign };
            passed += 1;
            if m[row][col] != 0 {
                used[col] = true;
                total += m[row][col] as i128 * go(m, row + 1, used, s);
                used[col] = false;
            }
        }
        total
    }
    go(m, 0, &mut vec![false; m.len()], 1)
}

fn odd_shapes() -> Vec<Vec<usize>> {
    let lengths = [1, 3, 5];
    let mut out = Vec::new();
    for r in 2..=4 {
        let mut idx = vec![0; r];
        loop {
            out.push(idx.iter().map(|&i| lengths[i]).collect());
            let mut p = r;
            while p > 0 && idx[p - 1] == lengths.len() - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            for i in p..r {
                idx[i] = idx[p - 1];
            }
        }
    }
    out
}

#[test]
fn bouquet_forest_count_formula() {
    for n in odd_shapes() {
        let shape = BouquetShape::new(n.clone()).unwrap();
        let formula: usize = (0..n.len())
            .map(|i| {
                (0..n.len())
                    .filter(|&j| j != i)
                    .map(|j| n[j])
                    .product::<usize>()
            })
            .sum();
        let forests = enumerate_odd_saturated_forests(&build_bouquet(&shape)).unwrap();
        assert_eq!(forests.len(), formula, "{n:?}");
        assert_eq!(shape.forest_count(), formula as u128);
        assert!(forests.iter().all(|f| f.components == 1));
    }
}

#[test]
fn incidence_determinants_against_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = 0;
    for _ in 0..30 {
        let n = rng.gen_range(2..=7);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        for _ in 0..rng.gen_range(1..=3) {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
        let g = MetricGraph::from_indices(n, &edges).unwrap();
        let inc = g.incidence_matrix();
        for f in enumerate_saturated_forests(&g).unwrap() {
            let sub: Vec<Vec<i64>> = (0..n)
                .map(|v| f.edges.iter().map(|&j| inc[(v, j)]).collect())
                .collect();
            let exact = exact_incidence_determinant(&g, &f);
            assert_eq!(exact, leibniz(&sub));
            let expected = if f.is_odd() { 1i128 << f.components } else { 0 };
            assert_eq!(exact.abs(), expected);
            seen += 1;
        }
    }
    assert!(seen > 50);
}

#[test]
fn forests_are_sorted_and_saturated() {
    let g = build_bouquet(&BouquetShape::new(vec![3, 3, 5]).unwrap());
    let forests = enumerate_saturated_forests(&g).unwrap();
    assert!(forests.windows(2).all(|w| w[0].edges < w[1].edges));
    for f in &forests {
        assert_eq!(f.edges.len(), g.vertex_count());
        let s = g.components_of(&f.edges).unwrap();
        assert!(s.is_saturated());
        assert_eq!(s.count(), f.components);
    }
}

#[test]
fn guard_is_reported() {
    let mut edges = vec![(0, 1), (1, 2), (2, 3)];
    edges.extend(std::iter::repeat_n((0, 0), 200));
    let g = MetricGraph::from_indices(4, &edges).unwrap();
    match enumerate_saturated_forests(&g) {
        Err(Error::EnumerationGuard { subsets, limit }) => {
            assert!(subsets > limit);
            assert_eq!(limit, ENUMERATION_LIMIT);
        }
        other => panic!("expected guard, got {other:?}"),
    }
}

fn scaled_error(qg: &QuantumGraph, k: u32, d: f64) -> f64 {
    let lambda = cluster_center(k) + d;
    let det = assemble_scaled(qg, lambda).unwrap().determinant();
    let power = (qg.graph().excess() + 1) as f64 / 2.0;
    (det - forest_expansion(qg, lambda).unwrap()).abs() * lambda.powf(power)
}

#[test]
fn expansion_remainder_shrinks() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [
        vec![1, 1],
        vec![1, 3],
        vec![3, 5],
        vec![1, 1, 1],
        vec![3, 3, 5],
    ] {
        let g = build_bouquet(&BouquetShape::new(n.clone()).unwrap());
        let pots = (0..g.edge_count())
            .map(|_| {
                let cut = rng.gen_range(0.2..0.8);
                EdgePotential::piecewise(
                    vec![0.0, cut, 1.0],
                    vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
                )
                .unwrap()
            })
            .collect();
        let qg = QuantumGraph::new(g, pots).unwrap();
        for d in [-1.0, 0.5] {
            let (e10, e100) = (scaled_error(&qg, 10, d), scaled_error(&qg, 100, d));
            assert!(e100 < e10, "{n:?} d={d}: e_10={e10} e_100={e100}");
        }
    }
}
