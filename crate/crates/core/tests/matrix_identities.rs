mod common;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use quantum_graph::transfer::cluster_center;
use quantum_graph::{
    assemble_balanced, assemble_regular, assemble_scaled, build_bouquet, propagate, BouquetShape,
    EdgePotential, MetricGraph, QuantumGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Determinant of a flower of `r` loops written out from the endpoint data.
fn flower_closed_form(pots: &[EdgePotential], lambda: f64) -> f64 {
    let t: Vec<_> = pots.iter().map(|q| propagate(q, lambda)).collect();
    let r = t.len();
    let prod_s: f64 = t.iter().map(|x| x.s1).product();
    let first: f64 = t.iter().map(|x| x.c1p).sum::<f64>() * prod_s;
    let second: f64 = (0..r)
        .map(|k| {
            let others: f64 = (0..r).filter(|&j| j != k).map(|j| t[j].s1).product();
            (t[k].s1p - 1.0) * (t[k].c1 - 1.0) * others
        })
        .sum();
    lambda.powf((r as f64 - 1.0) / 2.0) * (first - second)
}

fn flower(pots: Vec<EdgePotential>) -> QuantumGraph {
    let g = build_bouquet(&BouquetShape::new(vec![1; pots.len()]).unwrap());
    QuantumGraph::new(g, pots).unwrap()
}

proptest! {
    #[test]
    fn flower_determinant_matches_closed_form(
        pots in proptest::collection::vec(common::potential(), 1..5),
        log_lambda in (0.1f64).ln()..(4000.0f64).ln(),
    ) {
        let lambda = log_lambda.exp();
        let expected = flower_closed_form(&pots, lambda);
        let det = assemble_scaled(&flower(pots), lambda).unwrap().determinant();
        prop_assert!((det - expected).abs() <= 1e-10 * expected.abs(), "{det} vs {expected}");
    }

    #[test]
    fn scaling_identity_on_random_graphs(
        g in common::graph(6, 4),
        pots in proptest::collection::vec(common::potential(), 10),
        lambda in 0.1f64..4000.0,
    ) {
        let ne = g.edge_count();
        let qg = QuantumGraph::new(g, pots[..ne].to_vec()).unwrap();
        let power = qg.graph().excess() as f64 / 2.0;
        let det_m = assemble_scaled(&qg, lambda).unwrap().determinant();
        let det_r = assemble_regular(&qg, lambda).determinant();
        prop_assert!((det_m - lambda.powf(power) * det_r).abs() <= 1e-9 * det_m.abs().max(1.0));
    }

    #[test]
    fn block_sparsity(g in common::graph(6, 4), lambda in -50.0f64..500.0) {
        let m = assemble_regular(&QuantumGraph::zero(g.clone()), lambda);
        let (nv, ne) = (g.vertex_count(), g.edge_count());
        let mut linked = vec![vec![false; nv]; nv];
        for e in g.edges() {
            linked[e.head][e.tail] = true;
        }
        for (v, row) in linked.iter().enumerate() {
            for (u, &l) in row.iter().enumerate() {
                if !l {
                    prop_assert_eq!(m.get(v, u), 0.0);
                }
            }
        }
        for i in 0..ne {
            for j in 0..ne {
                if i != j {
                    prop_assert_eq!(m.get(nv + i, nv + j), 0.0);
                }
            }
        }
    }
}

#[test]
fn flower_closed_form_at_fixed_points() {
    let pots = vec![
        EdgePotential::constant(1.0),
        EdgePotential::zero(),
        EdgePotential::constant(-0.5),
    ];
    for lambda in [0.3, 2.0, 17.0, PI * PI + 0.1, 1234.5] {
        let expected = flower_closed_form(&pots, lambda);
        let det = assemble_scaled(&flower(pots.clone()), lambda)
            .unwrap()
            .determinant();
        assert!(
            (det - expected).abs() <= 1e-10 * expected.abs(),
            "λ={lambda}: {det} vs {expected}"
        );
    }
}

#[test]
fn order_bound_along_clusters() {
    let d = 0.7;
    let cases = [
        QuantumGraph::bouquet_constant(&BouquetShape::new(vec![1, 1]).unwrap(), &[1.0, 0.0])
            .unwrap(),
        QuantumGraph::bouquet_constant(&BouquetShape::new(vec![1, 3]).unwrap(), &[1.0, -2.0])
            .unwrap(),
        QuantumGraph::bouquet_constant(
            &BouquetShape::new(vec![3, 3, 5]).unwrap(),
            &[0.5, 0.0, -1.0],
        )
        .unwrap(),
    ];
    for qg in cases {
        let power = qg.graph().excess() as f64 / 2.0;
        let values: Vec<f64> = (1..=60)
            .map(|k| {
                let lambda = cluster_center(k) + d;
                assemble_scaled(&qg, lambda).unwrap().determinant().abs() * lambda.powf(power)
            })
            .collect();
        let head = values[..10].iter().copied().fold(0.0, f64::max);
        let all = values.iter().copied().fold(0.0, f64::max);
        assert!(all <= 2.0 * head, "max {all} vs first ten {head}");
    }
}

/// All `|V|`-row subsets of the continuity/vertex block at `λ_k` against `±2^κ` or 0.
fn check_minors(qg: &QuantumGraph, k: u32) -> usize {
    let g = qg.graph();
    let lambda = cluster_center(k);
    let c = assemble_regular(qg, lambda).continuity_vertex_block();
    let (nv, ne) = (g.vertex_count(), g.edge_count());
    let tol = 5.0 / lambda.sqrt();
    let mut checked = 0;
    for mask in 0u32..(1 << ne) {
        if mask.count_ones() as usize != nv {
            continue;
        }
        let rows: Vec<usize> = (0..ne).filter(|j| mask >> j & 1 == 1).collect();
        let det = DMatrix::from_fn(nv, nv, |i, j| c[(rows[i], j)]).determinant();
        let s = g.components_of(&rows).unwrap();
        let expected = if s.is_odd_saturated() {
            2f64.powi(s.count() as i32)
        } else {
            0.0
        };
        assert!(
            (det.abs() - expected).abs() <= tol,
            "rows {rows:?}: |det| = {} expected {expected}",
            det.abs()
        );
        checked += 1;
    }
    checked
}

fn small_graphs() -> Vec<MetricGraph> {
    let mut graphs = vec![
        MetricGraph::from_indices(1, &[(0, 0), (0, 0)]).unwrap(),
        MetricGraph::from_indices(3, &[(0, 0), (0, 1), (1, 2), (2, 0)]).unwrap(),
        MetricGraph::from_indices(1, &[(0, 0), (0, 0), (0, 0)]).unwrap(),
        MetricGraph::from_indices(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
        MetricGraph::from_indices(2, &[(0, 1), (0, 1), (0, 1)]).unwrap(),
        MetricGraph::from_indices(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap(),
        MetricGraph::from_indices(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap(),
        MetricGraph::from_indices(4, &[(0, 0), (0, 1), (1, 2), (2, 3), (3, 3)]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    while graphs.len() < 40 {
        let n = rng.gen_range(1..=5);
        let extra = rng.gen_range(1..=7 - n);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        for _ in 0..extra {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
        graphs.push(MetricGraph::from_indices(n, &edges).unwrap());
    }
    graphs
}

#[test]
fn continuity_block_minors_on_small_graphs() {
    let mut total = 0;
    for g in small_graphs() {
        assert!(g.edge_count() <= 6);
        total += check_minors(&QuantumGraph::zero(g), 30);
    }
    assert!(total > 100);
}

#[test]
fn continuity_block_minors_with_potential() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for g in small_graphs() {
        let pots = (0..g.edge_count())
            .map(|_| EdgePotential::constant(rng.gen_range(-3.0..3.0)))
            .collect();
        check_minors(&QuantumGraph::new(g, pots).unwrap(), 30);
    }
}

#[test]
fn nullspace_vectors_solve_the_system() {
    let qg = common::bouquet(&[3, 3, 5]);
    for k in [0, 3] {
        let m = assemble_balanced(&qg, cluster_center(k));
        let ns = m.nullspace(1e-7);
        assert_eq!(ns.dimension, 2);
        for v in &ns.basis {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            let regular = assemble_regular(&qg, cluster_center(k));
            let (kirchhoff, continuity) = regular.residuals(&m.to_regular(v));
            let worst = kirchhoff
                .iter()
                .chain(&continuity)
                .fold(0.0f64, |a, x| a.max(x.abs()));
            assert!(worst < 1e-9 * cluster_center(k).sqrt(), "residual {worst}");
        }
    }
}
