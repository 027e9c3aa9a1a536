#![allow(dead_code)]

use proptest::prelude::*;
use quantum_graph::{build_bouquet, BouquetShape, EdgePotential, MetricGraph, QuantumGraph};

pub fn bouquet(n: &[usize]) -> QuantumGraph {
    QuantumGraph::zero(build_bouquet(&BouquetShape::new(n.to_vec()).unwrap()))
}

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn potential() -> impl Strategy<Value = EdgePotential> {
    (
        proptest::collection::vec(0.05f64..0.95, 0..3),
        proptest::collection::vec(-10.0f64..10.0, 3),
    )
        .prop_map(|(mut cuts, vals)| {
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            let mut bp = vec![0.0];
            bp.extend(cuts);
            bp.push(1.0);
            let values = vals[..bp.len() - 1].to_vec();
            EdgePotential::piecewise(bp, values).unwrap()
        })
}

/// Connected multigraph: a random tree on `n` vertices plus `extra` arbitrary edges.
pub fn graph(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = MetricGraph> {
    (1..=max_vertices, 0..=max_extra).prop_flat_map(|(n, extra)| {
        let tree = (1..n)
            .map(|v| (0..v).prop_map(move |u| (u, v)))
            .collect::<Vec<_>>();
        let more = proptest::collection::vec((0..n, 0..n), extra);
        (tree, more).prop_map(move |(tree, more)| {
            let edges: Vec<(usize, usize)> = tree.into_iter().chain(more).collect();
            MetricGraph::from_indices(n, &edges).unwrap()
        })
    })
}

pub fn bouquet_shape(max_cycles: usize, max_len: usize) -> impl Strategy<Value = BouquetShape> {
    proptest::collection::vec(1..=max_len, 2..=max_cycles)
        .prop_map(|n| BouquetShape::new(n).unwrap())
}

pub fn odd_bouquet_shape(max_cycles: usize, max_len: usize) -> impl Strategy<Value = BouquetShape> {
    proptest::collection::vec(
        (0..=(max_len - 1) / 2).prop_map(|h| 2 * h + 1),
        2..=max_cycles,
    )
    .prop_map(|n| BouquetShape::new(n).unwrap())
}
