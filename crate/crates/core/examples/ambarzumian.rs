// The two spectral conditions that single out the zero potential on a
// bouquet of odd cycles: smallest eigenvalue 0, and cluster shifts that
// vanish. Each potential below fails at most one of them.
//
//     cargo run --release --example ambarzumian

use quantum_graph::{
    monomial_analysis, scan_clusters, shift_polynomial, smallest_eigenvalue, BouquetShape,
    QuantumGraph, ScanOptions,
};

fn main() -> quantum_graph::Result<()> {
    let opts = ScanOptions::default();
    let shape = BouquetShape::new(vec![1, 1])?;
    for q in [[0.0, 0.0], [1.0, -1.0], [1.0, 0.0], [0.5, 0.5]] {
        let qg = QuantumGraph::bouquet_constant(&shape, &q)?;
        let analysis = monomial_analysis(&shift_polynomial(&shape, &qg)?, 1e-9);
        let lmin = smallest_eigenvalue(&qg, &opts)?;
        let cluster = scan_clusters(&qg, &[50], &opts)?.remove(0);
        println!(
            "q = {q:?}: p monomial = {:5}, ∫q = {:+.3}, λ_min = {lmin:+.6}, cluster 50 shifts {:.4?}",
            analysis.is_monomial,
            analysis.total_integral,
            cluster.shifts()
        );
    }
    Ok(())
}
