// Saturated forests of a graph, their exact incidence determinants, and the
// forest expansion of the determinant near the odd clusters.
//
//     cargo run --example saturated_forests

use quantum_graph::transfer::cluster_center;
use quantum_graph::{
    assemble_scaled, bouquet_expansion, enumerate_saturated_forests, exact_incidence_determinant,
    forest_expansion, BouquetShape, MetricGraph, QuantumGraph,
};

fn main() -> quantum_graph::Result<()> {
    // two triangles sharing vertex 0, plus a chord that closes a 4-cycle
    let g =
        MetricGraph::from_indices(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (1, 3)])?;
    println!(
        "edges: {:?}",
        g.edges()
            .iter()
            .map(|e| (e.tail, e.head))
            .collect::<Vec<_>>()
    );
    for f in enumerate_saturated_forests(&g)? {
        println!(
            "  {:?}  κ = {}  {:?}  det = {}",
            f.edges,
            f.components,
            f.parities,
            exact_incidence_determinant(&g, &f)
        );
    }

    let shape = BouquetShape::new(vec![1, 3])?;
    let qg = QuantumGraph::bouquet_constant(&shape, &[1.0, -2.0])?;
    let power = (qg.graph().excess() + 1) as f64 / 2.0;
    println!("\nbouquet (1,3), q = (1, −2), d = 1");
    println!("    k        det M            forest expansion   bouquet formula    scaled error");
    for k in [10, 30, 100, 300] {
        let lambda = cluster_center(k) + 1.0;
        let det = assemble_scaled(&qg, lambda)?.determinant();
        let approx = forest_expansion(&qg, lambda)?;
        let bouquet = bouquet_expansion(&shape, &qg, lambda)?;
        println!(
            "{k:5} {det:+.10e} {approx:+.10e} {bouquet:+.10e} {:.4e}",
            (det - approx).abs() * lambda.powf(power)
        );
    }
    Ok(())
}
