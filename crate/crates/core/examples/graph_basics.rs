// Build graphs from JSON and from a bouquet shape, then inspect incidence
// matrices and the components of edge subsets.
//
//     cargo run --example graph_basics

use quantum_graph::{build_bouquet, build_graph, BouquetShape, GraphSpec, Parity};

const TRIANGLE_WITH_LOOP: &str = r#"{
    "vertices": ["a", "b", "c"],
    "edges": [
        {"id": "ab", "from": "a", "to": "b"},
        {"id": "bc", "from": "b", "to": "c"},
        {"id": "ca", "from": "c", "to": "a", "potential": {"breakpoints": [0, 0.5, 1], "values": [2, -1]}},
        {"id": "loop", "from": "a", "to": "a"}
    ]
}"#;

fn main() -> quantum_graph::Result<()> {
    let qg = build_graph(&GraphSpec::from_json(TRIANGLE_WITH_LOOP)?)?;
    let g = qg.graph();
    println!(
        "|V| = {}, |E| = {}, |E| - |V| = {}",
        g.vertex_count(),
        g.edge_count(),
        g.excess()
    );
    println!("degrees: {:?}", g.degrees());
    println!("total ∫q = {}", qg.total_integral());
    println!(
        "incidence matrix (loops count 2):\n{}",
        g.incidence_matrix()
    );

    for subset in [&["ab", "bc", "ca"][..], &["loop", "ab", "bc"], &["ab"]] {
        let s = g.subgraph_components(subset)?;
        let parities: Vec<Option<Parity>> = s
            .components
            .iter()
            .map(|c| c.unique_cycle_parity())
            .collect();
        println!(
            "{subset:?}: {} component(s), saturated = {}, odd = {}, parities {parities:?}",
            s.count(),
            s.is_saturated(),
            s.is_odd_saturated()
        );
    }

    let shape = BouquetShape::new(vec![3, 3, 5])?;
    let bouquet = build_bouquet(&shape);
    println!(
        "\nbouquet {:?}: |V| = {}, |E| = {}, odd forests expected = {}",
        shape.cycle_lengths(),
        bouquet.vertex_count(),
        bouquet.edge_count(),
        shape.forest_count()
    );
    for e in bouquet.edges().iter().take(4) {
        println!(
            "  {} : {} -> {}",
            e.id,
            bouquet.vertices()[e.tail],
            bouquet.vertices()[e.head]
        );
    }
    Ok(())
}
