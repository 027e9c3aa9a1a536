// The characteristic matrix in its regular and scaled forms: determinants,
// the rescaling identity between them, and nullspaces at eigenvalues.
//
//     cargo run --example characteristic_matrix

use std::f64::consts::PI;

use quantum_graph::{assemble_regular, assemble_scaled, build_bouquet, BouquetShape, QuantumGraph};

fn main() -> quantum_graph::Result<()> {
    let fig8 = QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1, 1])?));

    let m = assemble_regular(&fig8, PI * PI);
    println!("figure-8, λ = π², regular form:\n{:.3}", m.matrix());
    println!("det = {:.3e}", m.determinant());
    let ns = m.nullspace(1e-7);
    println!(
        "nullity {} with basis {:?}",
        ns.dimension,
        ns.basis[0].to_vec()
    );

    let at_two = assemble_regular(&fig8, 2.0).nullspace(1e-7);
    println!(
        "λ = 2: nullity {} (smallest singular value {:.3e})",
        at_two.dimension,
        at_two.singular_values.last().unwrap()
    );

    let qg = QuantumGraph::bouquet_constant(&BouquetShape::new(vec![1, 3])?, &[1.0, -2.0])?;
    let power = qg.graph().excess() as f64 / 2.0;
    println!("\nbouquet (1,3) with q = (1, −2): det M vs λ^((|E|−|V|)/2)·det M̂");
    for lambda in [0.5, 7.0, 90.0, 1500.0] {
        let scaled = assemble_scaled(&qg, lambda)?.determinant();
        let regular = assemble_regular(&qg, lambda).determinant();
        println!(
            "  λ = {lambda:7.1}: {scaled:+.12e}  {:+.12e}",
            lambda.powf(power) * regular
        );
    }

    let nine = assemble_regular(
        &QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1, 3])?)),
        9.0 * PI * PI,
    );
    let ns = nine.nullspace(1e-7);
    let (kirchhoff, continuity) = nine.residuals(&ns.basis[0]);
    println!(
        "\nbouquet (1,3), q = 0, λ = 9π²: nullity {}, residuals {:.1e} / {:.1e}",
        ns.dimension,
        kirchhoff.iter().fold(0.0f64, |a, x| a.max(x.abs())),
        continuity.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    );
    Ok(())
}
