// Eigenvalues with multiplicities, the exact counting function, and the
// clusters near (2k+1)²π² compared with the roots of the shift polynomial.
//
//     cargo run --release --example spectrum_scan

use quantum_graph::{
    eigenvalue_count, scan_clusters, scan_spectrum, shift_polynomial, BouquetShape, QuantumGraph,
    ScanOptions,
};

fn main() -> quantum_graph::Result<()> {
    let opts = ScanOptions::default();
    let fig8 = QuantumGraph::bouquet_constant(&BouquetShape::new(vec![1, 1])?, &[0.0, 0.0])?;
    let report = scan_spectrum(&fig8, -1.0, 50.0, &opts)?;
    println!(
        "figure-8, q = 0, λ ∈ [−1, 50] ({} grid points)",
        report.grid_points
    );
    for e in &report.eigenvalues {
        println!("  λ = {:.12}  multiplicity {}", e.lambda, e.multiplicity);
    }
    println!("  eigenvalues below 50: {}", eigenvalue_count(&fig8, 50.0));

    let shape = BouquetShape::new(vec![1, 1, 1])?;
    let flower = QuantumGraph::bouquet_constant(&shape, &[1.0, -1.0, 0.0])?;
    let p = shift_polynomial(&shape, &flower)?;
    let roots = p.real_roots();
    println!(
        "\nthree-petal flower, q = (1, −1, 0): p(d) coefficients {:?}, roots {roots:.6?}",
        p.coefficients
    );
    for c in scan_clusters(&flower, &[1, 5, 20, 50], &opts)? {
        let shifts = c.shifts();
        let gap = shifts
            .iter()
            .zip(&roots)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "  k = {:2}: multiplicity {}, shifts {shifts:.6?}, distance to roots {gap:.2e}",
            c.k, c.total_multiplicity
        );
    }
    Ok(())
}
