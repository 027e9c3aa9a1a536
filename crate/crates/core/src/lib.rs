//! Schrödinger operators `-y'' + q y = λ y` on equilateral metric graphs with
//! continuity and Kirchhoff conditions at the vertices.
//!
//! The crate covers the pieces needed to study the spectral determinant of
//! such graphs near the odd clusters `λ ≈ (2k+1)²π²`:
//!
//! * [`graph`]: graphs, bouquets of cycles, incidence matrices, subgraph components
//! * [`transfer`]: exact fundamental solutions for piecewise-constant potentials
//! * [`matrix`]: the characteristic matrix, its determinant and nullspace
//! * [`forest`]: saturated forests, incidence determinants, forest expansion, shift polynomial
//! * [`spectrum`]: eigenvalue scans, multiplicities and cluster shifts
//! * [`cli`]: the `qgraph` command line front end
//!
//! ```
//! use quantum_graph::{build_bouquet, BouquetShape, QuantumGraph, ScanOptions, scan_spectrum};
//!
//! let fig8 = QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1, 1]).unwrap()));
//! let report = scan_spectrum(&fig8, -1.0, 12.0, &ScanOptions::default()).unwrap();
//! assert_eq!(report.eigenvalues.len(), 2); // 0 and π²
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod forest;
pub mod graph;
pub mod input;
pub mod matrix;
pub mod spectrum;
pub mod transfer;

pub use error::{Error, Result};
pub use forest::{
    bouquet_expansion, detect_shift_polynomial, enumerate_odd_saturated_forests,
    enumerate_saturated_forests, exact_incidence_determinant, forest_expansion, monomial_analysis,
    shift_polynomial, MonomialAnalysis, SaturatedForest, ShiftPolynomial,
};
pub use graph::{
    build_bouquet, BouquetShape, ComponentSummary, IntegerMatrix, MetricGraph, Parity,
};
pub use input::{build_graph, load_graph, GraphSpec, QuantumGraph};
pub use matrix::{
    assemble_balanced, assemble_regular, assemble_scaled, dirichlet_to_neumann,
    CharacteristicMatrix, CoefficientVector, MatrixForm, NullSpace,
};
pub use spectrum::{
    cluster_analysis, cluster_half_width, eigenvalue_count, refine_eigenvalue, scan_clusters,
    scan_spectrum, smallest_eigenvalue, ClusterRecord, ScanOptions, SpectrumReport,
};
pub use transfer::{
    asymptotic_predictions, asymptotic_residuals, dirichlet_count, propagate, transfer_zero_oracle,
    EdgePotential, TransferData, TransferPrediction,
};
