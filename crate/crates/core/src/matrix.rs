//! The characteristic matrix of the vertex conditions.
//!
//! Unknowns are one coefficient `A_v` per vertex and one coefficient per edge,
//! with `y_j = A_v c_j + B̃_j s_j` on an edge leaving `v`. Rows are the `|V|`
//! Kirchhoff conditions followed by the `|E|` continuity conditions at edge heads.
//!
//! Three rescalings of the same system are available:
//!
//! * [`MatrixForm::Regular`]: entries are `c, c', s, s'` and `±1`, entire in λ.
//! * [`MatrixForm::Scaled`]: Kirchhoff rows divided by `√λ` and edge unknowns
//!   `B_j = B̃_j/√λ`, so the vertex block holds `c'/√λ` and the edge diagonal
//!   `√λ s`. Only defined for `λ > 0`.
//! * [`MatrixForm::Balanced`]: the scaled form with `√λ` replaced by
//!   `max(1, √|λ|)`; defined for every real λ and well conditioned near the
//!   odd clusters, which makes it the one used for rank decisions.
//!
//! All three share zeros and nullities since they differ by nonsingular
//! diagonal factors.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::input::QuantumGraph;
use crate::transfer::{propagate, TransferData};

/// Default relative singular-value threshold for rank decisions.
pub const DEFAULT_NULL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixForm {
    Regular,
    Scaled,
    Balanced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicMatrix {
    form: MatrixForm,
    lambda: f64,
    vertex_count: usize,
    edge_count: usize,
    /// Factor applied to Kirchhoff rows relative to the regular form.
    row_scale: f64,
    /// Factor applied to edge columns relative to the regular form.
    col_scale: f64,
    data: DMatrix<f64>,
}

/// Coefficients of a solution in the unknowns of the matrix it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub vertex: Vec<f64>,
    pub edge: Vec<f64>,
}

impl CoefficientVector {
    fn from_slice(v: &[f64], vertex_count: usize) -> Self {
        Self {
            vertex: v[..vertex_count].to_vec(),
            edge: v[vertex_count..].to_vec(),
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.vertex.iter().chain(&self.edge).copied().collect()
    }

    pub fn norm(&self) -> f64 {
        self.to_vec().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullSpace {
    pub dimension: usize,
    pub basis: Vec<CoefficientVector>,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
}

pub fn edge_transfers(qg: &QuantumGraph, lambda: f64) -> Vec<TransferData> {
    qg.potentials()
        .iter()
        .map(|q| propagate(q, lambda))
        .collect()
}

fn assemble(
    graph: &MetricGraph,
    transfers: &[TransferData],
    lambda: f64,
    form: MatrixForm,
    row_scale: f64,
    col_scale: f64,
) -> CharacteristicMatrix {
    let nv = graph.vertex_count();
    let ne = graph.edge_count();
    let mut m = DMatrix::zeros(nv + ne, nv + ne);
    for (j, (e, t)) in graph.edges().iter().zip(transfers).enumerate() {
        let col = nv + j;
        // Kirchhoff at the head (incoming end) and at the tail (outgoing end)
        m[(e.head, e.tail)] += row_scale * t.c1p;
        m[(e.head, col)] += row_scale * col_scale * t.s1p;
        m[(e.tail, col)] -= row_scale * col_scale;
        // continuity at the head
        m[(col, e.tail)] += t.c1;
        m[(col, e.head)] -= 1.0;
        m[(col, col)] = col_scale * t.s1;
    }
    CharacteristicMatrix {
        form,
        lambda,
        vertex_count: nv,
        edge_count: ne,
        row_scale,
        col_scale,
        data: m,
    }
}

/// Regular form `M̂`, valid for every real λ.
pub fn assemble_regular(qg: &QuantumGraph, lambda: f64) -> CharacteristicMatrix {
    let t = edge_transfers(qg, lambda);
    assemble(qg.graph(), &t, lambda, MatrixForm::Regular, 1.0, 1.0)
}

/// Scaled form `M` with blocks `c'/√λ`, `s'`/`−1`, `c`/`−1`, `√λ s`; needs `λ > 0`.
pub fn assemble_scaled(qg: &QuantumGraph, lambda: f64) -> Result<CharacteristicMatrix> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let t = edge_transfers(qg, lambda);
    Ok(assemble_scaled_from(qg.graph(), &t, lambda))
}

pub(crate) fn assemble_scaled_from(
    graph: &MetricGraph,
    transfers: &[TransferData],
    lambda: f64,
) -> CharacteristicMatrix {
    let root = lambda.sqrt();
    assemble(
        graph,
        transfers,
        lambda,
        MatrixForm::Scaled,
        1.0 / root,
        root,
    )
}

/// Balanced form with `ω = max(1, √|λ|)` in place of `√λ`.
pub fn assemble_balanced(qg: &QuantumGraph, lambda: f64) -> CharacteristicMatrix {
    let t = edge_transfers(qg, lambda);
    let w = lambda.abs().sqrt().max(1.0);
    assemble(qg.graph(), &t, lambda, MatrixForm::Balanced, 1.0 / w, w)
}

/// Vertex matrix `Λ(λ)` sending vertex values `f` to the sums of outgoing
/// derivatives of the solution that equals `f` at the vertices. `None` when
/// some `s_e(1, λ) = 0`, where `Λ` has a pole.
pub fn dirichlet_to_neumann(qg: &QuantumGraph, lambda: f64) -> Option<DMatrix<f64>> {
    let g = qg.graph();
    let n = g.vertex_count();
    let mut m = DMatrix::zeros(n, n);
    for (e, t) in g.edges().iter().zip(edge_transfers(qg, lambda)) {
        if t.s1 == 0.0 {
            return None;
        }
        let inv = 1.0 / t.s1;
        m[(e.tail, e.tail)] -= t.c1 * inv;
        m[(e.head, e.head)] -= t.s1p * inv;
        m[(e.tail, e.head)] += inv;
        m[(e.head, e.tail)] += inv;
    }
    Some(m)
}

impl CharacteristicMatrix {
    pub fn form(&self) -> MatrixForm {
        self.form
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn size(&self) -> usize {
        self.vertex_count + self.edge_count
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[(row, col)]
    }

    /// Continuity-row / vertex-column block (`|E| × |V|`).
    pub fn continuity_vertex_block(&self) -> DMatrix<f64> {
        self.data
            .view((self.vertex_count, 0), (self.edge_count, self.vertex_count))
            .into_owned()
    }

    /// Kirchhoff-row / edge-column block (`|V| × |E|`).
    pub fn kirchhoff_edge_block(&self) -> DMatrix<f64> {
        self.data
            .view((0, self.vertex_count), (self.vertex_count, self.edge_count))
            .into_owned()
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> f64 {
        if self.size() == 0 {
            return 1.0;
        }
        self.data.clone().lu().determinant()
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .data
            .clone()
            .singular_values()
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Smallest singular value divided by `max(1, σ_max)`.
    pub fn relative_sigma_min(&self) -> f64 {
        let sv = self.singular_values();
        match (sv.first(), sv.last()) {
            (Some(&hi), Some(&lo)) => lo / hi.max(1.0),
            _ => 0.0,
        }
    }

    /// Right singular vectors whose singular value is below `tol·max(1, σ_max)`.
    /// The floor of 1 keeps a matrix whose entries all cancel (a flower at
    /// `λ = (2kπ)²`) from looking full rank. Each basis vector has unit norm
    /// and its first component of magnitude above `1e-12` is positive.
    pub fn nullspace(&self, tol: f64) -> NullSpace {
        let n = self.size();
        let svd = self.data.clone().svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
        let top = singular_values.first().copied().unwrap_or(0.0).max(1.0);
        let mut basis = Vec::new();
        for (&i, &s) in order.iter().zip(&singular_values) {
            if s < tol * top {
                let mut v: Vec<f64> = v_t.row(i).iter().copied().collect();
                if let Some(&first) = v.iter().find(|x| x.abs() > 1e-12) {
                    if first < 0.0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                }
                basis.push(CoefficientVector::from_slice(&v, self.vertex_count));
            }
        }
        basis.reverse();
        NullSpace {
            dimension: basis.len(),
            basis,
            singular_values,
        }
    }

    /// Convert coefficients in this matrix's unknowns into regular-form unknowns `(A_v, B̃_j)`.
    pub fn to_regular(&self, v: &CoefficientVector) -> CoefficientVector {
        CoefficientVector {
            vertex: v.vertex.clone(),
            edge: v.edge.iter().map(|b| b * self.col_scale).collect(),
        }
    }

    /// `M·x` split into Kirchhoff residuals and continuity residuals.
    pub fn residuals(&self, v: &CoefficientVector) -> (Vec<f64>, Vec<f64>) {
        let x = DVector::from_vec(v.to_vec());
        let r = &self.data * x;
        (
            r.rows(0, self.vertex_count).iter().copied().collect(),
            r.rows(self.vertex_count, self.edge_count)
                .iter()
                .copied()
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_bouquet, BouquetShape};
    use std::f64::consts::PI;

    fn fig8() -> QuantumGraph {
        QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1, 1]).unwrap()))
    }

    fn assert_matrix(m: &CharacteristicMatrix, expected: &[&[f64]], tol: f64) {
        for (i, row) in expected.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert!(
                    (m.get(i, j) - x).abs() <= tol,
                    "({i},{j}) {} vs {x}",
                    m.get(i, j)
                );
            }
        }
    }

    #[test]
    fn figure_eight_at_pi_squared() {
        let expected: &[&[f64]] = &[&[0.0, -2.0, -2.0], &[-2.0, 0.0, 0.0], &[-2.0, 0.0, 0.0]];
        let reg = assemble_regular(&fig8(), PI * PI);
        assert_matrix(&reg, expected, 1e-14);
        let sc = assemble_scaled(&fig8(), PI * PI).unwrap();
        assert_matrix(&sc, expected, 1e-14);
        assert!(reg.determinant().abs() < 1e-12);
    }

    #[test]
    fn single_loop_at_pi_squared() {
        let g = QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1]).unwrap()));
        let m = assemble_regular(&g, PI * PI);
        assert_matrix(&m, &[&[0.0, -2.0], &[-2.0, 0.0]], 1e-14);
        assert!((m.determinant() + 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_loop_negative_lambda_determinant() {
        let g = QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1]).unwrap()));
        let det = assemble_regular(&g, -1.0).determinant();
        // c'·s − (s'−1)(c−1) with c = s' = cosh 1, c' = sinh 1, s = sinh 1
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let closed = sh * sh - (ch - 1.0) * (ch - 1.0);
        assert!((det - closed).abs() < 1e-13);
        assert!(det.abs() > 0.1);
    }

    #[test]
    fn scaled_rejects_nonpositive_lambda() {
        let err = assemble_scaled(&fig8(), -1.0).unwrap_err();
        assert!(err.to_string().contains("positive lambda required"));
        assert!(assemble_scaled(&fig8(), 0.0).is_err());
    }

    #[test]
    fn figure_eight_nullspace() {
        let ns = assemble_regular(&fig8(), PI * PI).nullspace(DEFAULT_NULL_TOL);
        assert_eq!(ns.dimension, 1);
        let v = &ns.basis[0];
        let h = 1.0 / 2f64.sqrt();
        assert!(v.vertex[0].abs() < 1e-14);
        assert!((v.edge[0] - h).abs() < 1e-14 && (v.edge[1] + h).abs() < 1e-14);

        assert_eq!(
            assemble_regular(&fig8(), 2.0)
                .nullspace(DEFAULT_NULL_TOL)
                .dimension,
            0
        );
    }

    #[test]
    fn bouquet_nullity_at_odd_cluster() {
        let g = QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1, 3]).unwrap()));
        let ns = assemble_regular(&g, 9.0 * PI * PI).nullspace(DEFAULT_NULL_TOL);
        assert_eq!(ns.dimension, 1);
    }

    #[test]
    fn constant_solution_at_zero() {
        for n in [vec![1, 1], vec![1, 3], vec![3, 3, 5]] {
            let g = QuantumGraph::zero(build_bouquet(&BouquetShape::new(n).unwrap()));
            let m = assemble_regular(&g, 0.0);
            let v = CoefficientVector {
                vertex: vec![1.0; m.vertex_count()],
                edge: vec![0.0; m.edge_count()],
            };
            let (k, c) = m.residuals(&v);
            assert!(k.iter().chain(&c).all(|r| r.abs() < 1e-15));
            assert_eq!(m.nullspace(DEFAULT_NULL_TOL).dimension, 1);
        }
    }

    #[test]
    fn balanced_and_regular_share_nullity() {
        let g = QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1, 1]).unwrap()));
        let lam = 4.0 * PI * PI;
        let b = assemble_balanced(&g, lam).nullspace(DEFAULT_NULL_TOL);
        let r = assemble_regular(&g, lam).nullspace(DEFAULT_NULL_TOL);
        assert_eq!(b.dimension, 3);
        assert_eq!(r.dimension, 3);
    }

    #[test]
    fn block_sparsity() {
        let g = QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![3, 3, 5]).unwrap()));
        let m = assemble_regular(&g, 7.3);
        let nv = m.vertex_count();
        let adj = g.graph().adjacency_counts();
        for (v, row) in adj.iter().enumerate().take(nv) {
            for (u, &count) in row.iter().enumerate().take(nv) {
                let runs = g.graph().edges().iter().any(|e| e.tail == u && e.head == v);
                if !runs {
                    assert_eq!(m.get(v, u), 0.0);
                }
                if m.get(v, u) != 0.0 {
                    assert!(count > 0);
                }
            }
        }
        for i in 0..m.edge_count() {
            for j in 0..m.edge_count() {
                if i != j {
                    assert_eq!(m.get(nv + i, nv + j), 0.0);
                }
            }
        }
    }
}
