//! Saturated forests, incidence determinants and the leading-order expansion
//! of the characteristic determinant near `λ = (2k+1)²π²`.

use crate::error::{Error, Result};
use crate::graph::{BouquetShape, MetricGraph, Parity};
use crate::input::QuantumGraph;
use crate::matrix::edge_transfers;

/// Largest number of candidate edge subsets the enumerator will visit.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Spanning subgraph with `|V|` edges in which every component is unicyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatedForest {
    /// Edge indices, ascending.
    pub edges: Vec<usize>,
    /// Number of components (= number of cycles).
    pub components: usize,
    /// Parity of the cycle of each component.
    pub parities: Vec<Parity>,
}

impl SaturatedForest {
    pub fn is_odd(&self) -> bool {
        self.parities.iter().all(|&p| p == Parity::Odd)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All saturated forests (odd and even), lexicographic in edge indices.
///
/// Visits the complements of size `|E| − |V|` rather than the `|V|`-subsets.
pub fn enumerate_saturated_forests(graph: &MetricGraph) -> Result<Vec<SaturatedForest>> {
    let nv = graph.vertex_count();
    let ne = graph.edge_count();
    if ne < nv {
        return Ok(Vec::new());
    }
    let drop = ne - nv;
    let subsets = binomial(ne, drop);
    if subsets > ENUMERATION_LIMIT {
        return Err(Error::EnumerationGuard {
            subsets,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut keep = Vec::with_capacity(nv);
    for_each_combination(ne, drop, |removed| {
        keep.clear();
        let mut r = removed.iter().peekable();
        for j in 0..ne {
            if r.peek() == Some(&&j) {
                r.next();
            } else {
                keep.push(j);
            }
        }
        let summary = graph.components_of(&keep).expect("indices are in range");
        if summary.is_saturated() {
            out.push(SaturatedForest {
                edges: keep.clone(),
                components: summary.count(),
                parities: summary
                    .components
                    .iter()
                    .map(|c| c.unique_cycle_parity().expect("unicyclic"))
                    .collect(),
            });
        }
    });
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    Ok(out)
}

pub fn enumerate_odd_saturated_forests(graph: &MetricGraph) -> Result<Vec<SaturatedForest>> {
    let mut all = enumerate_saturated_forests(graph)?;
    all.retain(SaturatedForest::is_odd);
    Ok(all)
}

/// Exact determinant of the `|V| × |V|` incidence submatrix on the forest's edges.
pub fn exact_incidence_determinant(graph: &MetricGraph, forest: &SaturatedForest) -> i128 {
    graph
        .incidence_matrix()
        .select_columns(&forest.edges)
        .determinant()
}

/// `(−1)^{|V|} Σ_τ 4^{κ(τ)} Π_{e∉τ} √λ s_e(1,λ)` over odd saturated forests τ.
pub fn forest_expansion(qg: &QuantumGraph, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let forests = enumerate_odd_saturated_forests(qg.graph())?;
    let root = lambda.sqrt();
    let scaled_s: Vec<f64> = edge_transfers(qg, lambda)
        .iter()
        .map(|t| root * t.s1)
        .collect();
    let ne = qg.graph().edge_count();
    let mut sum = 0.0;
    for f in &forests {
        let mut in_forest = vec![false; ne];
        f.edges.iter().for_each(|&j| in_forest[j] = true);
        let product: f64 = (0..ne)
            .filter(|&j| !in_forest[j])
            .map(|j| scaled_s[j])
            .product();
        sum += 4f64.powi(f.components as i32) * product;
    }
    let sign = if qg.graph().vertex_count().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Ok(sign * sum)
}

/// `−4 Σ_i Π_{j≠i} Σ_l √λ s_{jl}(1,λ)` for a bouquet built by
/// [`crate::graph::build_bouquet`]. Agrees with [`forest_expansion`] when
/// every cycle is odd.
pub fn bouquet_expansion(shape: &BouquetShape, qg: &QuantumGraph, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    if qg.graph().edge_count() != shape.edge_count() {
        return Err(Error::NotABouquet);
    }
    let root = lambda.sqrt();
    let t = edge_transfers(qg, lambda);
    let cycle_sums: Vec<f64> = shape
        .cycle_edge_ranges()
        .into_iter()
        .map(|r| r.map(|j| root * t[j].s1).sum())
        .collect();
    let total: f64 = (0..cycle_sums.len())
        .map(|i| {
            cycle_sums
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, s)| s)
                .product::<f64>()
        })
        .sum();
    Ok(-4.0 * total)
}

/// Polynomial in the cluster shift `d` whose roots are the limiting shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftPolynomial {
    /// Ascending: `coefficients[i]` multiplies `d^i`.
    pub coefficients: Vec<f64>,
    pub cycle_lengths: Vec<usize>,
    /// `Q_j = Σ_l ∫ q_{jl}` per cycle.
    pub cycle_integrals: Vec<f64>,
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl ShiftPolynomial {
    /// `p(d) = Σ_i Π_{j≠i} (n_j d − Q_j)`, expanded.
    pub fn from_parts(cycle_lengths: Vec<usize>, cycle_integrals: Vec<f64>) -> Self {
        let r = cycle_lengths.len();
        assert_eq!(r, cycle_integrals.len());
        let mut coefficients = vec![0.0; r.max(1)];
        for i in 0..r {
            let term = (0..r).filter(|&j| j != i).fold(vec![1.0], |acc, j| {
                poly_mul(&acc, &[-cycle_integrals[j], cycle_lengths[j] as f64])
            });
            for (c, t) in coefficients.iter_mut().zip(&term) {
                *c += t;
            }
        }
        Self {
            coefficients,
            cycle_lengths,
            cycle_integrals,
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coefficients.last().unwrap()
    }

    pub fn eval(&self, d: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * d + c)
    }

    /// `h_j = Q_j / n_j`.
    pub fn cycle_means(&self) -> Vec<f64> {
        self.cycle_integrals
            .iter()
            .zip(&self.cycle_lengths)
            .map(|(q, &n)| q / n as f64)
            .collect()
    }

    /// All `r − 1` roots, ascending, with multiplicity.
    ///
    /// `p(d) / Π_j (n_j d − Q_j) = Σ_i (1/n_i) / (d − h_i)`, so the roots are
    /// real: a root of multiplicity `m − 1` at each `h` shared by `m` cycles,
    /// and one simple root strictly between consecutive distinct `h` values.
    pub fn real_roots(&self) -> Vec<f64> {
        let mut pts: Vec<(f64, f64)> = self
            .cycle_means()
            .into_iter()
            .zip(self.cycle_lengths.iter().map(|&n| 1.0 / n as f64))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        // merge equal means, accumulating weights
        let mut groups: Vec<(f64, f64, usize)> = Vec::new();
        for (h, w) in pts {
            match groups.last_mut() {
                Some(g) if g.0 == h => {
                    g.1 += w;
                    g.2 += 1;
                }
                _ => groups.push((h, w, 1)),
            }
        }
        let mut roots = Vec::new();
        for (i, g) in groups.iter().enumerate() {
            roots.extend(std::iter::repeat_n(g.0, g.2 - 1));
            if let Some(next) = groups.get(i + 1) {
                roots.push(secular_root(&groups, g.0, next.0));
            }
        }
        roots.sort_by(f64::total_cmp);
        roots
    }
}

/// Root of `Σ w/(d − h)` on `(lo, hi)` by bisection; the function decreases from +∞ to −∞.
fn secular_root(groups: &[(f64, f64, usize)], lo: f64, hi: f64) -> f64 {
    let f = |d: f64| groups.iter().map(|&(h, w, _)| w / (d - h)).sum::<f64>();
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Build `p(d)` from a bouquet shape and the potentials of `build_bouquet(shape)`.
pub fn shift_polynomial(shape: &BouquetShape, qg: &QuantumGraph) -> Result<ShiftPolynomial> {
    if qg.graph().edge_count() != shape.edge_count() {
        return Err(Error::NotABouquet);
    }
    let integrals = shape
        .cycle_edge_ranges()
        .into_iter()
        .map(|r| r.map(|j| qg.potentials()[j].integral()).sum())
        .collect();
    Ok(ShiftPolynomial::from_parts(
        shape.cycle_lengths().to_vec(),
        integrals,
    ))
}

/// Shift polynomial for any graph that [`BouquetShape::detect`] recognises.
pub fn detect_shift_polynomial(qg: &QuantumGraph) -> Result<ShiftPolynomial> {
    let (shape, cycles) = BouquetShape::detect(qg.graph()).ok_or(Error::NotABouquet)?;
    let integrals = cycles
        .iter()
        .map(|c| c.iter().map(|&j| qg.potentials()[j].integral()).sum())
        .collect();
    Ok(ShiftPolynomial::from_parts(
        shape.cycle_lengths().to_vec(),
        integrals,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialAnalysis {
    /// `h_j = Q_j / n_j`, descending.
    pub means: Vec<f64>,
    pub is_monomial: bool,
    /// `Σ_j Q_j = ∫_G q`.
    pub total_integral: f64,
    /// Largest `|coefficient| / leading` among the non-leading coefficients.
    pub lower_order_ratio: f64,
}

/// Whether `p(d)` reduces to `c·d^{r−1}` within `tol` relative to the leading coefficient.
pub fn monomial_analysis(poly: &ShiftPolynomial, tol: f64) -> MonomialAnalysis {
    let lead = poly.leading().abs();
    let lower_order_ratio = poly.coefficients[..poly.degree()]
        .iter()
        .map(|c| c.abs() / lead)
        .fold(0.0, f64::max);
    let mut means = poly.cycle_means();
    means.sort_by(|a, b| b.total_cmp(a));
    MonomialAnalysis {
        means,
        is_monomial: lower_order_ratio <= tol,
        total_integral: poly.cycle_integrals.iter().sum(),
        lower_order_ratio,
    }
}
