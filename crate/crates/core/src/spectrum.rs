//! Real eigenvalues from minima of the smallest singular value of the
//! characteristic matrix, with multiplicities and odd-cluster bookkeeping.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::input::QuantumGraph;
use crate::matrix::{assemble_balanced, dirichlet_to_neumann, DEFAULT_NULL_TOL};
use crate::transfer::{cluster_center, dirichlet_count};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Grid spacing in `√|λ|`.
    pub sqrt_step: f64,
    /// Upper bound on the grid spacing in λ.
    pub max_lambda_step: f64,
    /// Golden-section stops once the bracket is below `refine_tol·max(1, |λ|)`.
    pub refine_tol: f64,
    /// Relative singular-value threshold for nullity (and for accepting a minimum).
    pub null_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            sqrt_step: 0.05,
            max_lambda_step: 0.25,
            refine_tol: 1e-13,
            null_tol: DEFAULT_NULL_TOL,
        }
    }
}

impl ScanOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sqrt_step", self.sqrt_step),
            ("max_lambda_step", self.max_lambda_step),
            ("refine_tol", self.refine_tol),
            ("null_tol", self.null_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidOption(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Grid spacing at `lambda`: one `sqrt_step` in `√|λ|`, capped by `max_lambda_step`.
    fn step_at(&self, lambda: f64) -> f64 {
        let s = self.sqrt_step;
        (2.0 * s * lambda.abs().sqrt() + s * s).min(self.max_lambda_step)
    }

    fn grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = vec![lo];
        let mut x = lo;
        while x < hi {
            x = (x + self.step_at(x)).min(hi);
            pts.push(x);
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub lambda: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Ascending, strictly increasing.
    pub eigenvalues: Vec<Eigenvalue>,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub grid_points: usize,
    pub options: ScanOptions,
}

impl SpectrumReport {
    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }
}

/// `σ_min / max(1, σ_max)` of the balanced characteristic matrix.
pub fn sigma_min(qg: &QuantumGraph, lambda: f64) -> f64 {
    assemble_balanced(qg, lambda).relative_sigma_min()
}

fn nullity(qg: &QuantumGraph, lambda: f64, tol: f64) -> usize {
    assemble_balanced(qg, lambda).nullspace(tol).dimension
}

/// Golden-section minimisation of `f` on `[a, b]`.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..300 {
        let scale = a.abs().max(b.abs()).max(1.0);
        if b - a <= rel_tol * scale {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if !(c < d) {
            break;
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Grid indices whose sample is a local minimum (endpoints included).
fn local_minima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    (0..n)
        .filter(|&i| {
            let left = i == 0 || values[i] <= values[i - 1];
            let right = i + 1 == n || values[i] < values[i + 1];
            left && right && n > 1
        })
        .collect()
}

/// Count at a point where `Λ(λ)` is finite and clearly nonsingular.
fn count_if_regular(qg: &QuantumGraph, lambda: f64) -> Option<usize> {
    let dtn = dirichlet_to_neumann(qg, lambda)?;
    let eig = SymmetricEigen::new(dtn).eigenvalues;
    let scale = eig.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if eig.iter().any(|x| x.abs() <= 1e-12 * scale) {
        return None;
    }
    let dirichlet: usize = qg
        .potentials()
        .iter()
        .map(|q| dirichlet_count(q, lambda))
        .sum();
    Some(dirichlet + eig.iter().filter(|&&x| x > 0.0).count())
}

/// Number of eigenvalues strictly below `lambda`, with multiplicity.
///
/// Equals the Dirichlet eigenvalues of the edges below λ plus the positive
/// eigenvalues of [`dirichlet_to_neumann`]. At a pole or an eigenvalue the
/// count is taken just below λ.
pub fn eigenvalue_count(qg: &QuantumGraph, lambda: f64) -> usize {
    count_near(qg, lambda, -1.0)
}

/// Count at `lambda`, moving in direction `dir` until the point is regular.
fn count_near(qg: &QuantumGraph, lambda: f64, dir: f64) -> usize {
    let unit = 1e-13 * lambda.abs().max(1.0);
    std::iter::once(0.0)
        .chain((0..40).map(|i| unit * 2f64.powi(i)))
        .find_map(|delta| count_if_regular(qg, lambda + dir * delta))
        .unwrap_or(0)
}

/// Refined, merged σ_min minima on `grid`.
fn locate(qg: &QuantumGraph, grid: &[f64], opts: &ScanOptions) -> Vec<f64> {
    let sigma: Vec<f64> = grid.par_iter().map(|&x| sigma_min(qg, x)).collect();
    let candidates: Vec<(f64, f64)> = local_minima(&sigma)
        .into_iter()
        .map(|i| (grid[i.saturating_sub(1)], grid[(i + 1).min(grid.len() - 1)]))
        .collect();
    let refined: Vec<Option<f64>> = candidates
        .par_iter()
        .map(|&(a, b)| {
            let (x, s) = golden_section(|x| sigma_min(qg, x), a, b, opts.refine_tol);
            (s < opts.null_tol).then_some(x)
        })
        .collect();
    let mut found: Vec<f64> = refined.into_iter().flatten().collect();
    found.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::new();
    for x in found {
        match merged.last_mut() {
            Some(prev) if x - *prev <= 10.0 * opts.refine_tol * x.abs().max(1.0) => {
                *prev = 0.5 * (*prev + x);
            }
            _ => merged.push(x),
        }
    }
    merged
}

/// Split `[lo, hi]` by exact counts until each piece holds one eigenvalue, or
/// a group too close to separate at `refine_tol`. Pushes `(lo, hi, count)`.
fn isolate(
    qg: &QuantumGraph,
    (lo, hi): (f64, f64),
    (n_lo, n_hi): (usize, usize),
    opts: &ScanOptions,
    out: &mut Vec<(f64, f64, usize)>,
) {
    let k = n_hi.saturating_sub(n_lo);
    if k == 0 {
        return;
    }
    let narrow = hi - lo <= 100.0 * opts.refine_tol * lo.abs().max(hi.abs()).max(1.0);
    if k == 1 || narrow {
        out.push((lo, hi, k));
        return;
    }
    let mid = 0.5 * (lo + hi);
    let n_mid = eigenvalue_count(qg, mid).clamp(n_lo, n_hi);
    isolate(qg, (lo, mid), (n_lo, n_mid), opts, out);
    isolate(qg, (mid, hi), (n_mid, n_hi), opts, out);
}

/// σ_min minimiser inside a piece known to contain eigenvalues.
fn minimise_in(qg: &QuantumGraph, lo: f64, hi: f64, opts: &ScanOptions) -> f64 {
    const POINTS: usize = 64;
    let grid: Vec<f64> = (0..=POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / POINTS as f64)
        .collect();
    let sigma: Vec<f64> = grid.iter().map(|&x| sigma_min(qg, x)).collect();
    let best = (0..=POINTS)
        .min_by(|&a, &b| sigma[a].total_cmp(&sigma[b]))
        .unwrap();
    let (a, b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(POINTS)]);
    golden_section(|x| sigma_min(qg, x), a, b, opts.refine_tol).0
}

/// Eigenvalues in `[lo, hi]` located through [`isolate`].
fn slice(
    qg: &QuantumGraph,
    lo: f64,
    hi: f64,
    counts: (usize, usize),
    opts: &ScanOptions,
) -> Vec<Eigenvalue> {
    let mut pieces = Vec::new();
    isolate(qg, (lo, hi), counts, opts, &mut pieces);
    pieces
        .par_iter()
        .map(|&(a, b, k)| Eigenvalue {
            lambda: minimise_in(qg, a, b, opts),
            multiplicity: k,
        })
        .collect()
}

/// Check the located eigenvalues against exact counts between them and
/// slice every segment where some are missing.
fn resolve(
    qg: &QuantumGraph,
    lo: f64,
    hi: f64,
    counts: (usize, usize),
    found: Vec<f64>,
    opts: &ScanOptions,
) -> Vec<Eigenvalue> {
    if found.is_empty() {
        return slice(qg, lo, hi, counts, opts);
    }
    // one segment per located eigenvalue, split at midpoints
    let mut cuts = vec![lo];
    cuts.extend(found.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    cuts.push(hi);
    let mut n = vec![counts.0];
    n.extend(
        cuts[1..cuts.len() - 1]
            .iter()
            .map(|&x| eigenvalue_count(qg, x)),
    );
    n.push(counts.1);

    found
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| {
            let expected = n[i + 1].saturating_sub(n[i]);
            let nullity = nullity(qg, x, opts.null_tol).max(1);
            if expected > nullity {
                slice(qg, cuts[i], cuts[i + 1], (n[i], n[i + 1]), opts)
            } else {
                vec![Eigenvalue {
                    lambda: x,
                    multiplicity: nullity,
                }]
            }
        })
        .collect()
}

/// Eigenvalues in `[lambda_lo, lambda_hi]`.
///
/// Minima of σ_min on the grid are refined by golden-section search. The
/// exact eigenvalue count between neighbouring minima flags gaps where
/// eigenvalues closer than the grid spacing were merged or missed; those gaps
/// are bisected by count until every eigenvalue is isolated.
pub fn scan_spectrum(
    qg: &QuantumGraph,
    lambda_lo: f64,
    lambda_hi: f64,
    opts: &ScanOptions,
) -> Result<SpectrumReport> {
    opts.validate()?;
    if !(lambda_lo < lambda_hi) {
        return Err(Error::InvalidOption(format!(
            "lambda range [{lambda_lo}, {lambda_hi}] is empty"
        )));
    }
    let grid = opts.grid(lambda_lo, lambda_hi);
    let found = locate(qg, &grid, opts);
    let counts = (
        count_near(qg, lambda_lo, -1.0),
        count_near(qg, lambda_hi, 1.0),
    );
    let eigenvalues = resolve(qg, lambda_lo, lambda_hi, counts, found, opts);
    Ok(SpectrumReport {
        eigenvalues,
        lambda_lo,
        lambda_hi,
        grid_points: grid.len(),
        options: *opts,
    })
}

/// Single eigenvalue with multiplicity inside `(lo, hi)`.
pub fn refine_eigenvalue(
    qg: &QuantumGraph,
    bracket: (f64, f64),
    opts: &ScanOptions,
) -> Result<(f64, usize)> {
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidOption("bracket must satisfy lo < hi".into()));
    }
    let n = 64.max(opts.grid(lo, hi).len());
    let grid: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    let sigma: Vec<f64> = grid.par_iter().map(|&x| sigma_min(qg, x)).collect();
    let best = (1..n)
        .min_by(|&a, &b| sigma[a].total_cmp(&sigma[b]))
        .ok_or(Error::NoEigenvalueInBracket(lo, hi))?;
    let (x, s) = golden_section(
        |x| sigma_min(qg, x),
        grid[best - 1],
        grid[best + 1],
        opts.refine_tol,
    );
    let edge = opts.refine_tol * x.abs().max(1.0);
    if s >= opts.null_tol || x - lo <= edge || hi - x <= edge {
        return Err(Error::NoEigenvalueInBracket(lo, hi));
    }
    Ok((x, nullity(qg, x, opts.null_tol).max(1)))
}

/// Lowest eigenvalue. The quadratic form bounds it below by `min q` and the
/// constant test function bounds it above by `∫_G q / |E|`.
pub fn smallest_eigenvalue(qg: &QuantumGraph, opts: &ScanOptions) -> Result<f64> {
    let lo = qg.min_potential() - 1.0;
    let ne = qg.graph().edge_count().max(1) as f64;
    let hi = (qg.total_integral() / ne + 1.0).max(lo + 1.0);
    let report = scan_spectrum(qg, lo, hi, opts)?;
    report
        .eigenvalues
        .first()
        .map(|e| e.lambda)
        .ok_or(Error::NoEigenvalueInBracket(lo, hi))
}

/// Half-width in `√λ` of the window assigned to the cluster at `(2k+1)π`.
///
/// For zero potential the eigenvalues away from the multiples of π sit at
/// `cos √λ = μ` with μ an eigenvalue of the normalised adjacency operator, so
/// the closest ones to an odd multiple are `π − arccos μ_min` away in `√λ`.
/// The window is half that distance, capped at `π/2`.
pub fn cluster_half_width(graph: &MetricGraph) -> f64 {
    let n = graph.vertex_count();
    let deg = graph.degrees();
    if graph.edge_count() == 0 || deg.contains(&0) {
        return PI / 2.0;
    }
    let adj = graph.adjacency_counts();
    let m = DMatrix::from_fn(n, n, |i, j| {
        adj[i][j] as f64 / ((deg[i] * deg[j]) as f64).sqrt()
    });
    let mu = SymmetricEigen::new(m).eigenvalues;
    let closest = mu
        .iter()
        .copied()
        .filter(|&x| x > -1.0 + 1e-9)
        .fold(f64::INFINITY, f64::min);
    if !closest.is_finite() {
        return PI / 2.0;
    }
    let gap = PI - closest.clamp(-1.0, 1.0).acos();
    (0.5 * gap).min(PI / 2.0)
}

/// `[λ_lo, λ_hi]` covered by the window of cluster `k`.
pub fn cluster_window(k: u32, half_width: f64) -> (f64, f64) {
    let centre = (2 * k + 1) as f64 * PI;
    let lo = (centre - half_width).max(0.0);
    (lo * lo, (centre + half_width).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterMember {
    pub lambda: f64,
    pub multiplicity: usize,
    /// `λ − (2k+1)²π²`.
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRecord {
    pub k: u32,
    pub centre: f64,
    pub members: Vec<ClusterMember>,
    pub total_multiplicity: usize,
}

impl ClusterRecord {
    /// Shifts repeated by multiplicity, ascending.
    pub fn shifts(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .members
            .iter()
            .flat_map(|m| std::iter::repeat_n(m.shift, m.multiplicity))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Group the eigenvalues of `report` into the clusters `k_lo..=k_hi`.
pub fn cluster_analysis(
    report: &SpectrumReport,
    k_lo: u32,
    k_hi: u32,
    half_width: f64,
) -> Result<Vec<ClusterRecord>> {
    let need_lo = cluster_window(k_lo, half_width).0;
    let need_hi = cluster_window(k_hi, half_width).1;
    if report.lambda_lo > need_lo || report.lambda_hi < need_hi {
        return Err(Error::InsufficientRange {
            have_lo: report.lambda_lo,
            have_hi: report.lambda_hi,
            need_lo,
            need_hi,
        });
    }
    Ok((k_lo..=k_hi)
        .map(|k| {
            let centre = cluster_center(k);
            let members: Vec<ClusterMember> = report
                .eigenvalues
                .iter()
                .filter(|e| {
                    e.lambda >= 0.0
                        && (e.lambda.sqrt() - (2 * k + 1) as f64 * PI).abs() <= half_width
                })
                .map(|e| ClusterMember {
                    lambda: e.lambda,
                    multiplicity: e.multiplicity,
                    shift: e.lambda - centre,
                })
                .collect();
            ClusterRecord {
                k,
                centre,
                total_multiplicity: members.iter().map(|m| m.multiplicity).sum(),
                members,
            }
        })
        .collect())
}

/// Scan only the window of each requested cluster.
pub fn scan_clusters(
    qg: &QuantumGraph,
    ks: &[u32],
    opts: &ScanOptions,
) -> Result<Vec<ClusterRecord>> {
    let w = cluster_half_width(qg.graph());
    ks.par_iter()
        .map(|&k| {
            let (lo, hi) = cluster_window(k, w);
            let report = scan_spectrum(qg, lo, hi, opts)?;
            Ok(cluster_analysis(&report, k, k, w)?.remove(0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_bouquet, BouquetShape};

    fn fig8() -> QuantumGraph {
        QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1, 1]).unwrap()))
    }

    #[test]
    fn golden_section_finds_v_minimum() {
        let (x, f) = golden_section(|x| (x - 0.3).abs(), 0.0, 1.0, 1e-14);
        assert!((x - 0.3).abs() < 1e-13 && f < 1e-13);
    }

    #[test]
    fn grid_respects_caps() {
        let o = ScanOptions::default();
        let g = o.grid(-1.0, 400.0);
        assert_eq!(*g.last().unwrap(), 400.0);
        assert!(g
            .windows(2)
            .all(|w| w[1] - w[0] <= o.max_lambda_step + 1e-12));
    }

    #[test]
    fn figure_eight_low_spectrum() {
        let r = scan_spectrum(&fig8(), -1.0, 50.0, &ScanOptions::default()).unwrap();
        let got: Vec<(f64, usize)> = r
            .eigenvalues
            .iter()
            .map(|e| (e.lambda, e.multiplicity))
            .collect();
        assert_eq!(got.len(), 3, "{got:?}");
        let expect = [(0.0, 1), (PI * PI, 1), (4.0 * PI * PI, 3)];
        for ((l, m), (el, em)) in got.iter().zip(expect) {
            assert!((l - el).abs() < 1e-9 * el.max(1.0), "{l} vs {el}");
            assert_eq!(*m, em);
        }
    }

    #[test]
    fn counting_function_on_figure_eight() {
        let qg = fig8();
        // spectrum 0, π², (2π)² ×3, (3π)², ...
        for (lambda, n) in [
            (-0.5, 0),
            (0.0, 0),
            (5.0, 1),
            (20.0, 2),
            (45.0, 5),
            (100.0, 6),
        ] {
            assert_eq!(eigenvalue_count(&qg, lambda), n, "λ = {lambda}");
        }
    }

    #[test]
    fn empty_interval() {
        let r = scan_spectrum(&fig8(), 5.0, 8.0, &ScanOptions::default()).unwrap();
        assert!(r.eigenvalues.is_empty());
    }

    #[test]
    fn refine_examples() {
        let o = ScanOptions::default();
        let (l, m) = refine_eigenvalue(&fig8(), (9.0, 11.0), &o).unwrap();
        assert!((l - PI * PI).abs() < 1e-10 && m == 1);
        let (l, m) = refine_eigenvalue(&fig8(), (38.0, 41.0), &o).unwrap();
        assert!((l - 4.0 * PI * PI).abs() < 1e-9 && m == 3);
        let err = refine_eigenvalue(&fig8(), (5.0, 8.0), &o).unwrap_err();
        assert!(err.to_string().contains("no eigenvalue in bracket"));
    }

    #[test]
    fn smallest_examples() {
        let o = ScanOptions::default();
        assert!(smallest_eigenvalue(&fig8(), &o).unwrap().abs() < 1e-10);
        let shifted = fig8().shifted(2.5);
        assert!((smallest_eigenvalue(&shifted, &o).unwrap() - 2.5).abs() < 1e-10);
        let s = BouquetShape::new(vec![1, 1]).unwrap();
        let pm = QuantumGraph::bouquet_constant(&s, &[1.0, -1.0]).unwrap();
        assert!(smallest_eigenvalue(&pm, &o).unwrap() < -1e-4);
    }

    #[test]
    fn bouquet_ground_state_is_constant() {
        let g = QuantumGraph::zero(build_bouquet(&BouquetShape::new(vec![1, 3]).unwrap()));
        let r = scan_spectrum(&g, -1.0, 1.0, &ScanOptions::default()).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        assert_eq!(r.eigenvalues[0].multiplicity, 1);
        let m = crate::matrix::assemble_regular(&g, r.eigenvalues[0].lambda);
        let v = &m.nullspace(DEFAULT_NULL_TOL).basis[0];
        let a0 = v.vertex[0];
        assert!(v.vertex.iter().all(|a| (a - a0).abs() < 1e-8));
        assert!(v.edge.iter().all(|b| b.abs() < 1e-8));
    }

    #[test]
    fn half_widths() {
        let hw = |n: Vec<usize>| cluster_half_width(&build_bouquet(&BouquetShape::new(n).unwrap()));
        assert!((hw(vec![1, 1]) - PI / 2.0).abs() < 1e-12);
        assert!((hw(vec![1, 3]) - PI / 6.0).abs() < 1e-9);
        assert!((hw(vec![3, 3, 5]) - PI / 10.0).abs() < 1e-9);
    }

    #[test]
    fn cluster_range_is_checked() {
        let r = scan_spectrum(&fig8(), 0.0, 25.0, &ScanOptions::default()).unwrap();
        assert!(matches!(
            cluster_analysis(&r, 0, 1, PI / 2.0),
            Err(Error::InsufficientRange { .. })
        ));
        let c = cluster_analysis(&r, 0, 0, PI / 2.0).unwrap();
        assert_eq!(c[0].total_multiplicity, 1);
        assert!(c[0].members[0].shift.abs() < 1e-10);
    }
}
