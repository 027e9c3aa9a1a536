//! Equilateral metric graphs: vertices plus oriented unit-length edges.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// An edge runs from `tail` (x = 0) to `head` (x = 1). Endpoints are vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Connected graph with loops and parallel edges allowed. Vertex and edge
/// order is the insertion order and fixes every matrix layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl MetricGraph {
    /// Build from vertex ids and `(edge id, tail id, head id)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut out = Vec::new();
        let mut edge_index = HashMap::new();
        for (id, tail, head) in edges {
            let lookup = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::DanglingEndpoint {
                        edge: id.clone(),
                        vertex: v.clone(),
                    })
            };
            let (t, h) = (lookup(&tail)?, lookup(&head)?);
            if edge_index.insert(id.clone(), out.len()).is_some() {
                return Err(Error::DuplicateEdge(id));
            }
            out.push(Edge {
                id,
                tail: t,
                head: h,
            });
        }
        let graph = Self {
            vertices,
            edges: out,
            vertex_index,
            edge_index,
        };
        let all: Vec<usize> = (0..graph.edge_count()).collect();
        let components = graph.component_labels(&all).1;
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(graph)
    }

    /// Same as [`MetricGraph::new`] but with vertex indices instead of ids;
    /// vertices are named `v0, v1, ...` and edges `e0, e1, ...`.
    pub fn from_indices(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let names: Vec<String> = (0..vertex_count).map(|i| format!("v{i}")).collect();
        let mut triples = Vec::with_capacity(edges.len());
        for (j, &(t, h)) in edges.iter().enumerate() {
            let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
            triples.push((format!("e{j}"), name(t), name(h)));
        }
        Self::new(names.clone(), triples)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|E| − |V|`, the expected cluster multiplicity.
    pub fn excess(&self) -> isize {
        self.edge_count() as isize - self.vertex_count() as isize
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// Degree with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }

    /// Unoriented incidence matrix: 1 for each endpoint, 2 for a loop.
    pub fn incidence_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.vertex_count(), self.edge_count());
        for (j, e) in self.edges.iter().enumerate() {
            m[(e.tail, j)] += 1;
            m[(e.head, j)] += 1;
        }
        m
    }

    /// Symmetric vertex adjacency counting parallel edges, loops contribute 2.
    pub fn adjacency_counts(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut a = vec![vec![0; n]; n];
        for e in &self.edges {
            a[e.tail][e.head] += 1;
            a[e.head][e.tail] += 1;
        }
        a
    }

    /// Component label per vertex (over all vertices) using only the given edges.
    fn component_labels(&self, edge_subset: &[usize]) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for &j in edge_subset {
            let e = &self.edges[j];
            adj[e.tail].push(e.head);
            adj[e.head].push(e.tail);
        }
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Component decomposition of the spanning subgraph with edge indices `edge_subset`.
    pub fn components_of(&self, edge_subset: &[usize]) -> Result<ComponentSummary> {
        if let Some(&bad) = edge_subset.iter().find(|&&j| j >= self.edge_count()) {
            return Err(Error::UnknownEdge(format!("#{bad}")));
        }
        let (label, count) = self.component_labels(edge_subset);
        let mut comps: Vec<Component> = (0..count)
            .map(|_| Component {
                vertices: 0,
                edges: 0,
                bipartite: true,
            })
            .collect();
        for &l in &label {
            comps[l].vertices += 1;
        }
        for &j in edge_subset {
            comps[label[self.edges[j].tail]].edges += 1;
        }

        // two-colouring per component; a loop or odd closed walk breaks it
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for &j in edge_subset {
            let e = &self.edges[j];
            adj[e.tail].push(e.head);
            if !e.is_loop() {
                adj[e.head].push(e.tail);
            } else {
                comps[label[e.tail]].bipartite = false;
            }
        }
        let mut colour = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &w in &adj[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => comps[label[u]].bipartite = false,
                        _ => {}
                    }
                }
            }
        }
        Ok(ComponentSummary { components: comps })
    }

    /// [`MetricGraph::components_of`] addressed by edge ids.
    pub fn subgraph_components<S: AsRef<str>>(&self, edge_ids: &[S]) -> Result<ComponentSummary> {
        let idx = edge_ids
            .iter()
            .map(|id| {
                self.edge(id.as_ref())
                    .ok_or_else(|| Error::UnknownEdge(id.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.components_of(&idx)
    }
}

/// Cycle lengths `n_1..n_r` of a bouquet glued at one common vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BouquetShape {
    cycle_lengths: Vec<usize>,
}

impl BouquetShape {
    pub fn new(cycle_lengths: Vec<usize>) -> Result<Self> {
        if cycle_lengths.is_empty() {
            return Err(Error::EmptyBouquet);
        }
        if cycle_lengths.contains(&0) {
            return Err(Error::ZeroCycleLength);
        }
        Ok(Self { cycle_lengths })
    }

    pub fn cycle_lengths(&self) -> &[usize] {
        &self.cycle_lengths
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths.len()
    }

    pub fn all_odd(&self) -> bool {
        self.cycle_lengths.iter().all(|n| n % 2 == 1)
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.cycle_lengths.iter().map(|n| n - 1).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.cycle_lengths.iter().sum()
    }

    /// Edge index ranges of each cycle in the graph produced by [`build_bouquet`].
    pub fn cycle_edge_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.cycle_lengths
            .iter()
            .map(|&n| {
                let r = start..start + n;
                start += n;
                r
            })
            .collect()
    }

    /// Number of odd saturated forests, `Σ_i Π_{j≠i} n_j`, when all cycles are odd.
    pub fn forest_count(&self) -> u128 {
        let n = &self.cycle_lengths;
        (0..n.len())
            .map(|i| {
                n.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &m)| m as u128)
                    .product::<u128>()
            })
            .sum()
    }

    /// Recognise a bouquet: one centre vertex, every other vertex of degree 2,
    /// edges partitioned into closed walks through the centre. Returns the
    /// shape together with the edge indices of each cycle in walking order.
    pub fn detect(graph: &MetricGraph) -> Option<(Self, Vec<Vec<usize>>)> {
        let deg = graph.degrees();
        let mut high = (0..graph.vertex_count()).filter(|&v| deg[v] != 2);
        let centre = match (high.next(), high.next()) {
            (None, _) => 0,
            (Some(v), None) => v,
            _ => return None,
        };
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); graph.vertex_count()];
        for (j, e) in graph.edges().iter().enumerate() {
            incident[e.tail].push(j);
            if !e.is_loop() {
                incident[e.head].push(j);
            }
        }
        let mut used = vec![false; graph.edge_count()];
        let mut cycles = Vec::new();
        for &first in &incident[centre] {
            if used[first] {
                continue;
            }
            let mut cycle = vec![first];
            used[first] = true;
            let other = |j: usize, from: usize| {
                let e = &graph.edges()[j];
                if e.tail == from {
                    e.head
                } else {
                    e.tail
                }
            };
            let mut at = other(first, centre);
            while at != centre {
                let next = *incident[at].iter().find(|&&j| !used[j])?;
                used[next] = true;
                cycle.push(next);
                at = other(next, at);
            }
            cycles.push(cycle);
        }
        if used.iter().any(|u| !u) {
            return None;
        }
        let shape = Self::new(cycles.iter().map(Vec::len).collect()).ok()?;
        Some((shape, cycles))
    }
}

/// Bouquet graph: centre `v0`; cycle `j` adds vertices `v{j}_1..v{j}_{n_j-1}`
/// and edges `e{j}_1..e{j}_{n_j}` oriented along the cycle.
pub fn build_bouquet(shape: &BouquetShape) -> MetricGraph {
    let mut vertices = vec!["v0".to_string()];
    let mut edges = Vec::with_capacity(shape.edge_count());
    for (j, &n) in shape.cycle_lengths().iter().enumerate() {
        let j = j + 1;
        let mut ring = vec!["v0".to_string()];
        for k in 1..n {
            let v = format!("v{j}_{k}");
            vertices.push(v.clone());
            ring.push(v);
        }
        ring.push("v0".to_string());
        for (k, w) in ring.windows(2).enumerate() {
            edges.push((format!("e{j}_{}", k + 1), w[0].clone(), w[1].clone()));
        }
    }
    MetricGraph::new(vertices, edges).expect("bouquet construction is always valid")
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column_sums(&self) -> Vec<i64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)]).sum())
            .collect()
    }

    /// Square submatrix with all rows and the listed columns.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)];
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)] as i128).collect())
            .collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub vertices: usize,
    pub edges: usize,
    /// No loop and no odd closed walk.
    pub bipartite: bool,
}

impl Component {
    /// Independent cycles: `edges − vertices + 1`.
    pub fn cycle_count(&self) -> usize {
        self.edges + 1 - self.vertices
    }

    /// Parity of the unique cycle of a unicyclic component.
    pub fn unique_cycle_parity(&self) -> Option<Parity> {
        (self.cycle_count() == 1).then_some(if self.bipartite {
            Parity::Even
        } else {
            Parity::Odd
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSummary {
    pub components: Vec<Component>,
}

impl ComponentSummary {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn total_cycles(&self) -> usize {
        self.components.iter().map(Component::cycle_count).sum()
    }

    /// Every component has exactly one cycle.
    pub fn is_saturated(&self) -> bool {
        self.components.iter().all(|c| c.cycle_count() == 1)
    }

    /// Saturated with no even cycle.
    pub fn is_odd_saturated(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.unique_cycle_parity() == Some(Parity::Odd))
    }
}
