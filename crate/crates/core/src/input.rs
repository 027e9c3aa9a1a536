//! JSON graph description and the graph-plus-potentials bundle used by the solvers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_bouquet, BouquetShape, MetricGraph};
use crate::transfer::EdgePotential;

/// Vertex and edge ids may be written as JSON strings or integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Id {
    Name(String),
    Number(i64),
}

impl From<Id> for String {
    fn from(id: Id) -> String {
        match id {
            Id::Name(s) => s,
            Id::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: Id,
    pub from: Id,
    pub to: Id,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
}

/// `{"vertices": [...], "edges": [{"id", "from", "to", "potential"?}]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<Id>,
    pub edges: Vec<EdgeSpec>,
}

impl GraphSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph spec serialises")
    }

    /// Describe an existing graph and its potentials.
    pub fn from_graph(qg: &QuantumGraph) -> Self {
        let g = qg.graph();
        Self {
            vertices: g.vertices().iter().cloned().map(Id::Name).collect(),
            edges: g
                .edges()
                .iter()
                .zip(qg.potentials())
                .map(|(e, q)| EdgeSpec {
                    id: Id::Name(e.id.clone()),
                    from: Id::Name(g.vertices()[e.tail].clone()),
                    to: Id::Name(g.vertices()[e.head].clone()),
                    potential: (!q.is_zero()).then(|| PotentialSpec {
                        breakpoints: q.breakpoints().to_vec(),
                        values: q.values().to_vec(),
                    }),
                })
                .collect(),
        }
    }
}

/// A metric graph together with one potential per edge (edge order).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGraph {
    graph: MetricGraph,
    potentials: Vec<EdgePotential>,
}

impl QuantumGraph {
    pub fn new(graph: MetricGraph, potentials: Vec<EdgePotential>) -> Result<Self> {
        if potentials.len() != graph.edge_count() {
            return Err(Error::PotentialCount {
                expected: graph.edge_count(),
                got: potentials.len(),
            });
        }
        Ok(Self { graph, potentials })
    }

    pub fn zero(graph: MetricGraph) -> Self {
        let potentials = vec![EdgePotential::zero(); graph.edge_count()];
        Self { graph, potentials }
    }

    /// Bouquet with a constant potential on every edge of cycle `j`.
    pub fn bouquet_constant(shape: &BouquetShape, cycle_values: &[f64]) -> Result<Self> {
        if cycle_values.len() != shape.cycle_count() {
            return Err(Error::PotentialCount {
                expected: shape.cycle_count(),
                got: cycle_values.len(),
            });
        }
        let potentials = shape
            .cycle_lengths()
            .iter()
            .zip(cycle_values)
            .flat_map(|(&n, &v)| std::iter::repeat_n(EdgePotential::constant(v), n))
            .collect();
        Self::new(build_bouquet(shape), potentials)
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn potentials(&self) -> &[EdgePotential] {
        &self.potentials
    }

    /// `∫_G q`.
    pub fn total_integral(&self) -> f64 {
        self.potentials.iter().map(EdgePotential::integral).sum()
    }

    /// Smallest value of q over all pieces of all edges.
    pub fn min_potential(&self) -> f64 {
        self.potentials
            .iter()
            .map(EdgePotential::min_value)
            .fold(f64::INFINITY, f64::min)
    }

    /// Same graph with `q + c` on every edge.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            graph: self.graph.clone(),
            potentials: self.potentials.iter().map(|q| q.shifted(c)).collect(),
        }
    }
}

/// Validate a [`GraphSpec`] into a graph with per-edge potentials; omitted potentials are zero.
pub fn build_graph(spec: &GraphSpec) -> Result<QuantumGraph> {
    let vertices: Vec<String> = spec.vertices.iter().cloned().map(String::from).collect();
    let edges = spec.edges.iter().map(|e| {
        (
            String::from(e.id.clone()),
            String::from(e.from.clone()),
            String::from(e.to.clone()),
        )
    });
    let graph = MetricGraph::new(vertices, edges)?;
    let potentials = spec
        .edges
        .iter()
        .map(|e| match &e.potential {
            None => Ok(EdgePotential::zero()),
            Some(p) => EdgePotential::piecewise(p.breakpoints.clone(), p.values.clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    QuantumGraph::new(graph, potentials)
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<QuantumGraph> {
    build_graph(&GraphSpec::load(path)?)
}
