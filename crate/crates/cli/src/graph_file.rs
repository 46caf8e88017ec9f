//! JSON graph files: string vertex ids, per-vertex potential and host
//! degree, optional edge phases.

use std::collections::HashMap;

use anyhow::{anyhow, bail, Result};
use serde::{Deserialize, Serialize};
use sgs_core::{Graph, PhaseField, Potential};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    #[serde(default)]
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

/// A validated graph file with its dense-index view.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub file: GraphFile,
    pub graph: Graph,
    pub potential: Potential,
    /// Present when any edge carries a phase; missing phases are 0.
    pub phase: Option<PhaseField>,
    pub index: HashMap<String, usize>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| anyhow!("malformed graph file at line {}, column {}: {e}", e.line(), e.column()))
    }

    /// Pretty JSON with a trailing newline. Field order is fixed, so saving
    /// a loaded file reproduces it after key-order normalization.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph files serialize");
        s.push('\n');
        s
    }

    pub fn from_core(graph: &Graph, potential: &Potential, phase: Option<&PhaseField>) -> Self {
        let id = |x: usize| x.to_string();
        GraphFile {
            vertices: (0..graph.vertex_count())
                .map(|x| VertexRecord {
                    id: id(x),
                    q: potential.value(x),
                    host_degree: (graph.deficit(x) > 0).then(|| graph.host_degree(x)),
                })
                .collect(),
            edges: graph
                .edges()
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| EdgeRecord {
                    u: id(x),
                    v: id(y),
                    theta: phase.map(|p| p.edge_values()[i]),
                })
                .collect(),
        }
    }

    pub fn load(self) -> Result<LoadedGraph> {
        if self.vertices.is_empty() {
            bail!("vertices: the graph must have at least one vertex");
        }
        let mut index = HashMap::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.q.is_finite() {
                bail!("vertices[{i}].q: potential must be finite");
            }
            if index.insert(v.id.clone(), i).is_some() {
                bail!("vertices[{i}].id: duplicate vertex id {:?}", v.id);
            }
        }
        let n = self.vertices.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut directed = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let lookup = |id: &str, field: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| anyhow!("edges[{i}].{field}: unknown vertex id {id:?}"))
            };
            let (x, y) = (lookup(&e.u, "u")?, lookup(&e.v, "v")?);
            if x == y {
                bail!("edges[{i}]: self-loop at {:?}", e.u);
            }
            if adjacency[x].contains(&y) {
                bail!("edges[{i}]: duplicate edge {:?}-{:?}", e.u, e.v);
            }
            adjacency[x].push(y);
            adjacency[y].push(x);
            if let Some(t) = e.theta {
                directed.push((x, y, t));
            }
        }
        let host: Vec<usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(x, v)| v.host_degree.unwrap_or(adjacency[x].len()))
            .collect();
        let graph = Graph::from_adjacency_lists(adjacency, Some(host)).map_err(|e| anyhow!("vertices: {e}"))?;
        let potential = Potential::new(self.vertices.iter().map(|v| v.q).collect());
        let phase = if self.edges.iter().any(|e| e.theta.is_some()) {
            Some(PhaseField::from_directed(&graph, &directed).map_err(|e| anyhow!("edges: {e}"))?)
        } else {
            None
        };
        Ok(LoadedGraph {
            file: self,
            graph,
            potential,
            phase,
            index,
        })
    }
}

impl LoadedGraph {
    pub fn id(&self, x: usize) -> &str {
        &self.file.vertices[x].id
    }

    pub fn ids(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.id(x).to_string()).collect()
    }

    pub fn resolve(&self, ids: &[String]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|id| self.index.get(id).copied().ok_or_else(|| anyhow!("unknown vertex id {id:?}")))
            .collect()
    }
}
