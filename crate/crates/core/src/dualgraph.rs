//! Extended dual graphs of reduced curves: one vertex per component and
//! per singular point, one edge per local branch joining the point to the
//! component carrying that branch.

use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Singularity {
    pub name: String,
    /// Component carrying each branch, repeated for several branches.
    pub branches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveConfigInput {
    pub components: Vec<String>,
    #[serde(default)]
    pub singularities: Vec<Singularity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    Component(usize),
    Point(usize),
}

#[derive(Debug, Clone)]
pub struct DualGraph {
    pub graph: UnGraph<Vertex, ()>,
    /// Branch counts `n_lambda`, one per singular point.
    pub branch_counts: Vec<usize>,
    pub n_components: usize,
}

/// Components first, then points, each in input order.
pub fn build_graph(input: &CurveConfigInput) -> Result<DualGraph> {
    let mut graph = UnGraph::new_undirected();
    let mut comp = Vec::with_capacity(input.components.len());
    for (i, name) in input.components.iter().enumerate() {
        if input.components[..i].contains(name) {
            return Err(Error::InvalidInput(format!("duplicate component `{name}`")));
        }
        comp.push(graph.add_node(Vertex::Component(i)));
    }
    let mut branch_counts = Vec::with_capacity(input.singularities.len());
    for (k, s) in input.singularities.iter().enumerate() {
        if s.branches.is_empty() {
            return Err(Error::InvalidInput(format!(
                "singular point `{}` has no branches",
                s.name
            )));
        }
        let v = graph.add_node(Vertex::Point(k));
        for b in &s.branches {
            let i = input
                .components
                .iter()
                .position(|c| c == b)
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "branch of `{}` references undeclared component `{b}`",
                        s.name
                    ))
                })?;
            graph.add_edge(v, comp[i], ());
        }
        branch_counts.push(s.branches.len());
    }
    Ok(DualGraph {
        graph,
        branch_counts,
        n_components: input.components.len(),
    })
}

impl DualGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn connected_components(&self) -> usize {
        petgraph::algo::connected_components(&self.graph)
    }

    /// `sum (n_lambda - 1) - r + 1`, valid for connected graphs.
    pub fn closed_formula(&self) -> i64 {
        self.branch_counts
            .iter()
            .map(|&n| n as i64 - 1)
            .sum::<i64>()
            - self.n_components as i64
            + 1
    }

    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let idx = self
            .graph
            .node_indices()
            .find(|&i| self.graph[i] == v)
            .unwrap_or(NodeIndex::end());
        let mut out: Vec<Vertex> = self.graph.neighbors(idx).map(|i| self.graph[i]).collect();
        out.reverse();
        out
    }
}

/// First Betti number (cycle rank) `E - V + c`.
pub fn betti1(g: &DualGraph) -> u64 {
    let c = g.connected_components();
    let b = g.edge_count() + c - g.vertex_count();
    if c == 1 {
        debug_assert_eq!(b as i64, g.closed_formula());
    }
    b as u64
}
