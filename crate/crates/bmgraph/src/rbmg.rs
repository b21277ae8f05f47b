//! Necessary condition for two-colored reciprocal best match graphs.

use thiserror::Error;

use crate::graph::UndirectedColoredGraph;
use crate::ids::VertexId;
use crate::par::{self, Execution};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RbmgInputError {
    #[error("expected 2 colors, found {0}")]
    WrongColorCount(usize),
    #[error("edge {0} - {1} joins vertices of the same color")]
    SameColorEdge(VertexId, VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RbmgVerdict {
    Pass,
    /// Component with at least one edge that is not complete bipartite.
    Fail(Vec<VertexId>),
}

pub fn check_2crbmg_necessary(h: &UndirectedColoredGraph) -> Result<RbmgVerdict, RbmgInputError> {
    check_2crbmg_necessary_with(h, Execution::default())
}

/// Every component with an edge must be complete bipartite across the two color sides.
/// Edge-less components pass.
pub fn check_2crbmg_necessary_with(h: &UndirectedColoredGraph, exec: Execution) -> Result<RbmgVerdict, RbmgInputError> {
    let colors = h.color_set();
    if colors.len() != 2 {
        return Err(RbmgInputError::WrongColorCount(colors.len()));
    }
    if let Some((a, b)) = h.edges().find(|&(a, b)| h.color(a) == h.color(b)) {
        return Err(RbmgInputError::SameColorEdge(h.id(a), h.id(b)));
    }
    let comps = h.connected_components();
    let complete = par::map(exec, &comps, |comp| {
        let degree_sum: usize = comp.iter().map(|&v| h.neighbors(v).len()).sum();
        let edges = degree_sum / 2;
        let side = comp.iter().filter(|&&v| h.color(v) == colors[0]).count();
        edges == 0 || edges == side * (comp.len() - side)
    });
    Ok(match complete.iter().position(|ok| !ok) {
        None => RbmgVerdict::Pass,
        Some(k) => RbmgVerdict::Fail(comps[k].iter().map(|&v| h.id(v)).collect()),
    })
}
