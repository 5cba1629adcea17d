//! Treewidth, pathwidth, cutwidth and congestion: exact subset DPs,
//! seeded heuristics, and witnesses that can be checked independently.

pub mod decomposition;
mod exact;
mod heuristic;
pub mod nice;

pub use decomposition::{
    decomposition_from_elimination, path_decomposition_from_ordering, validate_decomposition,
    validate_path_decomposition, DecompositionReport, PathDecomposition, TreeDecomposition,
    Violation,
};
pub use heuristic::heuristic_upper;
pub use nice::{make_nice, BagKind, NiceTreeDecomposition};

use crate::dual::{congestion_of, GraphError, HostTree, LinearLayout, MultiGraph};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Which width parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Tw,
    Pw,
    Cw,
    Cng,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::Tw, Param::Pw, Param::Cw, Param::Cng];

    pub fn name(self) -> &'static str {
        match self {
            Param::Tw => "tw",
            Param::Pw => "pw",
            Param::Cw => "cw",
            Param::Cng => "cng",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tw" => Ok(Param::Tw),
            "pw" => Ok(Param::Pw),
            "cw" => Ok(Param::Cw),
            "cng" => Ok(Param::Cng),
            _ => Err(format!("unknown parameter `{s}` (expected tw, pw, cw or cng)")),
        }
    }
}

/// Largest node counts the exact solvers accept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactLimits {
    pub tw: usize,
    pub pw: usize,
    pub cw: usize,
    pub cng: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            tw: 16,
            pw: 16,
            cw: 20,
            cng: 12,
        }
    }
}

impl ExactLimits {
    pub fn get(&self, param: Param) -> usize {
        match param {
            Param::Tw => self.tw,
            Param::Pw => self.pw,
            Param::Cw => self.cw,
            Param::Cng => self.cng,
        }
    }
}

/// Hard cap on any exact table, whatever the configured limits say.
pub const MAX_EXACT_NODES: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("{param}: {nodes} nodes exceeds the exact limit of {limit}; use the heuristic")]
    TooLarge {
        param: Param,
        nodes: usize,
        limit: usize,
    },
    #[error("witness does not match its graph: {0}")]
    BadWitness(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Tree(TreeDecomposition),
    Path(PathDecomposition),
    Layout(LinearLayout),
    Host(HostTree),
}

impl Witness {
    pub fn to_text(&self) -> String {
        match self {
            Witness::Tree(td) => td.to_text(),
            Witness::Path(pd) => pd.to_tree().to_text(),
            Witness::Layout(l) => l.to_text(),
            Witness::Host(h) => h.to_text(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub param: Param,
    pub value: usize,
    pub exact: bool,
    pub witness: Witness,
}

impl WidthReport {
    /// Recomputes the value from the witness alone.
    pub fn witness_value(&self, graph: &MultiGraph) -> Result<usize, SolverError> {
        match (&self.witness, self.param) {
            (Witness::Tree(td), Param::Tw) => {
                let r = validate_decomposition(graph, td);
                if !r.is_valid() {
                    return Err(SolverError::BadWitness(format!("{:?}", r.violations)));
                }
                Ok(r.width)
            }
            (Witness::Path(pd), Param::Pw) => {
                let r = validate_path_decomposition(graph, pd);
                if !r.is_valid() {
                    return Err(SolverError::BadWitness(format!("{:?}", r.violations)));
                }
                Ok(r.width)
            }
            (Witness::Layout(l), Param::Cw) => {
                let profile = crate::dual::cut_profile(graph, &l.ordering)?;
                if profile != l.cut_profile {
                    return Err(SolverError::BadWitness("stale cut profile".into()));
                }
                Ok(profile.into_iter().max().unwrap_or(0))
            }
            (Witness::Host(h), Param::Cng) => Ok(congestion_of(graph, h)?),
            _ => Err(SolverError::BadWitness(
                "witness kind does not match parameter".into(),
            )),
        }
    }
}

fn check_size(graph: &MultiGraph, param: Param, limit: usize) -> Result<(), SolverError> {
    let limit = limit.min(MAX_EXACT_NODES);
    if graph.node_count() > limit {
        return Err(SolverError::TooLarge {
            param,
            nodes: graph.node_count(),
            limit,
        });
    }
    Ok(())
}

/// Exact treewidth. Loops and parallel arcs do not matter.
pub fn treewidth_exact(graph: &MultiGraph, limit: usize) -> Result<WidthReport, SolverError> {
    check_size(graph, Param::Tw, limit)?;
    let (value, order) = exact::treewidth(graph);
    Ok(WidthReport {
        param: Param::Tw,
        value,
        exact: true,
        witness: Witness::Tree(decomposition_from_elimination(graph, &order)),
    })
}

/// Exact pathwidth via the vertex separation number.
pub fn pathwidth_exact(graph: &MultiGraph, limit: usize) -> Result<WidthReport, SolverError> {
    check_size(graph, Param::Pw, limit)?;
    let (value, order) = exact::pathwidth(graph);
    Ok(WidthReport {
        param: Param::Pw,
        value,
        exact: true,
        witness: Witness::Path(path_decomposition_from_ordering(graph, &order)),
    })
}

/// Exact cutwidth with the lexicographically smallest optimal layout.
pub fn cutwidth_exact(graph: &MultiGraph, limit: usize) -> Result<WidthReport, SolverError> {
    check_size(graph, Param::Cw, limit)?;
    let (value, order) = exact::cutwidth(graph);
    Ok(WidthReport {
        param: Param::Cw,
        value,
        exact: true,
        witness: Witness::Layout(LinearLayout::new(graph, order)?),
    })
}

/// Exact congestion (carving width) with a host tree built from the optimal
/// laminar family. Guest node `v` sits on host leaf `v`.
pub fn congestion_exact(graph: &MultiGraph, limit: usize) -> Result<WidthReport, SolverError> {
    check_size(graph, Param::Cng, limit)?;
    let carving = exact::congestion(graph);
    let n = graph.node_count();
    let host = match carving.top {
        None => HostTree::new(1, vec![], vec![0])?,
        Some(top) => {
            let mut arcs = Vec::new();
            let mut next = n;
            let full = (1u64 << n) - 1;
            let a = build_cluster(top, &carving.splits, &mut arcs, &mut next);
            let b = build_cluster(full ^ top, &carving.splits, &mut arcs, &mut next);
            arcs.push((a, b));
            HostTree::new(next, arcs, (0..n).collect())?
        }
    };
    Ok(WidthReport {
        param: Param::Cng,
        value: carving.value,
        exact: true,
        witness: Witness::Host(host),
    })
}

fn build_cluster(set: u64, splits: &[u64], arcs: &mut Vec<(usize, usize)>, next: &mut usize) -> usize {
    if set.count_ones() == 1 {
        return set.trailing_zeros() as usize;
    }
    let a = splits[set as usize];
    let left = build_cluster(a, splits, arcs, next);
    let right = build_cluster(set ^ a, splits, arcs, next);
    let node = *next;
    *next += 1;
    arcs.push((node, left));
    arcs.push((node, right));
    node
}

/// Exact solver for one parameter under the given limits.
pub fn solve_exact(
    graph: &MultiGraph,
    param: Param,
    limits: &ExactLimits,
) -> Result<WidthReport, SolverError> {
    let limit = limits.get(param);
    match param {
        Param::Tw => treewidth_exact(graph, limit),
        Param::Pw => pathwidth_exact(graph, limit),
        Param::Cw => cutwidth_exact(graph, limit),
        Param::Cng => congestion_exact(graph, limit),
    }
}
