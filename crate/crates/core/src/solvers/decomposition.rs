//! Tree and path decompositions, their validation and text format.

use crate::dual::MultiGraph;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// Bags on the nodes of a tree. `tree_arcs` index into `bags`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_arcs: Vec<(usize, usize)>,
}

/// A tree decomposition whose tree is the path `bags[0] - bags[1] - ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<usize>>,
}

impl PathDecomposition {
    pub fn to_tree(&self) -> TreeDecomposition {
        TreeDecomposition {
            bags: self.bags.clone(),
            tree_arcs: (1..self.bags.len()).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.to_tree().width()
    }
}

impl TreeDecomposition {
    /// Largest bag size minus one (0 for no bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn is_path(&self) -> bool {
        let m = self.bags.len();
        let mut degree = vec![0; m];
        for &(a, b) in &self.tree_arcs {
            degree[a] += 1;
            degree[b] += 1;
        }
        self.is_tree() && degree.iter().all(|&d| d <= 2)
    }

    fn is_tree(&self) -> bool {
        let m = self.bags.len();
        if m == 0 {
            return self.tree_arcs.is_empty();
        }
        if self.tree_arcs.len() + 1 != m {
            return false;
        }
        let mut dsu = crate::dsu::Dsu::new(m);
        for &(a, b) in &self.tree_arcs {
            if a >= m || b >= m || !dsu.union(a, b) {
                return false;
            }
        }
        true
    }

    /// Writes
    /// ```text
    /// td <bag count> <width>
    /// bag <id> : <nodes...>
    /// arc <a> <b>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!("td {} {}\n", self.bags.len(), self.width());
        for (i, bag) in self.bags.iter().enumerate() {
            write_bag(&mut out, i, None, bag);
        }
        for &(a, b) in &self.tree_arcs {
            writeln!(out, "arc {a} {b}").unwrap();
        }
        out
    }
}

pub(crate) fn write_bag(out: &mut String, id: usize, kind: Option<&str>, bag: &[usize]) {
    write!(out, "bag {id}").unwrap();
    if let Some(kind) = kind {
        write!(out, " {kind}").unwrap();
    }
    out.push_str(" :");
    for v in bag {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The bag graph is not a tree (or not a path, for path decompositions).
    BadShape { reason: String },
    /// A bag mentions a node outside the graph.
    UnknownNode { bag: usize, node: usize },
    /// Property 1: node in no bag.
    Uncovered { node: usize },
    /// Property 2: the bags containing the node are not connected.
    Disconnected { node: usize },
    /// Property 3: no bag holds both endpoints.
    ArcNotCovered { u: usize, v: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub width: usize,
    pub violations: Vec<Violation>,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the three tree-decomposition properties, plus tree shape.
pub fn validate_decomposition(graph: &MultiGraph, td: &TreeDecomposition) -> DecompositionReport {
    validate_inner(graph, td, false)
}

/// As [`validate_decomposition`], additionally requiring the path shape.
pub fn validate_path_decomposition(
    graph: &MultiGraph,
    pd: &PathDecomposition,
) -> DecompositionReport {
    validate_inner(graph, &pd.to_tree(), true)
}

fn validate_inner(graph: &MultiGraph, td: &TreeDecomposition, path: bool) -> DecompositionReport {
    let n = graph.node_count();
    let m = td.bags.len();
    let mut violations = Vec::new();

    let shape_ok = if path { td.is_path() } else { td.is_tree() };
    if !shape_ok {
        violations.push(Violation::BadShape {
            reason: if path {
                "bags do not form a path".into()
            } else {
                "bag graph is not a tree".into()
            },
        });
    }

    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                violations.push(Violation::UnknownNode { bag: i, node: v });
            } else if holders[v].last() != Some(&i) {
                holders[v].push(i);
            }
        }
    }

    for (v, hs) in holders.iter().enumerate() {
        if hs.is_empty() {
            violations.push(Violation::Uncovered { node: v });
        }
    }

    // Connectivity of each node's bags within the bag graph.
    let valid_arcs: Vec<(usize, usize)> = td
        .tree_arcs
        .iter()
        .copied()
        .filter(|&(a, b)| a < m && b < m)
        .collect();
    for (v, hs) in holders.iter().enumerate() {
        if hs.len() < 2 {
            continue;
        }
        let mut member = vec![false; m];
        for &h in hs {
            member[h] = true;
        }
        let mut dsu = crate::dsu::Dsu::new(m);
        for &(a, b) in &valid_arcs {
            if member[a] && member[b] {
                dsu.union(a, b);
            }
        }
        let root = dsu.find(hs[0]);
        if hs.iter().any(|&h| dsu.find(h) != root) {
            violations.push(Violation::Disconnected { node: v });
        }
    }

    let mut seen = std::collections::HashSet::new();
    for &(u, v) in graph.arcs() {
        if u == v || !seen.insert((u, v)) {
            continue;
        }
        let covered = td.bags.iter().any(|b| b.contains(&u) && b.contains(&v));
        if !covered {
            violations.push(Violation::ArcNotCovered { u, v });
        }
    }

    DecompositionReport {
        width: td.width(),
        violations,
    }
}

/// Tree decomposition from an elimination ordering: node `v` gets the bag
/// `{v} ∪ (its later neighbours in the fill graph)`, attached to the bag of
/// the earliest-eliminated of those neighbours.
pub fn decomposition_from_elimination(graph: &MultiGraph, order: &[usize]) -> TreeDecomposition {
    let n = graph.node_count();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![],
            tree_arcs: vec![],
        };
    }
    let mut adj: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for &(a, b) in graph.arcs() {
        if a != b {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&w| position[w] > i).collect();
        for (x, &a) in later.iter().enumerate() {
            for &b in &later[x + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[i] = later.iter().map(|&w| position[w]).min();
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // Roots (one per component) are chained together.
    let mut tree_arcs = Vec::with_capacity(n - 1);
    let mut last_root: Option<usize> = None;
    for i in 0..n {
        match parent[i] {
            Some(p) => tree_arcs.push((i, p)),
            None => {
                if let Some(r) = last_root {
                    tree_arcs.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    TreeDecomposition { bags, tree_arcs }
}

/// Path decomposition from a node ordering: bag `i` holds `v_i` and every
/// earlier node that still has a neighbour at position `i` or later.
pub fn path_decomposition_from_ordering(graph: &MultiGraph, order: &[usize]) -> PathDecomposition {
    let n = graph.node_count();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    // last[v]: position of v's latest neighbour (or itself).
    let mut last: Vec<usize> = position.clone();
    for &(a, b) in graph.arcs() {
        last[a] = last[a].max(position[b]);
        last[b] = last[b].max(position[a]);
    }
    let bags = (0..n)
        .map(|i| {
            let mut bag: Vec<usize> = order[..i]
                .iter()
                .copied()
                .filter(|&u| last[u] >= i)
                .collect();
            bag.push(order[i]);
            bag.sort_unstable();
            bag
        })
        .collect();
    PathDecomposition { bags }
}
