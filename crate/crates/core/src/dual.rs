//! Dual graphs, linear layouts and binary host trees.

use crate::tri::Triangulation;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("ordering is not a permutation of the {0} nodes")]
    NotAPermutation(usize),
    #[error("invalid host tree: {0}")]
    InvalidHost(String),
}

fn malformed(line: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Malformed {
        line,
        reason: reason.into(),
    }
}

/// Undirected multigraph. Parallel arcs are kept; loops are allowed and
/// count twice towards the degree of their node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiGraph {
    node_count: usize,
    arcs: Vec<(usize, usize)>,
}

impl MultiGraph {
    /// Arcs are stored with the smaller endpoint first.
    ///
    /// # Panics
    /// If an endpoint is out of range.
    pub fn new(node_count: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let arcs: Vec<_> = arcs
            .into_iter()
            .map(|(u, v)| {
                assert!(u < node_count && v < node_count, "arc ({u},{v}) out of range");
                (u.min(v), u.max(v))
            })
            .collect();
        MultiGraph { node_count, arcs }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.arcs
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn loop_count(&self) -> usize {
        self.arcs.iter().filter(|(a, b)| a == b).count()
    }

    pub fn without_loops(&self) -> MultiGraph {
        MultiGraph {
            node_count: self.node_count,
            arcs: self.arcs.iter().copied().filter(|(a, b)| a != b).collect(),
        }
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        (0..self.node_count).all(|v| self.degree(v) == degree)
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut dsu = crate::dsu::Dsu::new(self.node_count);
        for &(a, b) in &self.arcs {
            dsu.union(a, b);
        }
        dsu.labels().1 == 1
    }

    /// Adjacency of the underlying simple graph as bitmasks (loops dropped).
    ///
    /// # Panics
    /// If the graph has more than 64 nodes.
    pub fn simple_adjacency(&self) -> Vec<u64> {
        assert!(self.node_count <= 64, "bitmask adjacency needs at most 64 nodes");
        let mut adj = vec![0u64; self.node_count];
        for &(a, b) in &self.arcs {
            if a != b {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        adj
    }

    /// Arc multiplicities between distinct nodes, as a dense matrix.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0u32; self.node_count]; self.node_count];
        for &(a, b) in &self.arcs {
            if a != b {
                m[a][b] += 1;
                m[b][a] += 1;
            }
        }
        m
    }

    /// Number of non-loop arcs with exactly one endpoint in `side` (a bitmask).
    pub fn cut_size(&self, side: u64) -> usize {
        self.arcs
            .iter()
            .filter(|&&(a, b)| ((side >> a) & 1) != ((side >> b) & 1))
            .count()
    }

    /// Parses the edge-list format: a header `n M`, then `M` lines `u v`.
    /// `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<MultiGraph, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut arcs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let nums: Vec<usize> = content
                .split_whitespace()
                .map(|w| {
                    w.parse()
                        .map_err(|_| malformed(line, format!("not a nonnegative integer: `{w}`")))
                })
                .collect::<Result<_, _>>()?;
            if nums.len() != 2 {
                return Err(malformed(line, "expected two integers"));
            }
            match header {
                None => header = Some((nums[0], nums[1])),
                Some((n, _)) => {
                    if nums[0] >= n || nums[1] >= n {
                        return Err(malformed(line, format!("node out of range (have {n})")));
                    }
                    arcs.push((nums[0], nums[1]));
                }
            }
        }
        let (n, m) = header.ok_or_else(|| malformed(0, "missing header `n M`"))?;
        if arcs.len() != m {
            return Err(malformed(
                0,
                format!("header announces {m} arcs, found {}", arcs.len()),
            ));
        }
        Ok(MultiGraph::new(n, arcs))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count, self.arcs.len());
        for &(a, b) in &self.arcs {
            writeln!(out, "{a} {b}").unwrap();
        }
        out
    }

    /// The Petersen graph with outer 5-cycle `0..5` and inner 5-cycle
    /// `5..10`, each numbered along itself; spokes `0-5, 1-8, 2-6, 3-9, 4-7`.
    /// In this labelling the identity ordering has largest cutset 6.
    pub fn petersen() -> MultiGraph {
        const SPOKE: [usize; 5] = [5, 8, 6, 9, 7];
        let mut arcs = Vec::new();
        for i in 0..5 {
            arcs.push((i, (i + 1) % 5));
            arcs.push((i, SPOKE[i]));
            arcs.push((5 + i, 5 + (i + 1) % 5));
        }
        MultiGraph::new(10, arcs)
    }

    pub fn complete(n: usize) -> MultiGraph {
        MultiGraph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    pub fn cycle(n: usize) -> MultiGraph {
        MultiGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> MultiGraph {
        MultiGraph::new(n, (1..n).map(|i| (i - 1, i)))
    }
}

/// Dual graph: one node per tetrahedron, one arc per face gluing. Self-glued
/// faces give loops.
pub fn build_dual(tri: &Triangulation) -> MultiGraph {
    MultiGraph::new(
        tri.tet_count(),
        tri.gluing_pairs().map(|(t, _, g)| (t, g.tet)),
    )
}

/// Random connected `degree`-regular multigraph from the pairing model,
/// rejecting samples until one is connected (and loop-free if requested).
pub fn random_regular_multigraph<R: Rng>(
    n: usize,
    degree: usize,
    allow_loops: bool,
    rng: &mut R,
) -> MultiGraph {
    assert!((n * degree).is_multiple_of(2), "n * degree must be even");
    assert!(n >= 2 || allow_loops, "a loop-free regular graph needs two nodes");
    loop {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
        points.shuffle(rng);
        let arcs: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0], c[1])).collect();
        if !allow_loops && arcs.iter().any(|(a, b)| a == b) {
            continue;
        }
        let g = MultiGraph::new(n, arcs);
        if g.is_connected() {
            return g;
        }
    }
}

/// Random connected multigraph on `n` nodes: a random spanning tree plus
/// `extra` further arcs (loops possible when `allow_loops`).
pub fn random_connected_multigraph<R: Rng>(
    n: usize,
    extra: usize,
    allow_loops: bool,
    rng: &mut R,
) -> MultiGraph {
    let mut arcs = Vec::new();
    for v in 1..n {
        arcs.push((rng.gen_range(0..v), v));
    }
    let mut added = 0;
    while added < extra && n > 0 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b && !allow_loops {
            if n == 1 {
                break;
            }
            continue;
        }
        arcs.push((a, b));
        added += 1;
    }
    MultiGraph::new(n, arcs)
}

/// A node ordering together with its cutset sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearLayout {
    pub ordering: Vec<usize>,
    pub cut_profile: Vec<usize>,
}

impl LinearLayout {
    pub fn new(graph: &MultiGraph, ordering: Vec<usize>) -> Result<Self, GraphError> {
        let cut_profile = cut_profile(graph, &ordering)?;
        Ok(LinearLayout {
            ordering,
            cut_profile,
        })
    }

    /// Largest cutset, 0 for fewer than two nodes.
    pub fn width(&self) -> usize {
        self.cut_profile.iter().copied().max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let nodes: Vec<String> = self.ordering.iter().map(|v| v.to_string()).collect();
        format!("layout {}\n", nodes.join(" "))
    }

    /// Parses `layout v0 v1 ...` (the list may wrap over several lines).
    pub fn parse_ordering(text: &str) -> Result<Vec<usize>, GraphError> {
        let mut words = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        if words.next() != Some("layout") {
            return Err(malformed(1, "expected `layout` keyword"));
        }
        words
            .map(|w| {
                w.parse()
                    .map_err(|_| malformed(1, format!("not a node index: `{w}`")))
            })
            .collect()
    }
}

fn check_permutation(n: usize, order: &[usize]) -> Result<(), GraphError> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(GraphError::NotAPermutation(n));
    }
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(GraphError::NotAPermutation(n));
        }
    }
    Ok(())
}

/// Sizes of the cutsets `C_1 .. C_{n-1}` of an ordering: `C_l` holds the
/// arcs from the first `l` nodes to the rest. Loops are never counted.
pub fn cut_profile(graph: &MultiGraph, order: &[usize]) -> Result<Vec<usize>, GraphError> {
    let n = graph.node_count();
    check_permutation(n, order)?;
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    // +1 at the earlier endpoint's position, -1 at the later one's.
    let mut delta = vec![0i64; n + 1];
    for &(a, b) in graph.arcs() {
        if a == b {
            continue;
        }
        let (p, q) = (position[a].min(position[b]), position[a].max(position[b]));
        delta[p] += 1;
        delta[q] -= 1;
    }
    let mut profile = Vec::with_capacity(n.saturating_sub(1));
    let mut running = 0i64;
    for d in delta.iter().take(n.saturating_sub(1)) {
        running += d;
        profile.push(running as usize);
    }
    Ok(profile)
}

/// An unrooted binary tree whose leaves are labelled by the guest nodes.
/// A single-node host (no arcs) is allowed for one-node guests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostTree {
    node_count: usize,
    arcs: Vec<(usize, usize)>,
    /// `leaf_of[guest]` is the host leaf carrying that guest node.
    leaf_of: Vec<usize>,
}

impl HostTree {
    pub fn new(
        node_count: usize,
        arcs: Vec<(usize, usize)>,
        leaf_of: Vec<usize>,
    ) -> Result<Self, GraphError> {
        let invalid = |s: String| Err(GraphError::InvalidHost(s));
        if node_count == 0 {
            return invalid("host has no nodes".into());
        }
        if arcs.len() + 1 != node_count {
            return invalid(format!(
                "a tree on {node_count} nodes has {} arcs, got {}",
                node_count - 1,
                arcs.len()
            ));
        }
        let mut degree = vec![0; node_count];
        let mut dsu = crate::dsu::Dsu::new(node_count);
        for &(a, b) in &arcs {
            if a >= node_count || b >= node_count || a == b {
                return invalid(format!("bad arc ({a},{b})"));
            }
            degree[a] += 1;
            degree[b] += 1;
            dsu.union(a, b);
        }
        if dsu.labels().1 != 1 {
            return invalid("host is not connected".into());
        }
        if node_count > 1 {
            if let Some(v) = (0..node_count).find(|&v| degree[v] != 1 && degree[v] != 3) {
                return invalid(format!("host node {v} has degree {}", degree[v]));
            }
        }
        let leaves = (0..node_count).filter(|&v| degree[v] <= 1).count();
        if leaf_of.len() != leaves {
            return invalid(format!(
                "{} guest nodes for {leaves} host leaves",
                leaf_of.len()
            ));
        }
        let mut used = vec![false; node_count];
        for (guest, &h) in leaf_of.iter().enumerate() {
            if h >= node_count || degree[h] > 1 {
                return invalid(format!("guest {guest} is not mapped to a leaf"));
            }
            if std::mem::replace(&mut used[h], true) {
                return invalid(format!("leaf {h} carries two guest nodes"));
            }
        }
        Ok(HostTree {
            node_count,
            arcs,
            leaf_of,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn leaf_of(&self, guest: usize) -> usize {
        self.leaf_of[guest]
    }

    pub fn guest_count(&self) -> usize {
        self.leaf_of.len()
    }

    /// Guest node carried by a host node, if it is a leaf.
    pub fn guest_at(&self, host_node: usize) -> Option<usize> {
        self.leaf_of.iter().position(|&h| h == host_node)
    }

    pub fn neighbors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (i, &(a, b)) in self.arcs.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    /// For each host arc, the guest nodes on the side of its second endpoint
    /// `arcs[i].1`, as a sorted list.
    pub fn arc_sides(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbors();
        self.arcs
            .iter()
            .map(|&(a, b)| {
                let mut side = Vec::new();
                let mut stack = vec![(b, a)];
                while let Some((v, from)) = stack.pop() {
                    if let Some(g) = self.guest_at(v) {
                        side.push(g);
                    }
                    for &(w, _) in &adj[v] {
                        if w != from {
                            stack.push((w, v));
                        }
                    }
                }
                side.sort_unstable();
                side
            })
            .collect()
    }

    /// Number of guest arcs routed through each host arc.
    pub fn loads(&self, graph: &MultiGraph) -> Result<Vec<usize>, GraphError> {
        self.check_guest(graph)?;
        let adj = self.neighbors();
        // Root at node 0; parent arcs and depths.
        let mut parent = vec![(usize::MAX, usize::MAX); self.node_count];
        let mut depth = vec![0usize; self.node_count];
        let mut order = vec![0];
        let mut visited = vec![false; self.node_count];
        visited[0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &(w, arc) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = (v, arc);
                    depth[w] = depth[v] + 1;
                    order.push(w);
                }
            }
        }
        let mut load = vec![0; self.arcs.len()];
        for &(a, b) in graph.arcs() {
            if a == b {
                continue;
            }
            let (mut x, mut y) = (self.leaf_of[a], self.leaf_of[b]);
            while x != y {
                if depth[x] < depth[y] {
                    std::mem::swap(&mut x, &mut y);
                }
                load[parent[x].1] += 1;
                x = parent[x].0;
            }
        }
        Ok(load)
    }

    fn check_guest(&self, graph: &MultiGraph) -> Result<(), GraphError> {
        if graph.node_count() != self.leaf_of.len() {
            return Err(GraphError::InvalidHost(format!(
                "host has {} leaves but the graph has {} nodes",
                self.leaf_of.len(),
                graph.node_count()
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("host {}\n", self.node_count);
        for (g, &h) in self.leaf_of.iter().enumerate() {
            writeln!(out, "leaf {g} {h}").unwrap();
        }
        for &(a, b) in &self.arcs {
            writeln!(out, "arc {a} {b}").unwrap();
        }
        out
    }

    /// Parses `host N`, then `leaf guest hostnode` and `arc a b` lines.
    pub fn parse(text: &str) -> Result<HostTree, GraphError> {
        let mut node_count = None;
        let mut leaves: Vec<(usize, usize)> = Vec::new();
        let mut arcs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut words = content.split_whitespace();
            let keyword = words.next().unwrap_or("");
            let nums: Vec<usize> = words
                .map(|w| {
                    w.parse()
                        .map_err(|_| malformed(line, format!("not a nonnegative integer: `{w}`")))
                })
                .collect::<Result<_, _>>()?;
            match (keyword, nums.as_slice()) {
                ("host", [n]) if node_count.is_none() => node_count = Some(*n),
                ("leaf", [g, h]) => leaves.push((*g, *h)),
                ("arc", [a, b]) => arcs.push((*a, *b)),
                _ => return Err(malformed(line, format!("unexpected line `{content}`"))),
            }
        }
        let n = node_count.ok_or_else(|| malformed(0, "missing header `host N`"))?;
        let mut leaf_of = vec![usize::MAX; leaves.len()];
        for (g, h) in leaves {
            if g >= leaf_of.len() || leaf_of[g] != usize::MAX {
                return Err(GraphError::InvalidHost(format!("bad leaf line for guest {g}")));
            }
            leaf_of[g] = h;
        }
        HostTree::new(n, arcs, leaf_of)
    }

    /// Caterpillar host following a node ordering: the spine arcs realise
    /// the ordering's prefix cuts.
    pub fn caterpillar(order: &[usize]) -> HostTree {
        let n = order.len();
        match n {
            0 => panic!("empty ordering"),
            1 => return HostTree::new(1, vec![], vec![0]).expect("single leaf"),
            2 => {
                let mut leaf_of = vec![0; 2];
                leaf_of[order[0]] = 0;
                leaf_of[order[1]] = 1;
                return HostTree::new(2, vec![(0, 1)], leaf_of).expect("single arc");
            }
            _ => {}
        }
        // Leaves 0..n, spine n..2n-2 carrying order[1..n-1].
        let mut leaf_of = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            leaf_of[v] = i;
        }
        let spine = |i: usize| n + i - 1;
        let mut arcs = vec![(0, spine(1)), (n - 1, spine(n - 2))];
        for i in 1..n - 1 {
            arcs.push((i, spine(i)));
            if i + 1 < n - 1 {
                arcs.push((spine(i), spine(i + 1)));
            }
        }
        HostTree::new(2 * n - 2, arcs, leaf_of).expect("caterpillar is a binary tree")
    }
}

/// Largest number of guest arcs routed through one host arc.
pub fn congestion_of(graph: &MultiGraph, host: &HostTree) -> Result<usize, GraphError> {
    Ok(host.loads(graph)?.into_iter().max().unwrap_or(0))
}
