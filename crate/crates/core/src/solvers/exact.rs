//! Exact subset dynamic programs.
//!
//! Each of tw, pw and cw is a minimum over node orderings of a maximum over
//! prefixes, so one table indexed by the set `S` of already-placed nodes
//! holds the best achievable value for the remaining nodes. The table is
//! filled from the full set downwards; the witness ordering is then read off
//! forwards, always taking the smallest node that keeps the optimum
//! reachable, which yields the lexicographically smallest optimal ordering.

use crate::dual::MultiGraph;

/// Nodes reachable from `v` through `placed`, excluding `placed` and `v`:
/// the later neighbours of `v` in the fill graph when `placed` is
/// eliminated first.
#[inline]
fn fill_neighbours(adj: &[u64], placed: u64, v: usize) -> u64 {
    let mut comp = 1u64 << v;
    let mut frontier = comp;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[u];
        }
        next &= placed & !comp;
        comp |= next;
        frontier = next;
    }
    let mut reach = 0u64;
    let mut c = comp;
    while c != 0 {
        let u = c.trailing_zeros() as usize;
        c &= c - 1;
        reach |= adj[u];
    }
    reach & !placed & !(1u64 << v)
}

/// Generic "min over orderings of max over steps" table. `step_cost(S, v)`
/// is the cost of placing `v` right after the set `S`.
fn ordering_table(n: usize, step_cost: impl Fn(u64, usize) -> u32) -> Vec<u32> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let size = 1usize << n;
    let mut best = vec![u32::MAX; size];
    best[full as usize] = 0;
    for s in (0..full).rev() {
        let mut value = u32::MAX;
        let mut rest = full & !s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let after = best[(s | 1 << v) as usize];
            if after >= value {
                continue;
            }
            let c = step_cost(s, v).max(after);
            value = value.min(c);
        }
        best[s as usize] = value;
    }
    best
}

fn read_ordering(n: usize, best: &[u32], step_cost: impl Fn(u64, usize) -> u32) -> Vec<usize> {
    let optimum = best[0];
    let mut placed = 0u64;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .find(|&v| {
                placed & (1 << v) == 0
                    && step_cost(placed, v) <= optimum
                    && best[(placed | 1 << v) as usize] <= optimum
            })
            .expect("optimal continuation exists");
        placed |= 1 << v;
        order.push(v);
    }
    order
}

/// Treewidth and an optimal elimination ordering.
pub(crate) fn treewidth(graph: &MultiGraph) -> (usize, Vec<usize>) {
    let n = graph.node_count();
    if n == 0 {
        return (0, vec![]);
    }
    let adj = graph.simple_adjacency();
    let cost = |s: u64, v: usize| fill_neighbours(&adj, s, v).count_ones();
    let best = ordering_table(n, cost);
    (best[0] as usize, read_ordering(n, &best, cost))
}

/// Vertex separation number (= pathwidth) and an optimal ordering.
pub(crate) fn pathwidth(graph: &MultiGraph) -> (usize, Vec<usize>) {
    let n = graph.node_count();
    if n == 0 {
        return (0, vec![]);
    }
    let adj = graph.simple_adjacency();
    // Placing v after S: the boundary of S ∪ {v} is the part still adjacent
    // to unplaced nodes.
    let cost = |s: u64, v: usize| {
        let placed = s | 1 << v;
        let mut boundary = 0;
        let mut p = placed;
        while p != 0 {
            let u = p.trailing_zeros() as usize;
            p &= p - 1;
            if adj[u] & !placed != 0 {
                boundary += 1;
            }
        }
        boundary
    };
    let best = ordering_table(n, cost);
    (best[0] as usize, read_ordering(n, &best, cost))
}

/// Cut sizes of all subsets, arcs counted with multiplicity, loops ignored.
pub(crate) fn all_cuts(graph: &MultiGraph) -> Vec<u32> {
    let n = graph.node_count();
    let mult = graph.multiplicity_matrix();
    let degree: Vec<u32> = (0..n).map(|v| mult[v].iter().sum()).collect();
    let mut cut = vec![0u32; 1 << n];
    for s in 1usize..1 << n {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let mut inner = 0;
        let mut r = rest;
        while r != 0 {
            let u = r.trailing_zeros() as usize;
            r &= r - 1;
            inner += mult[v][u];
        }
        cut[s] = cut[rest] + degree[v] - 2 * inner;
    }
    cut
}

/// Cutwidth and the lexicographically smallest optimal ordering.
pub(crate) fn cutwidth(graph: &MultiGraph) -> (usize, Vec<usize>) {
    let n = graph.node_count();
    if n <= 1 {
        return (0, (0..n).collect());
    }
    let cut = all_cuts(graph);
    let full = (1usize << n) - 1;
    // The last placement (the full set) has cut 0 and is not a cutset.
    let cost = |s: u64, v: usize| {
        let t = (s | 1 << v) as usize;
        if t == full {
            0
        } else {
            cut[t]
        }
    };
    let best = ordering_table(n, cost);
    (best[0] as usize, read_ordering(n, &best, cost))
}

/// Laminar family found by the carving DP: `splits[S]` is the chosen split
/// of `S` (the part containing the lowest node of `S`).
pub(crate) struct Carving {
    pub value: usize,
    /// The top split `(A, V \ A)`, `None` for a single node.
    pub top: Option<u64>,
    pub splits: Vec<u64>,
}

/// Congestion (carving width) by DP over subsets: the cost of a cluster is
/// the larger of its own cut and the best split of it into two clusters.
pub(crate) fn congestion(graph: &MultiGraph) -> Carving {
    let n = graph.node_count();
    if n <= 1 {
        return Carving {
            value: 0,
            top: None,
            splits: vec![],
        };
    }
    let cut = all_cuts(graph);
    let size = 1usize << n;
    let full = size - 1;
    let mut best = vec![u32::MAX; size];
    let mut splits = vec![0u64; size];
    for s in 1..full {
        if s & (s - 1) == 0 {
            best[s] = cut[s];
            continue;
        }
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut value = u32::MAX;
        let mut choice = 0;
        // A = low ∪ (proper submask of rest), ascending.
        let mut sub = 0usize;
        loop {
            let a = low | sub;
            if a != s {
                let b = s ^ a;
                let c = best[a].max(best[b]);
                if c < value {
                    value = c;
                    choice = a;
                }
            }
            if sub == rest {
                break;
            }
            sub = (sub.wrapping_sub(rest)) & rest;
        }
        best[s] = value.max(cut[s]);
        splits[s] = choice as u64;
    }
    let mut value = u32::MAX;
    let mut top = 0;
    let rest = full ^ 1;
    let mut sub = 0usize;
    loop {
        let a = 1 | sub;
        if a != full {
            let c = best[a].max(best[full ^ a]);
            if c < value {
                value = c;
                top = a;
            }
        }
        if sub == rest {
            break;
        }
        sub = (sub.wrapping_sub(rest)) & rest;
    }
    Carving {
        value: value as usize,
        top: Some(top as u64),
        splits,
    }
}
