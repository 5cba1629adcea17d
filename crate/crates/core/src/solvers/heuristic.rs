//! Seeded upper-bound heuristics for graphs too large for the exact tables.
//!
//! Every heuristic returns a witness, so its value is an upper bound that
//! can be checked without trusting the search. Restarts run in parallel but
//! each one owns an RNG derived from `(seed, restart)`, so results do not
//! depend on the thread count.

use super::{
    decomposition_from_elimination, path_decomposition_from_ordering, Param, SolverError,
    WidthReport, Witness,
};
use crate::dual::{cut_profile, GraphError, HostTree, LinearLayout, MultiGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;

fn rng_for(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn simple_adjacency(graph: &MultiGraph) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); graph.node_count()];
    for &(a, b) in graph.arcs() {
        if a != b {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    adj
}

/// Best of `restarts` seeded runs; ties go to the lowest restart index.
fn best_of<T: Send>(restarts: usize, run: impl Fn(usize) -> (usize, T) + Sync) -> (usize, T) {
    (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let (v, w) = run(r);
            (v, r, w)
        })
        .min_by_key(|&(v, r, _)| (v, r))
        .map(|(v, _, w)| (v, w))
        .expect("at least one restart")
}

/// Min-fill elimination with random tie-breaking.
fn min_fill_order(adj: &[BTreeSet<usize>], rng: &mut ChaCha8Rng) -> (usize, Vec<usize>) {
    let n = adj.len();
    let mut adj = adj.to_vec();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    let mut width = 0;
    while !alive.is_empty() {
        let mut best = Vec::new();
        let mut best_key = (usize::MAX, usize::MAX);
        for &v in &alive {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for (i, &a) in nb.iter().enumerate() {
                fill += nb[i + 1..].iter().filter(|&&b| !adj[a].contains(&b)).count();
            }
            let key = (fill, nb.len());
            if key < best_key {
                best_key = key;
                best.clear();
            }
            if key == best_key {
                best.push(v);
            }
        }
        let v = *best.choose(rng).expect("nonempty");
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        width = width.max(nb.len());
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nb {
            adj[a].remove(&v);
        }
        alive.remove(&v);
        order.push(v);
    }
    (width, order)
}

/// Greedy vertex separation: repeatedly place the node that leaves the
/// smallest boundary, preferring nodes already adjacent to the placed set.
fn greedy_separation_order(adj: &[BTreeSet<usize>], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = adj.len();
    let mut placed = vec![false; n];
    // open[v]: neighbours of v not yet placed
    let mut open: Vec<usize> = adj.iter().map(BTreeSet::len).collect();
    let mut boundary = 0usize;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = Vec::new();
        let mut best_key = (usize::MAX, usize::MAX);
        for v in (0..n).filter(|&v| !placed[v]) {
            // Neighbours whose last open arc is to v leave the boundary.
            let closed = adj[v]
                .iter()
                .filter(|&&u| placed[u] && open[u] == 1)
                .count();
            let stays = usize::from(open[v] > 0);
            let after = boundary + stays - closed;
            let touching = adj[v].iter().filter(|&&u| placed[u]).count();
            let key = (after, usize::MAX - touching);
            if key < best_key {
                best_key = key;
                best.clear();
            }
            if key == best_key {
                best.push(v);
            }
        }
        let v = *best.choose(rng).expect("nonempty");
        boundary = best_key.0;
        placed[v] = true;
        for &u in &adj[v] {
            open[u] -= 1;
        }
        order.push(v);
    }
    order
}

/// Simulated annealing on the cutwidth of an ordering, from `start`.
fn anneal_cutwidth(graph: &MultiGraph, start: Vec<usize>, rng: &mut ChaCha8Rng, steps: usize) -> (usize, Vec<usize>) {
    let n = start.len();
    let score = |order: &[usize]| -> (usize, usize) {
        let p = cut_profile(graph, order).expect("permutation");
        let max = p.iter().copied().max().unwrap_or(0);
        // secondary term: how many cuts reach the maximum
        (max, p.iter().filter(|&&c| c == max).count())
    };
    let mut current = start;
    let mut current_score = score(&current);
    let mut best = current.clone();
    let mut best_score = current_score;
    if n < 3 {
        return (best_score.0, best);
    }
    let mut temperature = 1.0f64;
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let mut candidate = current.clone();
        if rng.gen_bool(0.5) {
            candidate.swap(i, j);
        } else {
            let v = candidate.remove(i);
            candidate.insert(j, v);
        }
        let s = score(&candidate);
        let delta = (s.0 as f64 - current_score.0 as f64) * n as f64
            + (s.1 as f64 - current_score.1 as f64);
        if delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp() {
            current = candidate;
            current_score = s;
            if current_score < best_score {
                best = current.clone();
                best_score = current_score;
            }
        }
        temperature = (temperature * 0.999).max(0.05);
    }
    (best_score.0, best)
}

/// Best carving whose clusters are intervals of `order`.
fn interval_carving(graph: &MultiGraph, order: &[usize]) -> Result<(usize, HostTree), GraphError> {
    let n = order.len();
    if n == 1 {
        return Ok((0, HostTree::new(1, vec![], vec![0])?));
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    // cut[i][j]: arcs with exactly one endpoint in positions i..=j
    let mut cut = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in i..n {
            cut[i][j] = graph
                .arcs()
                .iter()
                .filter(|&&(a, b)| {
                    let ina = (i..=j).contains(&position[a]);
                    let inb = (i..=j).contains(&position[b]);
                    ina != inb
                })
                .count();
        }
    }
    let mut cost = vec![vec![0usize; n]; n];
    let mut split = vec![vec![0usize; n]; n];
    for len in 1..=n {
        for i in 0..=n - len {
            let j = i + len - 1;
            if len == 1 {
                cost[i][j] = cut[i][j];
                continue;
            }
            let (best, k) = (i..j)
                .map(|k| (cost[i][k].max(cost[k + 1][j]), k))
                .min()
                .expect("len >= 2");
            // the whole vertex set is not a cluster and has no cut
            cost[i][j] = if len == n { best } else { best.max(cut[i][j]) };
            split[i][j] = k;
        }
    }
    fn build(
        i: usize,
        j: usize,
        order: &[usize],
        split: &[Vec<usize>],
        arcs: &mut Vec<(usize, usize)>,
        next: &mut usize,
    ) -> usize {
        if i == j {
            return order[i];
        }
        let k = split[i][j];
        let l = build(i, k, order, split, arcs, next);
        let r = build(k + 1, j, order, split, arcs, next);
        let node = *next;
        *next += 1;
        arcs.push((node, l));
        arcs.push((node, r));
        node
    }
    let k = split[0][n - 1];
    let mut arcs = Vec::new();
    let mut next = n;
    let l = build(0, k, order, &split, &mut arcs, &mut next);
    let r = build(k + 1, n - 1, order, &split, &mut arcs, &mut next);
    arcs.push((l, r));
    Ok((cost[0][n - 1], HostTree::new(next, arcs, (0..n).collect())?))
}

/// Seeded upper bound for `param` with a witness. `restarts` independent
/// runs are made and the best kept.
pub fn heuristic_upper(
    graph: &MultiGraph,
    param: Param,
    seed: u64,
    restarts: usize,
) -> Result<WidthReport, SolverError> {
    let n = graph.node_count();
    if n == 0 {
        return Err(SolverError::Graph(GraphError::Malformed {
            line: 0,
            reason: "graph has no nodes".into(),
        }));
    }
    let adj = simple_adjacency(graph);
    let anneal_steps = 200 * n;
    let (value, witness) = match param {
        Param::Tw => {
            let (value, order) = best_of(restarts, |r| min_fill_order(&adj, &mut rng_for(seed, r)));
            (value, Witness::Tree(decomposition_from_elimination(graph, &order)))
        }
        Param::Pw => {
            let (value, pd) = best_of(restarts, |r| {
                let order = greedy_separation_order(&adj, &mut rng_for(seed, r));
                let pd = path_decomposition_from_ordering(graph, &order);
                (pd.width(), pd)
            });
            (value, Witness::Path(pd))
        }
        Param::Cw => {
            let (value, order) = best_of(restarts, |r| {
                let mut rng = rng_for(seed, r);
                let start = greedy_separation_order(&adj, &mut rng);
                anneal_cutwidth(graph, start, &mut rng, anneal_steps)
            });
            (value, Witness::Layout(LinearLayout::new(graph, order)?))
        }
        Param::Cng => {
            let (value, host) = best_of(restarts, |r| {
                let mut rng = rng_for(seed, r);
                let start = greedy_separation_order(&adj, &mut rng);
                let (_, order) = anneal_cutwidth(graph, start, &mut rng, anneal_steps);
                interval_carving(graph, &order).expect("interval carving is a valid host")
            });
            (value, Witness::Host(host))
        }
    };
    Ok(WidthReport {
        param,
        value,
        exact: false,
        witness,
    })
}
