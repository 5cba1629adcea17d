//! Brute-force width oracles shared by the integration tests: plain
//! enumeration of every ordering and every binary host tree.
#![allow(dead_code)]

use widthlab_core::dual::MultiGraph;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn neighbour_sets(g: &MultiGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in g.arcs() {
        if a != b {
            adj[a][b] = true;
            adj[b][a] = true;
        }
    }
    adj
}

/// Eliminates nodes one by one on an explicit adjacency matrix.
pub fn brute_treewidth(g: &MultiGraph) -> usize {
    let n = g.node_count();
    permutations(n)
        .into_iter()
        .map(|order| {
            let mut adj = neighbour_sets(g);
            let mut gone = vec![false; n];
            let mut width = 0;
            for &v in &order {
                let nb: Vec<usize> = (0..n).filter(|&u| !gone[u] && adj[v][u]).collect();
                width = width.max(nb.len());
                for &a in &nb {
                    for &b in &nb {
                        if a != b {
                            adj[a][b] = true;
                        }
                    }
                }
                gone[v] = true;
            }
            width
        })
        .min()
        .unwrap()
}

/// Vertex separation: max over prefixes of the prefix nodes with a later
/// neighbour.
pub fn brute_pathwidth(g: &MultiGraph) -> usize {
    let n = g.node_count();
    let adj = neighbour_sets(g);
    permutations(n)
        .into_iter()
        .map(|order| {
            (1..=n)
                .map(|i| {
                    order[..i]
                        .iter()
                        .filter(|&&u| order[i..].iter().any(|&w| adj[u][w]))
                        .count()
                })
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap()
}

pub fn brute_cutwidth(g: &MultiGraph) -> usize {
    let n = g.node_count();
    permutations(n)
        .into_iter()
        .map(|order| {
            let mut pos = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            (0..n.saturating_sub(1))
                .map(|i| {
                    g.arcs()
                        .iter()
                        .filter(|&&(a, b)| (pos[a] <= i) != (pos[b] <= i))
                        .count()
                })
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap()
}

/// All binary host trees with leaves 0..n, by inserting each new leaf into
/// every arc of a smaller tree. Internal nodes are numbered from n.
pub fn host_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n >= 2);
    let mut trees = vec![vec![(0usize, 1usize)]];
    for leaf in 2..n {
        let mut next = Vec::new();
        for t in &trees {
            let fresh = n + leaf - 2;
            for i in 0..t.len() {
                let (a, b) = t[i];
                let mut u = t.clone();
                u[i] = (a, fresh);
                u.push((fresh, b));
                u.push((fresh, leaf));
                next.push(u);
            }
        }
        trees = next;
    }
    trees
}

pub fn brute_congestion(g: &MultiGraph) -> usize {
    let n = g.node_count();
    if n < 2 {
        return 0;
    }
    host_trees(n)
        .into_iter()
        .map(|arcs| {
            let m = 2 * n - 2;
            (0..arcs.len())
                .map(|skip| {
                    // leaves on one side of arc `skip`
                    let mut side = vec![false; m];
                    side[arcs[skip].0] = true;
                    let mut changed = true;
                    while changed {
                        changed = false;
                        for (k, &(a, b)) in arcs.iter().enumerate() {
                            if k != skip && side[a] != side[b] {
                                side[a] = true;
                                side[b] = true;
                                changed = true;
                            }
                        }
                    }
                    g.arcs().iter().filter(|&&(a, b)| side[a] != side[b]).count()
                })
                .max()
                .unwrap()
        })
        .min()
        .unwrap()
}
