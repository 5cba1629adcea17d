//! Nice tree decompositions: every node is a leaf, an introduce, a forget
//! or a binary join. Leaves hold a single graph node, and the root keeps the
//! bag of the root of the input decomposition (bag 0).

use super::decomposition::{write_bag, TreeDecomposition};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "node", rename_all = "snake_case")]
pub enum BagKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceNode {
    pub kind: BagKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// The underlying (plain) tree decomposition.
    pub fn to_tree(&self) -> TreeDecomposition {
        TreeDecomposition {
            bags: self.nodes.iter().map(|n| n.bag.clone()).collect(),
            tree_arcs: self
                .nodes
                .iter()
                .enumerate()
                .flat_map(|(i, n)| n.children.iter().map(move |&c| (c, i)))
                .collect(),
        }
    }

    /// Checks the local shape rules of every node.
    pub fn is_nice(&self) -> bool {
        self.nodes.iter().all(|node| {
            let child = |k: usize| &self.nodes[node.children[k]].bag;
            match node.kind {
                BagKind::Leaf => node.children.is_empty() && node.bag.len() <= 1,
                BagKind::Introduce(v) => {
                    node.children.len() == 1
                        && !child(0).contains(&v)
                        && with(child(0), v) == node.bag
                }
                BagKind::Forget(v) => {
                    node.children.len() == 1
                        && !node.bag.contains(&v)
                        && with(&node.bag, v) == *child(0)
                }
                BagKind::Join => {
                    node.children.len() == 2 && *child(0) == node.bag && *child(1) == node.bag
                }
            }
        })
    }

    /// ```text
    /// nice <node count> <width> <root>
    /// bag <id> <kind> [node] : <nodes...>
    /// child <parent> <child>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!("nice {} {} {}\n", self.nodes.len(), self.width(), self.root);
        for (i, node) in self.nodes.iter().enumerate() {
            let kind = match node.kind {
                BagKind::Leaf => "leaf".to_string(),
                BagKind::Introduce(v) => format!("introduce {v}"),
                BagKind::Forget(v) => format!("forget {v}"),
                BagKind::Join => "join".to_string(),
            };
            write_bag(&mut out, i, Some(&kind), &node.bag);
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for c in &node.children {
                writeln!(out, "child {i} {c}").unwrap();
            }
        }
        out
    }
}

fn with(bag: &[usize], v: usize) -> Vec<usize> {
    let mut b = bag.to_vec();
    b.push(v);
    b.sort_unstable();
    b
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: BagKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    /// Forgets then introduces nodes one at a time until the bag is `target`.
    fn morph(&mut self, mut at: usize, target: &[usize]) -> usize {
        let current = self.nodes[at].bag.clone();
        let mut bag = current.clone();
        for &v in current.iter().filter(|v| !target.contains(v)) {
            bag.retain(|&u| u != v);
            at = self.push(BagKind::Forget(v), bag.clone(), vec![at]);
        }
        for &v in target.iter().filter(|v| !current.contains(v)) {
            bag = with(&bag, v);
            at = self.push(BagKind::Introduce(v), bag.clone(), vec![at]);
        }
        at
    }
}

/// Converts a tree decomposition (rooted at bag 0) into a nice one of the
/// same width.
///
/// # Panics
/// If `td` has no bags or its arcs do not form a tree.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let m = td.bags.len();
    assert!(m > 0, "decomposition has no bags");
    let mut nb = vec![Vec::new(); m];
    for &(a, b) in &td.tree_arcs {
        nb[a].push(b);
        nb[b].push(a);
    }
    // Preorder from bag 0, processed in reverse so children come first.
    let mut parent = vec![usize::MAX; m];
    let mut preorder = Vec::with_capacity(m);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        preorder.push(x);
        for &y in &nb[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    assert_eq!(preorder.len(), m, "decomposition tree is disconnected");
    let bags: Vec<Vec<usize>> = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();

    let mut builder = Builder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; m];
    for &x in preorder.iter().rev() {
        let target = &bags[x];
        let kids: Vec<usize> = nb[x].iter().copied().filter(|&y| parent[y] == x && y != x).collect();
        let mut branches: Vec<usize> = kids
            .iter()
            .map(|&y| builder.morph(top[y], target))
            .collect();
        if branches.is_empty() {
            let leaf_bag: Vec<usize> = target.iter().take(1).copied().collect();
            let leaf = builder.push(BagKind::Leaf, leaf_bag, vec![]);
            branches.push(builder.morph(leaf, target));
        }
        let mut at = branches[0];
        for &b in &branches[1..] {
            at = builder.push(BagKind::Join, target.clone(), vec![at, b]);
        }
        top[x] = at;
    }
    NiceTreeDecomposition {
        root: top[0],
        nodes: builder.nodes,
    }
}
