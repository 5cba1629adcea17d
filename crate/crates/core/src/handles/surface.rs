//! Closed triangulated surfaces: components, Euler characteristics, genera.

use super::HandleError;
use crate::dsu::Dsu;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A closed orientable surface, possibly empty or disconnected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    /// Genus of each component, non-increasing.
    pub component_genera: Vec<usize>,
    pub total_genus: usize,
    /// Sum over components of `max(0, 2g - 1)`.
    pub complexity: usize,
    pub euler: i64,
}

impl SurfaceSummary {
    pub fn from_genera(mut genera: Vec<usize>) -> Self {
        genera.sort_unstable_by(|a, b| b.cmp(a));
        SurfaceSummary {
            total_genus: genera.iter().sum(),
            complexity: genera.iter().map(|&g| (2 * g).saturating_sub(1)).sum(),
            euler: genera.iter().map(|&g| 2 - 2 * g as i64).sum(),
            component_genera: genera,
        }
    }

    pub fn components(&self) -> usize {
        self.component_genera.len()
    }
}

/// Complexity `c(S)`: `max(0, 2g - 1)` per component, summed.
pub fn c_complexity(s: &SurfaceSummary) -> usize {
    s.component_genera.iter().map(|&g| (2 * g).saturating_sub(1)).sum()
}

/// Summarizes the surface made of the given triangles (vertex triples).
/// Every edge must lie in exactly two triangles.
pub(super) fn summarize(triangles: &[[usize; 3]]) -> Result<SurfaceSummary, HandleError> {
    let mut local: HashMap<usize, usize> = HashMap::new();
    let tris: Vec<[usize; 3]> = triangles
        .iter()
        .map(|t| {
            t.map(|v| {
                let next = local.len();
                *local.entry(v).or_insert(next)
            })
        })
        .collect();
    let vcount = local.len();

    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let mut dsu = Dsu::new(vcount);
    for t in &tris {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            *edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            dsu.union(a, b);
        }
    }
    if let Some((e, c)) = edges.iter().find(|(_, &c)| c != 2) {
        return Err(HandleError::SurfaceDefect(format!(
            "edge {e:?} lies in {c} triangles"
        )));
    }
    let (comp, ncomp) = dsu.labels();
    let mut chi = vec![0i64; ncomp];
    for c in &comp {
        chi[*c] += 1;
    }
    for &(a, _) in edges.keys() {
        chi[comp[a]] -= 1;
    }
    for t in &tris {
        chi[comp[t[0]]] += 1;
    }
    let mut genera = Vec::with_capacity(ncomp);
    for (i, &x) in chi.iter().enumerate() {
        if x > 2 || x % 2 != 0 {
            return Err(HandleError::SurfaceDefect(format!(
                "component {i} has Euler characteristic {x}"
            )));
        }
        genera.push(((2 - x) / 2) as usize);
    }
    Ok(SurfaceSummary::from_genera(genera))
}
