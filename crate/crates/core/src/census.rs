//! Exhaustive enumeration of small closed orientable triangulations, up to
//! relabelling of tetrahedra and their corners.
//!
//! Tables are built face by face, always gluing the lowest unglued face.
//! Orientability lets every gluing be an odd corner map (orient every
//! tetrahedron positively), and a tetrahedron entered for the first time can
//! be relabelled so that it is entered through face 0 by one fixed map. This
//! keeps every table connected and cuts most symmetric duplicates early; the
//! rest are removed by a canonical form.

use crate::perm::Perm4;
use crate::tri::{check_orientable, validate_closed, Triangulation};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest census size supported.
pub const MAX_CENSUS_TETS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("census is limited to {MAX_CENSUS_TETS} tetrahedra, got {0}")]
    TooLarge(usize),
}

/// Corner map used to enter a fresh tetrahedron through face 0.
fn entry_map(face: usize) -> Perm4 {
    Perm4::all()
        .find(|p| p.apply(face) == 0 && p.sign() < 0)
        .expect("an odd map exists")
}

fn odd_maps(face: usize, target: usize) -> Vec<Perm4> {
    Perm4::all()
        .filter(|p| p.apply(face) == target && p.sign() < 0)
        .collect()
}

fn search(tri: &mut Triangulation, used: usize, n: usize, out: &mut Vec<Triangulation>) {
    let next = (0..used).flat_map(|t| (0..4).map(move |f| (t, f))).find(|&(t, f)| tri.gluing(t, f).is_none());
    let Some((t, f)) = next else {
        if used == n {
            out.push(tri.clone());
        }
        return;
    };
    if used < n {
        tri.glue(t, f, used, 0, entry_map(f)).expect("fresh face is free");
        search(tri, used + 1, n, out);
        tri.unglue(t, f);
    }
    for t2 in t..used {
        for f2 in 0..4 {
            if (t2, f2) <= (t, f) || tri.gluing(t2, f2).is_some() {
                continue;
            }
            for p in odd_maps(f, f2) {
                tri.glue(t, f, t2, f2, p).expect("both faces are free");
                search(tri, used, n, out);
                tri.unglue(t, f);
            }
        }
    }
}

/// Canonical form: the smallest relabelled gluing sequence over every
/// choice of starting tetrahedron and corner labelling.
pub fn canonical_key(tri: &Triangulation) -> Vec<u8> {
    let n = tri.tet_count();
    let mut best: Option<Vec<u8>> = None;
    for start in 0..n {
        for sigma in Perm4::all() {
            // relabel[t] = (new index, old corner -> new corner)
            let mut relabel: Vec<Option<(usize, Perm4)>> = vec![None; n];
            relabel[start] = Some((0, sigma));
            let mut order = vec![start];
            let mut code = Vec::with_capacity(12 * n);
            let mut i = 0;
            while i < order.len() {
                let t = order[i];
                i += 1;
                let (_, s) = relabel[t].expect("queued tets are labelled");
                let s_inv = s.inverse();
                for g in 0..4 {
                    let f = s_inv.apply(g);
                    let Some(gl) = tri.gluing(t, f) else {
                        code.extend([u8::MAX; 3]);
                        continue;
                    };
                    if relabel[gl.tet].is_none() {
                        // choose the partner labelling that makes this map the identity
                        relabel[gl.tet] = Some((order.len(), s.compose(gl.perm.inverse())));
                        order.push(gl.tet);
                    }
                    let (idx, s2) = relabel[gl.tet].expect("just labelled");
                    let perm = s2.compose(gl.perm).compose(s_inv);
                    let images = perm.images();
                    code.push(idx as u8);
                    code.push(s2.apply(gl.face) as u8);
                    code.push(images[0] * 64 + images[1] * 16 + images[2] * 4 + images[3]);
                }
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

/// All valid closed orientable connected triangulations with exactly `n`
/// tetrahedra, one per isomorphism class, ordered by canonical form.
pub fn census_of_size(n: usize) -> Result<Vec<Triangulation>, CensusError> {
    if n > MAX_CENSUS_TETS {
        return Err(CensusError::TooLarge(n));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let mut tables = Vec::new();
    search(&mut Triangulation::new(n), 1, n, &mut tables);
    let keyed: Vec<(Vec<u8>, Triangulation)> = tables
        .into_par_iter()
        .filter(|t| validate_closed(t).is_valid() && check_orientable(t))
        .map(|t| (canonical_key(&t), t))
        .collect();
    let unique: BTreeMap<Vec<u8>, Triangulation> = keyed.into_iter().rev().collect();
    Ok(unique.into_values().collect())
}

/// The census for every size from 1 to `max_tets`.
pub fn census(max_tets: usize) -> Result<Vec<Triangulation>, CensusError> {
    if max_tets > MAX_CENSUS_TETS {
        return Err(CensusError::TooLarge(max_tets));
    }
    let mut all = Vec::new();
    for n in 1..=max_tets {
        all.extend(census_of_size(n)?);
    }
    Ok(all)
}
