//! Face orbits, validity and orientability of a triangulation.

use super::{face_mask, Triangulation, LOCAL_EDGES};
use crate::dsu::Dsu;
use serde::Serialize;

#[inline]
fn local_edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    LOCAL_EDGES.iter().position(|&e| e == (a, b)).expect("distinct corners")
}

/// Orbit labels of every local vertex, edge and triangle under the gluings.
///
/// Labels are dense and numbered by first appearance in `(tet, local index)`
/// order, so they are deterministic for a given gluing table.
#[derive(Clone, Debug)]
pub struct FaceLabels {
    pub vertex: Vec<[usize; 4]>,
    pub edge: Vec<[usize; 6]>,
    pub triangle: Vec<[usize; 4]>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
}

impl FaceLabels {
    pub fn new(tri: &Triangulation) -> Self {
        let n = tri.tet_count();
        let mut vdsu = Dsu::new(4 * n);
        let mut edsu = Dsu::new(6 * n);
        let mut fdsu = Dsu::new(4 * n);
        for (t, f, g) in tri.gluing_pairs() {
            fdsu.union(4 * t + f, 4 * g.tet + g.face);
            for v in (0..4).filter(|&v| v != f) {
                vdsu.union(4 * t + v, 4 * g.tet + g.perm.apply(v));
            }
            for &(a, b) in LOCAL_EDGES.iter().filter(|&&(a, b)| a != f && b != f) {
                let e = local_edge_index(a, b);
                let e2 = local_edge_index(g.perm.apply(a), g.perm.apply(b));
                edsu.union(6 * t + e, 6 * g.tet + e2);
            }
        }
        let (vl, vertex_count) = vdsu.labels();
        let (el, edge_count) = edsu.labels();
        let (fl, triangle_count) = fdsu.labels();
        FaceLabels {
            vertex: (0..n).map(|t| std::array::from_fn(|i| vl[4 * t + i])).collect(),
            edge: (0..n).map(|t| std::array::from_fn(|i| el[6 * t + i])).collect(),
            triangle: (0..n).map(|t| std::array::from_fn(|i| fl[4 * t + i])).collect(),
            vertex_count,
            edge_count,
            triangle_count,
        }
    }

    /// Orbit label of the local face spanned by the corners in `mask`, as
    /// `(dimension, label)`. The full mask is the tetrahedron itself.
    pub fn face_of(&self, tet: usize, mask: u8) -> (usize, usize) {
        match mask.count_ones() {
            1 => (0, self.vertex[tet][mask.trailing_zeros() as usize]),
            2 => {
                let a = mask.trailing_zeros() as usize;
                let b = (mask & !(1 << a)).trailing_zeros() as usize;
                (1, self.edge[tet][local_edge_index(a, b)])
            }
            3 => (2, self.triangle[tet][(0xF ^ mask).trailing_zeros() as usize]),
            4 => (3, tet),
            _ => panic!("empty face mask"),
        }
    }
}

/// Cell counts of a triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonSummary {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub tet_count: usize,
    pub euler: i64,
}

/// Orbit counts under all corner identifications. Works on any parsed
/// triangulation, valid or not.
pub fn skeleton(tri: &Triangulation) -> SkeletonSummary {
    let labels = FaceLabels::new(tri);
    let (v, e, f, t) = (
        labels.vertex_count,
        labels.edge_count,
        labels.triangle_count,
        tri.tet_count(),
    );
    SkeletonSummary {
        vertex_count: v,
        edge_count: e,
        triangle_count: f,
        tet_count: t,
        euler: v as i64 - e as i64 + f as i64 - t as i64,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    NotClosed { tet: usize, face: usize },
    EdgeReversed { edge: usize },
    BadVertexLink { vertex: usize, link_euler: i64 },
    Disconnected { components: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub all_faces_glued: bool,
    pub connected: bool,
    /// Edge orbits identified with themselves in reverse.
    pub reversed_edges: Vec<usize>,
    /// Euler characteristic of each vertex link, by vertex orbit.
    pub vertex_link_euler: Vec<i64>,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Oriented local edges `(t, a, b)` with `a != b`, indexed `16t + 4a + b`,
/// united under the gluings.
fn oriented_edge_classes(tri: &Triangulation) -> Dsu {
    let mut dsu = Dsu::new(16 * tri.tet_count());
    for (t, f, g) in tri.gluing_pairs() {
        for a in (0..4).filter(|&a| a != f) {
            for b in (0..4).filter(|&b| b != f && b != a) {
                dsu.union(
                    16 * t + 4 * a + b,
                    16 * g.tet + 4 * g.perm.apply(a) + g.perm.apply(b),
                );
            }
        }
    }
    dsu
}

/// Checks closedness, connectivity, edge orientations and vertex links.
pub fn validate_closed(tri: &Triangulation) -> ValidationReport {
    let n = tri.tet_count();
    let labels = FaceLabels::new(tri);
    let mut issues = Vec::new();

    for t in 0..n {
        for f in 0..4 {
            if tri.gluing(t, f).is_none() {
                issues.push(ValidationIssue::NotClosed { tet: t, face: f });
            }
        }
    }
    let all_faces_glued = issues.is_empty();

    let mut oriented = oriented_edge_classes(tri);
    let mut reversed = vec![false; labels.edge_count];
    for t in 0..n {
        for (e, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            if oriented.find(16 * t + 4 * a + b) == oriented.find(16 * t + 4 * b + a) {
                reversed[labels.edge[t][e]] = true;
            }
        }
    }
    let reversed_edges: Vec<usize> = (0..labels.edge_count).filter(|&e| reversed[e]).collect();
    issues.extend(
        reversed_edges
            .iter()
            .map(|&edge| ValidationIssue::EdgeReversed { edge }),
    );

    // Link of a vertex orbit: one triangle per corner, edges are the corner's
    // faces, vertices are the outgoing oriented edges.
    let mut link_edges = Dsu::new(16 * n);
    for (t, f, g) in tri.gluing_pairs() {
        for v in (0..4).filter(|&v| v != f) {
            link_edges.union(16 * t + 4 * v + f, 16 * g.tet + 4 * g.perm.apply(v) + g.face);
        }
    }
    let vc = labels.vertex_count;
    let mut faces = vec![0i64; vc];
    let mut link_vertex_seen = std::collections::HashSet::new();
    let mut link_edge_seen = std::collections::HashSet::new();
    let mut verts = vec![0i64; vc];
    let mut edges = vec![0i64; vc];
    for t in 0..n {
        for v in 0..4 {
            let orbit = labels.vertex[t][v];
            faces[orbit] += 1;
            for w in (0..4).filter(|&w| w != v) {
                if link_vertex_seen.insert((orbit, oriented.find(16 * t + 4 * v + w))) {
                    verts[orbit] += 1;
                }
                if link_edge_seen.insert(link_edges.find(16 * t + 4 * v + w)) {
                    edges[orbit] += 1;
                }
            }
        }
    }
    let vertex_link_euler: Vec<i64> = (0..vc).map(|i| verts[i] - edges[i] + faces[i]).collect();
    for (vertex, &chi) in vertex_link_euler.iter().enumerate() {
        if chi != 2 {
            issues.push(ValidationIssue::BadVertexLink {
                vertex,
                link_euler: chi,
            });
        }
    }

    let components = tri.component_count();
    if components > 1 {
        issues.push(ValidationIssue::Disconnected { components });
    }

    ValidationReport {
        all_faces_glued,
        connected: components == 1,
        reversed_edges,
        vertex_link_euler,
        issues,
    }
}

/// Whether tetrahedra can be oriented so that every gluing reverses
/// orientation. With all tetrahedra positively oriented, that means every
/// corner map is an odd permutation; flipping a tetrahedron flips the parity
/// requirement on each of its gluings.
pub fn check_orientable(tri: &Triangulation) -> bool {
    let n = tri.tet_count();
    let mut orient = vec![0i32; n];
    for start in 0..n {
        if orient[start] != 0 {
            continue;
        }
        orient[start] = 1;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for f in 0..4 {
                let Some(g) = tri.gluing(t, f) else { continue };
                let want = -orient[t] * g.perm.sign();
                if orient[g.tet] == 0 {
                    orient[g.tet] = want;
                    stack.push(g.tet);
                } else if orient[g.tet] != want {
                    return false;
                }
            }
        }
    }
    true
}

/// First homology group `Z^betti + Z/t1 + Z/t2 + ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl Homology {
    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<u64> {
        (self.betti == 0).then(|| self.torsion.iter().product())
    }
}

/// H1 from the cellular chain complex of the triangulation.
pub fn first_homology(tri: &Triangulation) -> Homology {
    let n = tri.tet_count();
    let labels = FaceLabels::new(tri);
    let mut oriented = oriented_edge_classes(tri);
    let (ec, vc) = (labels.edge_count, labels.vertex_count);

    // Reference orientation per edge orbit: its first local occurrence a<b.
    let mut reference = vec![usize::MAX; ec];
    for t in 0..n {
        for (e, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            let orbit = labels.edge[t][e];
            if reference[orbit] == usize::MAX {
                reference[orbit] = oriented.find(16 * t + 4 * a + b);
            }
        }
    }
    let mut signed_edge = |t: usize, a: usize, b: usize| -> (usize, i64) {
        let orbit = labels.edge[t][local_edge_index(a, b)];
        let sign = if oriented.find(16 * t + 4 * a + b) == reference[orbit] {
            1
        } else {
            -1
        };
        (orbit, sign)
    };

    let mut d1 = vec![vec![0i64; ec]; vc];
    let mut filled = vec![false; ec];
    for t in 0..n {
        for (e, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            let orbit = labels.edge[t][e];
            if filled[orbit] {
                continue;
            }
            filled[orbit] = true;
            let (_, sign) = signed_edge(t, a, b);
            d1[labels.vertex[t][b]][orbit] += sign;
            d1[labels.vertex[t][a]][orbit] -= sign;
        }
    }

    let fc = labels.triangle_count;
    let mut d2 = vec![vec![0i64; fc]; ec];
    let mut filled = vec![false; fc];
    for t in 0..n {
        for f in 0..4 {
            let orbit = labels.triangle[t][f];
            if filled[orbit] {
                continue;
            }
            filled[orbit] = true;
            let corners: Vec<usize> = (0..4).filter(|&i| face_mask(f) & (1 << i) != 0).collect();
            let (a, b, c) = (corners[0], corners[1], corners[2]);
            for (x, y, coeff) in [(b, c, 1), (a, c, -1), (a, b, 1)] {
                let (e, sign) = signed_edge(t, x, y);
                d2[e][orbit] += coeff * sign;
            }
        }
    }

    let rank_d1 = smith_diagonal(d1).len();
    let d2_diag = smith_diagonal(d2);
    let rank_d2 = d2_diag.len();
    Homology {
        betti: ec - rank_d1 - rank_d2,
        torsion: d2_diag
            .into_iter()
            .map(|d| d.unsigned_abs())
            .filter(|&d| d > 1)
            .collect(),
    }
}

/// Nonzero invariant factors of an integer matrix.
fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut r0 = 0;
    let mut c0 = 0;
    while r0 < rows && c0 < cols {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut pivot = None;
        for (i, row) in m.iter().enumerate().skip(r0) {
            for (j, &x) in row.iter().enumerate().skip(c0) {
                if x != 0 && pivot.is_none_or(|(_, _, p): (usize, usize, i64)| x.abs() < p) {
                    pivot = Some((i, j, x.abs()));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        m.swap(r0, pi);
        for row in m.iter_mut() {
            row.swap(c0, pj);
        }
        loop {
            let p = m[r0][c0];
            let mut clean = true;
            for i in r0 + 1..rows {
                let q = m[i][c0] / p;
                if q != 0 {
                    for j in c0..cols {
                        m[i][j] -= q * m[r0][j];
                    }
                }
                if m[i][c0] != 0 {
                    clean = false;
                }
            }
            for j in c0 + 1..cols {
                let q = m[r0][j] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(r0) {
                        row[j] -= q * row[c0];
                    }
                }
                if m[r0][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // Divisibility of the remaining block by the pivot.
                let bad = (r0 + 1..rows)
                    .flat_map(|i| (c0 + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in c0..cols {
                            let add = m[i][j];
                            m[r0][j] += add;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of the pivot row/column to the pivot.
            let mut best = (r0, c0, m[r0][c0].abs());
            for i in r0..rows {
                if m[i][c0] != 0 && m[i][c0].abs() < best.2 {
                    best = (i, c0, m[i][c0].abs());
                }
            }
            for j in c0..cols {
                if m[r0][j] != 0 && m[r0][j].abs() < best.2 {
                    best = (r0, j, m[r0][j].abs());
                }
            }
            m.swap(r0, best.0);
            for row in m.iter_mut() {
                row.swap(c0, best.1);
            }
        }
        diag.push(m[r0][c0].abs());
        r0 += 1;
        c0 += 1;
    }
    diag
}
