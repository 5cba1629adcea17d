//! Canonical handle decompositions and the surfaces bounding handle unions.
//!
//! Every face of the triangulation carries one handle: tetrahedra give
//! 0-handles, triangles 1-handles, edges 2-handles and vertices 3-handles.
//! The handle of a face is the closed star of its barycentre in the second
//! barycentric subdivision, so a union of handles is a subcomplex there and
//! its boundary is an explicit triangulated surface.

mod graph;
mod linear;
mod surface;

pub use graph::{
    graph_certificate, GraphSplittingCertificate, LeafRecord, NodeRecord, RootChoice, RootRecord,
};
pub use linear::{linear_certificate, Attachment, LinearCertificate, StepRecord};
pub use surface::{c_complexity, SurfaceSummary};

use crate::dsu::Dsu;
use crate::tri::{
    check_orientable, face_mask, validate_closed, FaceLabels, TriError, Triangulation,
};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HandleError {
    #[error("triangulation is not a valid closed orientable 3-manifold: {0}")]
    InvalidTriangulation(String),
    #[error("handle set is not admissible: {0}")]
    NotAdmissible(String),
    #[error("host tree does not match the dual graph: {0}")]
    HostDoesNotMatchGraph(String),
    #[error("layout does not match the dual graph: {0}")]
    LayoutMismatch(String),
    #[error("width multiset is not sorted non-increasingly")]
    NotSorted,
    #[error("boundary is not a closed surface: {0}")]
    SurfaceDefect(String),
    #[error(transparent)]
    Tri(#[from] TriError),
}

/// A handle of the canonical decomposition: its index and the orbit label
/// of its face (tetrahedron, triangle, edge or vertex for index 0..3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Handle {
    pub index: u8,
    pub face: usize,
}

impl Handle {
    pub fn new(index: u8, face: usize) -> Self {
        Handle { index, face }
    }
}

/// A subset of the handles of a canonical decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleSet {
    present: [Vec<bool>; 4],
}

impl HandleSet {
    pub fn empty(counts: [usize; 4]) -> Self {
        HandleSet {
            present: counts.map(|c| vec![false; c]),
        }
    }

    pub fn contains(&self, h: Handle) -> bool {
        self.present[h.index as usize][h.face]
    }

    pub fn insert(&mut self, h: Handle) {
        self.present[h.index as usize][h.face] = true;
    }

    pub fn remove(&mut self, h: Handle) {
        self.present[h.index as usize][h.face] = false;
    }

    /// Number of present handles of each index.
    pub fn counts(&self) -> [usize; 4] {
        std::array::from_fn(|i| self.present[i].iter().filter(|&&b| b).count())
    }

    pub fn len(&self) -> usize {
        self.counts().iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Present handles, by index then face label.
    pub fn handles(&self) -> Vec<Handle> {
        (0..4u8)
            .flat_map(|i| {
                self.present[i as usize]
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(move |(f, _)| Handle::new(i, f))
            })
            .collect()
    }

    pub fn union(&self, other: &HandleSet) -> HandleSet {
        HandleSet {
            present: std::array::from_fn(|i| {
                self.present[i]
                    .iter()
                    .zip(&other.present[i])
                    .map(|(a, b)| *a || *b)
                    .collect()
            }),
        }
    }

    pub fn is_subset(&self, other: &HandleSet) -> bool {
        (0..4).all(|i| {
            self.present[i]
                .iter()
                .zip(&other.present[i])
                .all(|(a, b)| !*a || *b)
        })
    }

    pub fn is_disjoint(&self, other: &HandleSet) -> bool {
        (0..4).all(|i| {
            self.present[i]
                .iter()
                .zip(&other.present[i])
                .all(|(a, b)| !(*a && *b))
        })
    }

    /// `2(h0 - h1 + h2 - h3)`, the Euler characteristic the boundary of this
    /// union must have.
    pub fn boundary_euler(&self) -> i64 {
        let [a, b, c, d] = self.counts().map(|x| x as i64);
        2 * (a - b + c - d)
    }
}

/// One triangle of the second subdivision that can lie on a boundary: it
/// separates the handles of the two faces in `sides`.
#[derive(Clone, Copy, Debug)]
struct Cell {
    sides: [Handle; 2],
    vertices: [usize; 3],
}

/// A triangulation prepared for handle computations.
#[derive(Clone, Debug)]
pub struct HandleComplex {
    tet_count: usize,
    labels: FaceLabels,
    counts: [usize; 4],
    /// Tetrahedra around each face, by handle index and label.
    incident: [Vec<Vec<usize>>; 4],
    /// Pairs (face, coface) of handles: a present face needs its coface.
    cofaces: Vec<(Handle, Handle)>,
    cells: Vec<Cell>,
}

/// Chains of local faces, as bitsets over corner masks `1..=15`.
fn flag_masks(order: [usize; 4]) -> [u8; 4] {
    let mut masks = [0u8; 4];
    let mut m = 0u8;
    for (i, &c) in order.iter().enumerate() {
        m |= 1 << c;
        masks[i] = m;
    }
    masks
}

fn chain_bits(masks: impl IntoIterator<Item = u8>) -> u16 {
    masks.into_iter().fold(0u16, |acc, m| acc | 1 << m)
}

impl HandleComplex {
    pub fn new(tri: &Triangulation) -> Result<Self, HandleError> {
        let report = validate_closed(tri);
        if !report.is_valid() {
            return Err(HandleError::InvalidTriangulation(format!("{:?}", report.issues)));
        }
        if !check_orientable(tri) {
            return Err(HandleError::InvalidTriangulation("not orientable".into()));
        }
        let n = tri.tet_count();
        let labels = FaceLabels::new(tri);
        let counts = [n, labels.triangle_count, labels.edge_count, labels.vertex_count];
        let handle_at = |t: usize, mask: u8| {
            let (dim, label) = labels.face_of(t, mask);
            Handle::new(3 - dim as u8, label)
        };

        let mut incident: [Vec<Vec<usize>>; 4] = counts.map(|c| vec![Vec::new(); c]);
        let mut cofaces = Vec::new();
        for t in 0..n {
            for mask in 1u8..16 {
                let h = handle_at(t, mask);
                incident[h.index as usize][h.face].push(t);
                for sup in (mask + 1)..16 {
                    if sup & mask == mask {
                        cofaces.push((h, handle_at(t, sup)));
                    }
                }
            }
        }
        for list in incident.iter_mut().flatten() {
            list.sort_unstable();
            list.dedup();
        }
        cofaces.sort_unstable();
        cofaces.dedup();

        // Vertices of the second subdivision are chains of local faces up to
        // the gluings; chains through the tetrahedron itself are unique.
        let orders: Vec<[usize; 4]> = crate::perm::Perm4::all()
            .map(|p| std::array::from_fn(|i| p.apply(i)))
            .collect();
        let mut ids: HashMap<(usize, u16), usize> = HashMap::new();
        let id_of = |key: (usize, u16), ids: &mut HashMap<(usize, u16), usize>| {
            let next = ids.len();
            *ids.entry(key).or_insert(next)
        };
        let mut raw_cells = Vec::new();
        for t in 0..n {
            for order in &orders {
                let flag = flag_masks(*order);
                let top = id_of((t, chain_bits(flag)), &mut ids);
                for a in 0..4 {
                    for b in a + 1..4 {
                        let edge_chain = chain_bits([flag[a], flag[b]]);
                        let v1 = id_of((t, edge_chain), &mut ids);
                        for c in (0..4).filter(|&c| c != a && c != b) {
                            let v2 = id_of((t, edge_chain | 1 << flag[c]), &mut ids);
                            raw_cells.push(([handle_at(t, flag[a]), handle_at(t, flag[b])], [v1, v2, top]));
                        }
                    }
                }
            }
        }
        let mut dsu = Dsu::new(ids.len());
        for (t, f, g) in tri.gluing_pairs() {
            let face = face_mask(f);
            for (&(tt, bits), &id) in &ids {
                if tt != t || (1u8..16).any(|m| bits & 1 << m != 0 && m & face != m) {
                    continue;
                }
                let mapped = (1u8..16)
                    .filter(|&m| bits & 1 << m != 0)
                    .fold(0u16, |acc, m| acc | 1 << g.perm.apply_mask(m));
                let other = ids[&(g.tet, mapped)];
                dsu.union(id, other);
            }
        }
        let (class, _) = dsu.labels();
        let cells = raw_cells
            .into_iter()
            .map(|(sides, v)| Cell {
                sides,
                vertices: v.map(|x| class[x]),
            })
            .collect();

        Ok(HandleComplex {
            tet_count: n,
            labels,
            counts,
            incident,
            cofaces,
            cells,
        })
    }

    pub fn tet_count(&self) -> usize {
        self.tet_count
    }

    pub fn labels(&self) -> &FaceLabels {
        &self.labels
    }

    /// Number of handles of each index: `(n, 2n, E, V)` for a closed input.
    pub fn handle_counts(&self) -> [usize; 4] {
        self.counts
    }

    /// The canonical handle decomposition: every handle, by index then face.
    pub fn chd(&self) -> Vec<Handle> {
        self.all().handles()
    }

    pub fn all(&self) -> HandleSet {
        HandleSet {
            present: self.counts.map(|c| vec![true; c]),
        }
    }

    pub fn empty(&self) -> HandleSet {
        HandleSet::empty(self.counts)
    }

    /// Tetrahedra incident to the face of a handle.
    pub fn incident_tets(&self, h: Handle) -> &[usize] {
        &self.incident[h.index as usize][h.face]
    }

    /// The first violation of admissibility: a present handle whose face
    /// lies in a face whose handle is absent.
    pub fn admissibility_violation(&self, set: &HandleSet) -> Option<(Handle, Handle)> {
        self.cofaces
            .iter()
            .copied()
            .find(|&(h, sup)| set.contains(h) && !set.contains(sup))
    }

    pub fn is_admissible(&self, set: &HandleSet) -> bool {
        self.admissibility_violation(set).is_none()
    }

    /// Largest admissible set whose 0-handles are exactly `tets`: every
    /// handle all of whose incident tetrahedra are in `tets`.
    pub fn admissible_closure(&self, tets: &[usize]) -> HandleSet {
        let mut chosen = vec![false; self.tet_count];
        for &t in tets {
            chosen[t] = true;
        }
        HandleSet {
            present: std::array::from_fn(|i| {
                self.incident[i]
                    .iter()
                    .map(|ts| ts.iter().all(|&t| chosen[t]))
                    .collect()
            }),
        }
    }

    /// The 1-handles whose triangles are glued between `a` and `b`
    /// (disjoint tetrahedron sets).
    pub fn one_handles_between(&self, a: &[usize], b: &[usize]) -> Vec<Handle> {
        (0..self.counts[1])
            .map(|f| Handle::new(1, f))
            .filter(|&h| {
                let ts = self.incident_tets(h);
                ts.len() == 2
                    && ((a.contains(&ts[0]) && b.contains(&ts[1]))
                        || (a.contains(&ts[1]) && b.contains(&ts[0])))
            })
            .collect()
    }

    /// The boundary of the union of the handles in `set`.
    pub fn boundary_surface(&self, set: &HandleSet) -> Result<SurfaceSummary, HandleError> {
        if let Some((h, sup)) = self.admissibility_violation(set) {
            return Err(HandleError::NotAdmissible(format!(
                "{h:?} is present but {sup:?} is not"
            )));
        }
        let triangles: Vec<[usize; 3]> = self
            .cells
            .iter()
            .filter(|c| set.contains(c.sides[0]) != set.contains(c.sides[1]))
            .map(|c| c.vertices)
            .collect();
        surface::summarize(&triangles)
    }
}

/// Compares two width multisets (sorted non-increasingly) lexicographically
/// after padding the shorter with zeros.
pub fn compare_widths_lex(a: &[usize], b: &[usize]) -> Result<Ordering, HandleError> {
    let sorted = |x: &[usize]| x.windows(2).all(|w| w[0] >= w[1]);
    if !sorted(a) || !sorted(b) {
        return Err(HandleError::NotSorted);
    }
    let len = a.len().max(b.len());
    let at = |x: &[usize], i: usize| x.get(i).copied().unwrap_or(0);
    Ok((0..len)
        .map(|i| at(a, i).cmp(&at(b, i)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal))
}

/// How a single tetrahedron's self-gluing (if any) shapes its leaf handle
/// union.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfGluingClass {
    NoSelfGluing,
    SnappedBall,
    SolidTorus,
    Invalid,
}

/// The leaf handle union of tetrahedron `tet` (every handle whose face lies
/// only in `tet`), its boundary, and the resulting class.
pub fn leaf_handlebody(
    complex: &HandleComplex,
    tri: &Triangulation,
    tet: usize,
) -> Result<(SelfGluingClass, SurfaceSummary), HandleError> {
    let pairs = tri.self_glued_pairs(tet);
    if pairs.len() > 1 {
        return Err(TriError::MoreThanOneSelfGluedPair { tet }.into());
    }
    let surface = complex.boundary_surface(&complex.admissible_closure(&[tet]))?;
    let class = if pairs.is_empty() {
        SelfGluingClass::NoSelfGluing
    } else {
        match (surface.components(), surface.total_genus) {
            (1, 0) => SelfGluingClass::SnappedBall,
            (1, 1) => SelfGluingClass::SolidTorus,
            _ => SelfGluingClass::Invalid,
        }
    };
    Ok((class, surface))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;
    use crate::tri::skeleton;

    fn p(s: [u8; 4]) -> Perm4 {
        Perm4::new(s).unwrap()
    }

    /// Two tetrahedra, each with one face pair folded onto itself.
    fn two_snapped() -> Triangulation {
        // Folding face 0 onto face 1 of each tetrahedron by swapping
        // corners 0 and 1 and glueing the leftover faces across.
        let mut t = Triangulation::new(2);
        t.glue(0, 0, 0, 1, p([1, 0, 2, 3])).unwrap();
        t.glue(1, 0, 1, 1, p([1, 0, 2, 3])).unwrap();
        t.glue(0, 2, 1, 2, p([0, 1, 2, 3])).unwrap();
        t.glue(0, 3, 1, 3, p([0, 1, 2, 3])).unwrap();
        t
    }

    #[test]
    fn double_counts() {
        let cx = HandleComplex::new(&Triangulation::double()).unwrap();
        assert_eq!(cx.handle_counts(), [2, 4, 6, 4]);
        assert_eq!(cx.chd().len(), 16);
    }

    #[test]
    fn closure_examples() {
        let cx = HandleComplex::new(&Triangulation::double()).unwrap();
        assert_eq!(cx.admissible_closure(&[0, 1]), cx.all());
        assert!(cx.admissible_closure(&[]).is_empty());
        let one = cx.admissible_closure(&[0]);
        assert_eq!(one.handles(), vec![Handle::new(0, 0)]);
    }

    #[test]
    fn double_surfaces() {
        let cx = HandleComplex::new(&Triangulation::double()).unwrap();
        let all = cx.boundary_surface(&cx.all()).unwrap();
        assert_eq!(all.components(), 0);
        assert_eq!(all.euler, 0);

        let ball = cx.boundary_surface(&cx.admissible_closure(&[0])).unwrap();
        assert_eq!((ball.components(), ball.total_genus), (1, 0));

        let mut bridged = cx.admissible_closure(&[0, 1]);
        for h in bridged.handles() {
            if h.index >= 1 {
                bridged.remove(h);
            }
        }
        let two_balls = cx.boundary_surface(&bridged).unwrap();
        assert_eq!(two_balls.component_genera, vec![0, 0]);
        bridged.insert(Handle::new(1, 0));
        let ball = cx.boundary_surface(&bridged).unwrap();
        assert_eq!((ball.components(), ball.total_genus), (1, 0));
        bridged.insert(Handle::new(1, 1));
        let torus = cx.boundary_surface(&bridged).unwrap();
        assert_eq!(torus.component_genera, vec![1]);
    }

    #[test]
    fn non_admissible_rejected() {
        let cx = HandleComplex::new(&Triangulation::double()).unwrap();
        let mut set = cx.empty();
        set.insert(Handle::new(1, 0));
        assert!(matches!(
            cx.boundary_surface(&set),
            Err(HandleError::NotAdmissible(_))
        ));
    }

    #[test]
    fn euler_matches_handle_count_on_every_tet_subset() {
        let cx = HandleComplex::new(&Triangulation::double()).unwrap();
        for mask in 0..4usize {
            let tets: Vec<usize> = (0..2).filter(|t| mask >> t & 1 == 1).collect();
            let h = cx.admissible_closure(&tets);
            assert_eq!(cx.boundary_surface(&h).unwrap().euler, h.boundary_euler());
        }
    }

    #[test]
    fn snapped_leaves() {
        let tri = two_snapped();
        assert!(validate_closed(&tri).is_valid(), "{:?}", validate_closed(&tri));
        let cx = HandleComplex::new(&tri).unwrap();
        let s = skeleton(&tri);
        assert_eq!(cx.handle_counts(), [2, 4, s.edge_count, s.vertex_count]);
        for t in 0..2 {
            let (class, surface) = leaf_handlebody(&cx, &tri, t).unwrap();
            assert_eq!(class, SelfGluingClass::SnappedBall);
            assert_eq!(surface.total_genus, 0);
        }
    }

    #[test]
    fn lex_comparison() {
        assert_eq!(compare_widths_lex(&[3, 1], &[3, 2]), Ok(Ordering::Less));
        assert_eq!(compare_widths_lex(&[], &[1]), Ok(Ordering::Less));
        assert_eq!(compare_widths_lex(&[5, 1, 1], &[5, 1]), Ok(Ordering::Greater));
        assert_eq!(compare_widths_lex(&[1, 0], &[1]), Ok(Ordering::Equal));
        assert_eq!(compare_widths_lex(&[1, 2], &[1]), Err(HandleError::NotSorted));
    }
}
