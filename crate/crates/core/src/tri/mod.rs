//! Closed 3-manifold triangulations given as face-gluing tables.
//!
//! Tetrahedra are numbered `0..n`. Corner `i` of a tetrahedron is opposite
//! face `i`, so a gluing of face `f` of one tetrahedron to face `f'` of
//! another carries a corner map with `f -> f'`.

mod io;
mod skeleton;

pub use io::{parse_triangulation, serialize_triangulation};
pub use skeleton::{
    check_orientable, first_homology, skeleton, validate_closed, FaceLabels, Homology,
    SkeletonSummary, ValidationIssue, ValidationReport,
};

use crate::perm::Perm4;
use thiserror::Error;

/// The six local edges of a tetrahedron as corner pairs, in the order used
/// for local edge indices everywhere in the crate.
pub const LOCAL_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Bitmask of the corners spanning face `f`.
#[inline]
pub fn face_mask(f: usize) -> u8 {
    0xF ^ (1 << f)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriError {
    #[error("line {line}: malformed input: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: gluing of ({tet},{face}) contradicts the gluing already implied by its partner")]
    NonInvolutiveGluing { line: usize, tet: usize, face: usize },
    #[error("line {line}: index out of range: {what}")]
    IndexOutOfRange { line: usize, what: String },
    #[error("line {line}: face ({tet},{face}) is assigned twice")]
    DuplicateFaceAssignment { line: usize, tet: usize, face: usize },
    #[error("line {line}: corner map {perm} does not send face {face} to face {target_face}")]
    FaceMismatch {
        line: usize,
        face: usize,
        target_face: usize,
        perm: Perm4,
    },
    #[error("tetrahedron {tet} has more than one self-glued face pair")]
    MoreThanOneSelfGluedPair { tet: usize },
    #[error("triangulation is not a valid closed orientable triangulation: {0}")]
    NotValid(String),
}

/// Target side of a face gluing: the partner face, and the corner map
/// carrying the source face onto it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub perm: Perm4,
}

/// A generalized triangulation: tetrahedra with (some) faces glued in pairs.
/// Self-identifications are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    gluings: Vec<[Option<Gluing>; 4]>,
}

impl Triangulation {
    /// `n` tetrahedra with no gluings.
    pub fn new(n: usize) -> Self {
        Triangulation {
            gluings: vec![[None; 4]; n],
        }
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.gluings[tet][face]
    }

    /// Glue face `(tet, face)` to `(target, target_face)` via `perm`, also
    /// recording the inverse gluing. Line number 0 is used in errors.
    pub fn glue(
        &mut self,
        tet: usize,
        face: usize,
        target: usize,
        target_face: usize,
        perm: Perm4,
    ) -> Result<(), TriError> {
        self.glue_at(0, tet, face, target, target_face, perm)
    }

    pub(crate) fn glue_at(
        &mut self,
        line: usize,
        tet: usize,
        face: usize,
        target: usize,
        target_face: usize,
        perm: Perm4,
    ) -> Result<(), TriError> {
        let n = self.tet_count();
        for (t, f) in [(tet, face), (target, target_face)] {
            if t >= n {
                return Err(TriError::IndexOutOfRange {
                    line,
                    what: format!("tetrahedron {t} (have {n})"),
                });
            }
            if f > 3 {
                return Err(TriError::IndexOutOfRange {
                    line,
                    what: format!("face {f}"),
                });
            }
        }
        if perm.apply(face) != target_face {
            return Err(TriError::FaceMismatch {
                line,
                face,
                target_face,
                perm,
            });
        }
        if (tet, face) == (target, target_face) {
            return Err(TriError::NonInvolutiveGluing { line, tet, face });
        }
        let forward = Gluing {
            tet: target,
            face: target_face,
            perm,
        };
        let backward = Gluing {
            tet,
            face,
            perm: perm.inverse(),
        };
        match (self.gluings[tet][face], self.gluings[target][target_face]) {
            (None, None) => {
                self.gluings[tet][face] = Some(forward);
                self.gluings[target][target_face] = Some(backward);
                Ok(())
            }
            (Some(g), Some(h)) if g == forward && h == backward => Ok(()),
            (Some(_), _) => Err(TriError::DuplicateFaceAssignment { line, tet, face }),
            (None, Some(_)) => Err(TriError::NonInvolutiveGluing {
                line,
                tet: target,
                face: target_face,
            }),
        }
    }

    pub fn unglue(&mut self, tet: usize, face: usize) {
        if let Some(g) = self.gluings[tet][face].take() {
            self.gluings[g.tet][g.face] = None;
        }
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.iter().all(|fs| fs.iter().all(Option::is_some))
    }

    /// Each glued face pair once, as `(tet, face, gluing)` with `(tet, face)`
    /// the lexicographically smaller side.
    pub fn gluing_pairs(&self) -> impl Iterator<Item = (usize, usize, Gluing)> + '_ {
        self.gluings.iter().enumerate().flat_map(|(t, fs)| {
            fs.iter().enumerate().filter_map(move |(f, g)| match g {
                Some(g) if (t, f) < (g.tet, g.face) => Some((t, f, *g)),
                _ => None,
            })
        })
    }

    /// Number of connected components of the face-adjacency structure.
    pub fn component_count(&self) -> usize {
        let mut dsu = crate::dsu::Dsu::new(self.tet_count());
        for (t, _, g) in self.gluing_pairs() {
            dsu.union(t, g.tet);
        }
        dsu.labels().1
    }

    /// Faces of `tet` glued to other faces of `tet`, as `(f, f')` with `f < f'`.
    pub fn self_glued_pairs(&self, tet: usize) -> Vec<(usize, usize)> {
        (0..4)
            .filter_map(|f| match self.gluings[tet][f] {
                Some(g) if g.tet == tet && f < g.face => Some((f, g.face)),
                _ => None,
            })
            .collect()
    }

    /// Classifies tetrahedron `tet` by its self-gluing: the leaf handle union
    /// of a folded tetrahedron is a ball or a solid torus.
    pub fn classify_self_gluing(
        &self,
        tet: usize,
    ) -> Result<crate::handles::SelfGluingClass, TriError> {
        if tet >= self.tet_count() {
            return Err(TriError::IndexOutOfRange {
                line: 0,
                what: format!("tetrahedron {tet}"),
            });
        }
        if self.self_glued_pairs(tet).len() > 1 {
            return Err(TriError::MoreThanOneSelfGluedPair { tet });
        }
        let complex = crate::handles::HandleComplex::new(self)
            .map_err(|e| TriError::NotValid(e.to_string()))?;
        crate::handles::leaf_handlebody(&complex, self, tet)
            .map(|(class, _)| class)
            .map_err(|e| TriError::NotValid(e.to_string()))
    }

    /// The two-tetrahedron "double": face `i` of tetrahedron 0 glued to face
    /// `i` of tetrahedron 1 by the identity. Triangulates the 3-sphere.
    pub fn double() -> Self {
        let mut t = Triangulation::new(2);
        for f in 0..4 {
            t.glue(0, f, 1, f, Perm4::IDENTITY)
                .expect("double gluing is well formed");
        }
        t
    }
}
