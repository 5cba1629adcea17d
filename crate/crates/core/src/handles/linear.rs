//! Linear certificate: attach the handles tetrahedron by tetrahedron along a
//! node ordering of the dual graph and track every intermediate boundary.

use super::{Handle, HandleComplex, HandleError, SurfaceSummary};
use crate::dual::{build_dual, LinearLayout};
use crate::tri::Triangulation;
use serde::{Deserialize, Serialize};

/// Most handles one step can add: a tetrahedron with all its faces.
pub const MAX_HANDLES_PER_STEP: usize = 15;
/// Most one step can raise the total genus: four 1-handles.
pub const MAX_GENUS_RISE_PER_STEP: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub handle: Handle,
    /// Handles of each index present after this attachment.
    pub handle_counts: [usize; 4],
    pub surface: SurfaceSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub tet: usize,
    pub handles_added: usize,
    pub genus_before: usize,
    pub max_genus: usize,
    pub attachments: Vec<Attachment>,
    pub handles_ok: bool,
    pub genus_rise_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCertificate {
    pub layout: LinearLayout,
    /// Width of the layout (its largest cut).
    pub k: usize,
    pub steps: Vec<StepRecord>,
    /// Largest total genus over every intermediate surface.
    pub max_genus_sum: usize,
    pub bound_3k4: usize,
    pub holds_3k4: bool,
    /// Every step adds at most 15 handles and raises the genus by at most 4.
    pub steps_hold: bool,
    /// c-values of the surfaces where attachment switches from 0/1-handles to
    /// 2/3-handles, non-increasing.
    pub induced_width: Vec<usize>,
    /// Total genera of the same surfaces, non-increasing.
    pub induced_genera: Vec<usize>,
    pub l_upper: usize,
}

impl LinearCertificate {
    pub fn passes(&self) -> bool {
        self.holds_3k4 && self.steps_hold
    }
}

/// Builds the filtration `H_1 ⊂ ... ⊂ H_n` of admissible closures of the
/// layout's prefixes. Within a step the new handles are attached by index,
/// then by face label, and the boundary is recorded after each.
pub fn linear_certificate(
    complex: &HandleComplex,
    tri: &Triangulation,
    ordering: &[usize],
) -> Result<LinearCertificate, HandleError> {
    let graph = build_dual(tri);
    let layout = LinearLayout::new(&graph, ordering.to_vec())
        .map_err(|e| HandleError::LayoutMismatch(e.to_string()))?;
    let k = layout.width();

    let mut current = complex.empty();
    let mut steps = Vec::with_capacity(ordering.len());
    let mut transitions: Vec<SurfaceSummary> = Vec::new();
    let mut last_index: Option<u8> = None;
    let mut last_surface = complex.boundary_surface(&current)?;
    for j in 0..ordering.len() {
        let target = complex.admissible_closure(&ordering[..=j]);
        let new: Vec<Handle> = target
            .handles()
            .into_iter()
            .filter(|&h| !current.contains(h))
            .collect();
        let genus_before = last_surface.total_genus;
        let mut attachments = Vec::with_capacity(new.len());
        for h in new {
            if last_index.is_some_and(|i| i <= 1) && h.index >= 2 {
                transitions.push(last_surface.clone());
            }
            current.insert(h);
            last_surface = complex.boundary_surface(&current)?;
            last_index = Some(h.index);
            attachments.push(Attachment {
                handle: h,
                handle_counts: current.counts(),
                surface: last_surface.clone(),
            });
        }
        let max_genus = attachments
            .iter()
            .map(|a| a.surface.total_genus)
            .max()
            .unwrap_or(genus_before);
        steps.push(StepRecord {
            tet: ordering[j],
            handles_added: attachments.len(),
            genus_before,
            max_genus,
            handles_ok: attachments.len() <= MAX_HANDLES_PER_STEP,
            genus_rise_ok: max_genus <= genus_before + MAX_GENUS_RISE_PER_STEP,
            attachments,
        });
    }

    let max_genus_sum = steps.iter().map(|s| s.max_genus).max().unwrap_or(0);
    let mut induced_width: Vec<usize> = transitions.iter().map(|s| s.complexity).collect();
    let mut induced_genera: Vec<usize> = transitions.iter().map(|s| s.total_genus).collect();
    induced_width.sort_unstable_by(|a, b| b.cmp(a));
    induced_genera.sort_unstable_by(|a, b| b.cmp(a));
    Ok(LinearCertificate {
        k,
        bound_3k4: 3 * k + 4,
        holds_3k4: max_genus_sum <= 3 * k + 4,
        steps_hold: steps.iter().all(|s| s.handles_ok && s.genus_rise_ok),
        max_genus_sum,
        steps,
        induced_width,
        induced_genera,
        l_upper: 6 * k + 7,
        layout,
    })
}
