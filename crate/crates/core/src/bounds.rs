//! Genus and width bounds implied by the width parameters of a dual graph.
//!
//! Two bounds hold for every closed orientable triangulation. The genus
//! bounds additionally need the manifold to be irreducible and non-Haken;
//! those properties are never computed, only asserted by the caller, and
//! every conditional line says so.

use crate::solvers::{Param, WidthReport};
use serde::{Deserialize, Serialize};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("no width values supplied")]
    MissingWidths,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldFlags {
    /// Computed.
    pub closed: bool,
    /// Computed.
    pub orientable: bool,
    /// Asserted by the user, never checked.
    pub irreducible_asserted: bool,
    /// Asserted by the user, never checked.
    pub non_haken_asserted: bool,
    /// Computed. The graph-width bound excludes one-tetrahedron inputs.
    pub single_tetrahedron: bool,
}

impl ManifoldFlags {
    fn conditional(&self) -> bool {
        self.closed && self.orientable && self.irreducible_asserted && self.non_haken_asserted
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthValue {
    pub param: Param,
    pub value: usize,
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Below => "<",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundLine {
    pub name: String,
    /// The bounded quantity, e.g. `heegaard_genus`.
    pub quantity: String,
    pub relation: Relation,
    pub value: usize,
    pub from: Param,
    /// Whether the width the bound was computed from is exact.
    pub width_exact: bool,
    pub formula: String,
    pub hypothesis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub widths: Vec<WidthValue>,
    pub flags: ManifoldFlags,
    pub unconditional: Vec<BoundLine>,
    pub conditional: Vec<BoundLine>,
}

pub const HYP_CLOSED: &str = "closed orientable triangulation (computed)";
pub const HYP_CLOSED_MULTI: &str =
    "closed orientable triangulation with at least two tetrahedra (computed)";
pub const HYP_IRREDUCIBLE: &str =
    "closed orientable (computed); irreducible and non-Haken (asserted, not checked)";

impl BoundsReport {
    pub fn lookup(&self, name: &str) -> Option<&BoundLine> {
        self.unconditional
            .iter()
            .chain(&self.conditional)
            .find(|b| b.name == name)
    }

    /// Plain-text table.
    pub fn to_text(&self) -> String {
        let mut out = String::from("widths:\n");
        for w in &self.widths {
            let kind = if w.exact { "exact" } else { "upper bound" };
            writeln!(out, "  {} = {} ({kind})", w.param, w.value).unwrap();
        }
        for (title, lines) in [
            ("unconditional", &self.unconditional),
            ("conditional", &self.conditional),
        ] {
            writeln!(out, "{title}:").unwrap();
            if lines.is_empty() {
                out.push_str("  (none)\n");
            }
            for b in lines {
                writeln!(
                    out,
                    "  {} {} {}   [{}; {}]",
                    b.quantity,
                    b.relation.symbol(),
                    b.value,
                    b.formula,
                    b.hypothesis
                )
                .unwrap();
            }
        }
        out
    }
}

/// Assembles the bounds supported by the given widths and flags. When a
/// parameter appears more than once the smallest value is used.
pub fn genus_bounds(widths: &[WidthValue], flags: ManifoldFlags) -> Result<BoundsReport, BoundsError> {
    if widths.is_empty() {
        return Err(BoundsError::MissingWidths);
    }
    let get = |p: Param| {
        widths
            .iter()
            .filter(|w| w.param == p)
            .min_by_key(|w| (w.value, !w.exact))
            .copied()
    };
    let line = |name: &str, quantity: &str, relation, value, w: WidthValue, formula: String, hyp: &str| BoundLine {
        name: name.into(),
        quantity: quantity.into(),
        relation,
        value,
        from: w.param,
        width_exact: w.exact,
        formula,
        hypothesis: hyp.into(),
    };

    let mut unconditional = Vec::new();
    let mut conditional = Vec::new();
    if flags.closed && flags.orientable {
        if let Some(w) = get(Param::Cw) {
            let k = w.value;
            unconditional.push(line(
                "l_upper",
                "linear_width",
                Relation::AtMost,
                6 * k + 7,
                w,
                format!("6*cw+7 = 6*{k}+7"),
                HYP_CLOSED,
            ));
        }
        if let Some(w) = get(Param::Cng).filter(|_| !flags.single_tetrahedron) {
            let k = w.value;
            unconditional.push(line(
                "graphwidth_upper",
                "graph_width",
                Relation::Below,
                6 * k,
                w,
                format!("6*cng = 6*{k}"),
                HYP_CLOSED_MULTI,
            ));
        }
    }
    if flags.conditional() {
        if let Some(w) = get(Param::Pw) {
            let k = w.value;
            conditional.push(line(
                "genus_from_pw",
                "heegaard_genus",
                Relation::AtMost,
                4 * (3 * k + 1),
                w,
                format!("4*(3*pw+1) = 4*(3*{k}+1)"),
                HYP_IRREDUCIBLE,
            ));
        }
        if let Some(w) = get(Param::Tw) {
            let k = w.value;
            conditional.push(line(
                "genus_from_tw_strict",
                "heegaard_genus",
                Relation::Below,
                24 * (k + 1),
                w,
                format!("24*(tw+1) = 24*({k}+1)"),
                HYP_IRREDUCIBLE,
            ));
        }
        if let Some(w) = get(Param::Cw) {
            let k = w.value;
            conditional.push(line(
                "genus_from_cw",
                "heegaard_genus",
                Relation::AtMost,
                3 * k + 4,
                w,
                format!("3*cw+4 = 3*{k}+4"),
                HYP_IRREDUCIBLE,
            ));
        }
        if let Some(w) = get(Param::Cng).filter(|_| !flags.single_tetrahedron) {
            let k = w.value;
            conditional.push(line(
                "genus_from_cng_strict",
                "heegaard_genus",
                Relation::Below,
                6 * k,
                w,
                format!("6*cng = 6*{k}"),
                HYP_IRREDUCIBLE,
            ));
        }
    }
    Ok(BoundsReport {
        widths: widths.to_vec(),
        flags,
        unconditional,
        conditional,
    })
}

impl From<&WidthReport> for WidthValue {
    fn from(r: &WidthReport) -> Self {
        WidthValue {
            param: r.param,
            value: r.value,
            exact: r.exact,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(param: Param, value: usize) -> WidthValue {
        WidthValue {
            param,
            value,
            exact: true,
        }
    }

    fn asserted() -> ManifoldFlags {
        ManifoldFlags {
            closed: true,
            orientable: true,
            irreducible_asserted: true,
            non_haken_asserted: true,
            single_tetrahedron: false,
        }
    }

    #[test]
    fn spec_examples() {
        let r = genus_bounds(&[w(Param::Pw, 1)], asserted()).unwrap();
        assert_eq!(r.lookup("genus_from_pw").unwrap().value, 16);
        let r = genus_bounds(&[w(Param::Tw, 0)], asserted()).unwrap();
        let b = r.lookup("genus_from_tw_strict").unwrap();
        assert_eq!((b.value, b.relation), (24, Relation::Below));
        let plain = ManifoldFlags {
            irreducible_asserted: false,
            non_haken_asserted: false,
            ..asserted()
        };
        let r = genus_bounds(&[w(Param::Cw, 6)], plain).unwrap();
        assert_eq!(r.unconditional.len(), 1);
        assert_eq!(r.lookup("l_upper").unwrap().value, 43);
        assert!(r.conditional.is_empty());
    }

    #[test]
    fn one_assertion_is_not_enough() {
        let flags = ManifoldFlags {
            non_haken_asserted: false,
            ..asserted()
        };
        let r = genus_bounds(&[w(Param::Pw, 3), w(Param::Tw, 3)], flags).unwrap();
        assert!(r.conditional.is_empty());
    }

    #[test]
    fn missing_widths() {
        assert_eq!(genus_bounds(&[], asserted()), Err(BoundsError::MissingWidths));
    }

    #[test]
    fn monotone_in_every_width() {
        for k in 0..8 {
            let a = genus_bounds(&Param::ALL.map(|p| w(p, k)), asserted()).unwrap();
            let b = genus_bounds(&Param::ALL.map(|p| w(p, k + 1)), asserted()).unwrap();
            for (x, y) in a.conditional.iter().zip(&b.conditional) {
                assert!(x.value <= y.value);
            }
            for (x, y) in a.unconditional.iter().zip(&b.unconditional) {
                assert!(x.value <= y.value);
            }
        }
    }

    #[test]
    fn single_tetrahedron_drops_the_congestion_lines() {
        let flags = ManifoldFlags {
            single_tetrahedron: true,
            ..asserted()
        };
        let r = genus_bounds(&[w(Param::Cng, 0)], flags).unwrap();
        assert!(r.lookup("graphwidth_upper").is_none());
        assert!(r.lookup("genus_from_cng_strict").is_none());
    }
}
