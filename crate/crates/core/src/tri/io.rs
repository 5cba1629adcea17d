//! The gluing-table text format.
//!
//! ```text
//! # comment
//! tets 2
//! 0 0 : 1 0 : 0123
//! ```
//!
//! Each line `t f : t' f' : p0p1p2p3` glues face `f` of tetrahedron `t` to
//! face `f'` of tetrahedron `t'` with corner map `i -> p_i`. The partner
//! gluing is implied and may be omitted.

use super::{Triangulation, TriError};
use crate::perm::Perm4;
use std::collections::HashSet;
use std::fmt::Write;

fn malformed(line: usize, reason: impl Into<String>) -> TriError {
    TriError::MalformedLine {
        line,
        reason: reason.into(),
    }
}

fn parse_pair(line: usize, field: &str) -> Result<(usize, usize), TriError> {
    let nums: Vec<&str> = field.split_whitespace().collect();
    if nums.len() != 2 {
        return Err(malformed(line, format!("expected `tet face`, got `{}`", field.trim())));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| malformed(line, format!("not a nonnegative integer: `{s}`")))
    };
    Ok((parse(nums[0])?, parse(nums[1])?))
}

fn parse_perm(line: usize, field: &str) -> Result<Perm4, TriError> {
    let digits: Vec<u8> = field
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| malformed(line, format!("bad corner map character `{c}`")))
        })
        .collect::<Result<_, _>>()?;
    let images: [u8; 4] = digits
        .try_into()
        .map_err(|_| malformed(line, "corner map must have four digits"))?;
    Perm4::new(images).ok_or_else(|| malformed(line, "corner map is not a permutation of 0123"))
}

/// Parses a gluing table. Lines are numbered from 1 in errors.
pub fn parse_triangulation(text: &str) -> Result<Triangulation, TriError> {
    let mut tri: Option<Triangulation> = None;
    let mut explicit: HashSet<(usize, usize)> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(t) = tri.as_mut() else {
            let mut words = content.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("tets"), Some(n), None) => {
                    let n: usize = n
                        .parse()
                        .map_err(|_| malformed(line, format!("bad tetrahedron count `{n}`")))?;
                    if n == 0 {
                        return Err(malformed(line, "tetrahedron count must be positive"));
                    }
                    tri = Some(Triangulation::new(n));
                    continue;
                }
                _ => return Err(malformed(line, "expected header `tets N`")),
            }
        };

        let fields: Vec<&str> = content.split(':').collect();
        if fields.len() != 3 {
            return Err(malformed(line, "expected `t f : t' f' : p0p1p2p3`"));
        }
        let (tet, face) = parse_pair(line, fields[0])?;
        let (target, target_face) = parse_pair(line, fields[1])?;
        let perm = parse_perm(line, fields[2])?;

        match t.glue_at(line, tet, face, target, target_face, perm) {
            Err(TriError::DuplicateFaceAssignment { .. }) if !explicit.contains(&(tet, face)) => {
                return Err(TriError::NonInvolutiveGluing { line, tet, face });
            }
            other => other?,
        }
        explicit.insert((tet, face));
    }

    tri.ok_or_else(|| malformed(0, "missing header `tets N`"))
}

/// Writes each glued pair once, smaller side first.
pub fn serialize_triangulation(tri: &Triangulation) -> String {
    let mut out = format!("tets {}\n", tri.tet_count());
    for (t, f, g) in tri.gluing_pairs() {
        writeln!(out, "{} {} : {} {} : {}", t, f, g.tet, g.face, g.perm).unwrap();
    }
    out
}
