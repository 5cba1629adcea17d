//! Permutations of the four corners of a tetrahedron.

use std::fmt;

/// A bijection of `{0, 1, 2, 3}`, stored as its image table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images, returning `None` if `images`
    /// is not a bijection of `{0,1,2,3}`.
    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = 0u8;
        for &i in &images {
            if i > 3 || seen & (1 << i) != 0 {
                return None;
            }
            seen |= 1 << i;
        }
        Some(Perm4(images))
    }

    #[inline]
    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 4];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self.compose(other)` maps `i` to `self(other(i))`.
    pub fn compose(self, other: Perm4) -> Self {
        let mut out = [0u8; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[other.0[i] as usize];
        }
        Perm4(out)
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Image of a corner bitmask (bit `i` set for corner `i`).
    #[inline]
    pub fn apply_mask(self, mask: u8) -> u8 {
        let mut out = 0;
        for i in 0..4 {
            if mask & (1 << i) != 0 {
                out |= 1 << self.0[i];
            }
        }
        out
    }

    /// All 24 permutations in lexicographic order of their image tables.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..4u8).flat_map(|a| {
            (0..4u8).flat_map(move |b| {
                (0..4u8).flat_map(move |c| (0..4u8).filter_map(move |d| Perm4::new([a, b, c, d])))
            })
        })
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({}{}{}{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_four_perms_half_even() {
        let all: Vec<_> = Perm4::all().collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().filter(|p| p.sign() == 1).count(), 12);
        assert_eq!(all[0], Perm4::IDENTITY);
    }

    #[test]
    fn inverse_composes_to_identity() {
        for p in Perm4::all() {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().compose(p), Perm4::IDENTITY);
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm4::new([0, 0, 1, 2]).is_none());
        assert!(Perm4::new([0, 1, 2, 4]).is_none());
    }

    #[test]
    fn mask_image() {
        let p = Perm4::new([1, 2, 3, 0]).unwrap();
        assert_eq!(p.apply_mask(0b0011), 0b0110);
        assert_eq!(p.apply_mask(0b1000), 0b0001);
    }
}
