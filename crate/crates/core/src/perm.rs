//! Permutations of `{0, ..., n-1}` stored as image vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A bijection on `{0, ..., n-1}`.
///
/// Composition follows the usual right-to-left convention: `p.compose(&q)` is
/// the map `d ↦ p(q(d))`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Returns `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    /// Builds a permutation of degree `n` from disjoint cycles. Points not
    /// mentioned are fixed. Returns `None` if a point repeats or is out of range.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Option<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (k, &d) in cycle.iter().enumerate() {
                if d >= n || seen[d] {
                    return None;
                }
                seen[d] = true;
                images[d] = cycle[(k + 1) % cycle.len()];
            }
        }
        Some(Permutation { images })
    }

    /// Wraps an image vector without checking bijectivity.
    ///
    /// Only [`Permutation::is_bijection`] and [`Permutation::apply`] are
    /// meaningful on an unchecked value; it exists so that malformed inputs
    /// can be carried to a validator and reported.
    pub fn from_images_unchecked(images: Vec<usize>) -> Self {
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, d: usize) -> usize {
        self.images[d]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images.iter().all(|&i| {
            if i >= seen.len() || seen[i] {
                false
            } else {
                seen[i] = true;
                true
            }
        })
    }

    /// `d ↦ self(other(d))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&d| self.images[d]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (d, &i) in self.images.iter().enumerate() {
            inv[i] = d;
        }
        Permutation { images: inv }
    }

    /// `g ∘ self ∘ g⁻¹`, the permutation `self` transported along the
    /// relabeling `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.compose(self).compose(&g.inverse())
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(d, &i)| *d == i)
            .map(|(d, _)| d)
    }

    pub fn is_involution(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(d, &i)| self.images[i] == d)
    }

    /// Disjoint cycles, each starting at its smallest point, ordered by that
    /// point. Fixed points appear as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                cycle.push(d);
                d = self.images[d];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            write!(f, "(")?;
            for (k, d) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{d}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
