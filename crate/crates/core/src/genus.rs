use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Surface genus. The first homology of the closed genus-g surface has rank
/// 2g, with the fixed ordered basis (x1, y1, x2, y2, ..., xg, yg).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Genus(usize);

impl Genus {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::GenusOutOfRange(0, "genus must be at least 1"));
        }
        // Bit-packed F2 vectors live in a u64.
        if 2 * g > 64 {
            return Err(Error::GenusOutOfRange(g, "genus must be at most 32"));
        }
        Ok(Genus(g))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Rank of H1, i.e. 2g.
    pub fn dim(self) -> usize {
        2 * self.0
    }

    /// Number of chain positions 1..=2g+2 used by tack sequences.
    pub fn chain_len(self) -> usize {
        2 * self.0 + 2
    }

    pub fn require_at_least(self, min: usize, why: &'static str) -> Result<()> {
        if self.0 < min {
            return Err(Error::GenusOutOfRange(self.0, why));
        }
        Ok(())
    }
}

impl std::fmt::Display for Genus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of the basis element x_i (1-based i) in the fixed ordering.
pub(crate) fn x_index(i: usize) -> usize {
    2 * (i - 1)
}

/// Index of the basis element y_i (1-based i) in the fixed ordering.
pub(crate) fn y_index(i: usize) -> usize {
    2 * (i - 1) + 1
}
