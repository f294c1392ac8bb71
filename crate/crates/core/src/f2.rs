//! Bit-packed linear algebra on H1 with Z2 coefficients.
//!
//! A class is a u64 whose bit k is the coefficient of the k-th basis element
//! in the ordering (x1, y1, ..., xg, yg); a matrix stores one bitmask per row,
//! so applying it to a class costs one AND plus a popcount per row.

use serde::Serialize;

use crate::genus::{x_index, y_index, Genus};
use crate::{Error, Result};

/// A mod-2 homology class, bit-packed. Serializes as its bracketed bit
/// list, "`[1,1,0,0]`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassF2 {
    genus: Genus,
    bits: u64,
}

impl ClassF2 {
    pub fn zero(genus: Genus) -> Self {
        ClassF2 { genus, bits: 0 }
    }

    pub fn from_bits(genus: Genus, bits: u64) -> Self {
        debug_assert_eq!(bits >> genus.dim(), 0, "stray bits beyond 2g");
        ClassF2 { genus, bits }
    }

    pub fn x(genus: Genus, i: usize) -> Self {
        Self::from_bits(genus, 1 << x_index(i))
    }

    pub fn y(genus: Genus, i: usize) -> Self {
        Self::from_bits(genus, 1 << y_index(i))
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.genus, other.genus);
        ClassF2 {
            genus: self.genus,
            bits: self.bits ^ other.bits,
        }
    }

    /// Mask selecting the x-positions (even bit indices).
    fn x_mask(genus: Genus) -> u64 {
        let mut m = 0u64;
        for i in 1..=genus.get() {
            m |= 1 << x_index(i);
        }
        m
    }

    /// Parses the bracketed bit list "`[1,1,0,0]`" in basis order.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = parse_bit_list(text)?;
        let genus = Genus::new(bits.len() / 2)?;
        if bits.len() != genus.dim() {
            return Err(Error::Syntax {
                position: 0,
                message: "bit list must have even length 2g".into(),
            });
        }
        let mut value = 0u64;
        for (k, b) in bits.iter().enumerate() {
            if *b {
                value |= 1 << k;
            }
        }
        Ok(ClassF2::from_bits(genus, value))
    }
}

impl Serialize for ClassF2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::fmt::Display for ClassF2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for k in 0..self.genus.dim() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", (self.bits >> k) & 1)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn parse_bit_list(text: &str) -> Result<Vec<bool>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Syntax {
            position: 0,
            message: "expected a bracketed bit list like [1,1,0,0]".into(),
        })?;
    inner
        .split(',')
        .map(|piece| match piece.trim() {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(Error::Syntax {
                position: 0,
                message: format!("expected 0 or 1, got `{other}`"),
            }),
        })
        .collect()
}

/// The mod-2 intersection pairing (u, v)_2.
pub fn pairing_f2(u: &ClassF2, v: &ClassF2) -> u8 {
    debug_assert_eq!(u.genus, v.genus);
    let xm = ClassF2::x_mask(u.genus);
    let t1 = u.bits & (v.bits >> 1) & xm;
    let t2 = (u.bits >> 1) & v.bits & xm;
    ((t1.count_ones() + t2.count_ones()) & 1) as u8
}

/// A 2g x 2g matrix over F2 preserving the mod-2 intersection pairing,
/// one bitmask per row. Acts on the left of column classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixF2 {
    genus: Genus,
    rows: Vec<u64>,
}

impl MatrixF2 {
    pub fn zero(genus: Genus) -> Self {
        MatrixF2 {
            genus,
            rows: vec![0; genus.dim()],
        }
    }

    pub fn identity(genus: Genus) -> Self {
        let mut m = Self::zero(genus);
        for k in 0..genus.dim() {
            m.rows[k] = 1 << k;
        }
        m
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(k, &r)| r == (1 << k))
    }

    pub(crate) fn set_column(&mut self, col: usize, bits: u64) {
        for (i, row) in self.rows.iter_mut().enumerate() {
            let bit = (bits >> i) & 1;
            *row = (*row & !(1 << col)) | (bit << col);
        }
    }

    pub fn column(&self, col: usize) -> ClassF2 {
        let mut bits = 0u64;
        for (i, row) in self.rows.iter().enumerate() {
            bits |= ((row >> col) & 1) << i;
        }
        ClassF2::from_bits(self.genus, bits)
    }

    pub fn apply(&self, v: &ClassF2) -> ClassF2 {
        debug_assert_eq!(self.genus, v.genus);
        let mut bits = 0u64;
        for (i, row) in self.rows.iter().enumerate() {
            bits |= (((row & v.bits).count_ones() & 1) as u64) << i;
        }
        ClassF2::from_bits(self.genus, bits)
    }

    /// (self * other) applies other first.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.genus, other.genus);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    acc ^= other.rows[k];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        MatrixF2 {
            genus: self.genus,
            rows,
        }
    }

    /// True iff the matrix preserves the mod-2 pairing (equivalently, is
    /// invertible and symplectic over F2).
    pub fn is_symplectic_f2(&self) -> bool {
        let n = self.genus.dim();
        for j in 0..n {
            for k in (j + 1)..n {
                let got = pairing_f2(&self.column(j), &self.column(k));
                let want = if j % 2 == 0 && k == j + 1 { 1 } else { 0 };
                if got != want {
                    return false;
                }
            }
        }
        true
    }
}

/// The Z2-transvection about z: v -> v + (z, v)_2 z. An involution; it
/// preserves a quadratic form q exactly when q(z) = 1.
pub fn z2_transvection(z: &ClassF2) -> Result<MatrixF2> {
    if z.is_zero() {
        return Err(Error::ZeroClass);
    }
    let genus = z.genus;
    // (z, v)_2 as a linear functional of v is the pairing mask: swap the
    // x/y bit within each block of z.
    let xm = ClassF2::x_mask(genus);
    let dual = ((z.bits & xm) << 1) | ((z.bits >> 1) & xm);
    let mut m = MatrixF2::identity(genus);
    for (i, row) in m.rows.iter_mut().enumerate() {
        if (z.bits >> i) & 1 == 1 {
            *row ^= dual;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn pairing_matches_symplectic_form() {
        let g2 = g(2);
        let x1 = ClassF2::x(g2, 1);
        let y1 = ClassF2::y(g2, 1);
        let x2 = ClassF2::x(g2, 2);
        assert_eq!(pairing_f2(&x1, &y1), 1);
        assert_eq!(pairing_f2(&y1, &x1), 1);
        assert_eq!(pairing_f2(&x1, &x2), 0);
        assert_eq!(pairing_f2(&x1, &x1), 0);
    }

    #[test]
    fn transvection_is_involution() {
        let g2 = g(2);
        for bits in 1u64..16 {
            let z = ClassF2::from_bits(g2, bits);
            let t = z2_transvection(&z).unwrap();
            assert!(t.mul(&t).is_identity());
            assert!(t.is_symplectic_f2());
        }
        assert!(z2_transvection(&ClassF2::zero(g2)).is_err());
    }

    #[test]
    fn transvection_action() {
        let g2 = g(2);
        let x1 = ClassF2::x(g2, 1);
        let y1 = ClassF2::y(g2, 1);
        let t = z2_transvection(&x1).unwrap();
        assert_eq!(t.apply(&y1), x1.add(&y1));
        assert_eq!(t.apply(&x1), x1);
    }

    #[test]
    fn class_parse_roundtrip() {
        let c = ClassF2::parse("[1,0,1,1]").unwrap();
        assert_eq!(c.to_string(), "[1,0,1,1]");
        assert!(ClassF2::parse("[1,0,2]").is_err());
        assert!(ClassF2::parse("1,0").is_err());
    }
}
