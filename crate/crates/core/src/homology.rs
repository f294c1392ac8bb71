//! Exact linear algebra on H1 of the genus-g surface over Z.
//!
//! The basis is ordered (x1, y1, ..., xg, yg) and the intersection form is
//! block diagonal with 2x2 blocks `[[0,1],[-1,0]]`, so (xi, yj) = delta_ij and
//! (xi, xj) = (yi, yj) = 0. Matrices act on the left of column classes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::f2::{ClassF2, MatrixF2};
use crate::genus::{x_index, y_index, Genus};
use crate::{Error, Result};

/// An integral first-homology class, a vector of length 2g in the fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    genus: Genus,
    coeffs: Vec<BigInt>,
}

impl HomologyClass {
    pub fn zero(genus: Genus) -> Self {
        HomologyClass {
            genus,
            coeffs: vec![BigInt::zero(); genus.dim()],
        }
    }

    pub fn from_coeffs(genus: Genus, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != genus.dim() {
            return Err(Error::GenusMismatch(coeffs.len(), genus.dim()));
        }
        Ok(HomologyClass { genus, coeffs })
    }

    pub fn from_i64(genus: Genus, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(genus, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The basis class x_i, 1 <= i <= g.
    pub fn x(genus: Genus, i: usize) -> Self {
        let mut v = Self::zero(genus);
        v.coeffs[x_index(i)] = BigInt::one();
        v
    }

    /// The basis class y_i, 1 <= i <= g.
    pub fn y(genus: Genus, i: usize) -> Self {
        let mut v = Self::zero(genus);
        v.coeffs[y_index(i)] = BigInt::one();
        v
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// gcd of the coefficients is 1 (so the class is not a proper multiple).
    pub fn is_primitive(&self) -> bool {
        let mut d = BigInt::zero();
        for c in &self.coeffs {
            d = d.gcd(c);
        }
        d.is_one()
    }

    pub fn negate(&self) -> Self {
        HomologyClass {
            genus: self.genus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        Ok(HomologyClass {
            genus: self.genus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        Ok(HomologyClass {
            genus: self.genus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// The F2 shadow: coefficients mod 2, bit-packed.
    pub fn mod2(&self) -> ClassF2 {
        let mut bits = 0u64;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_odd() {
                bits |= 1 << k;
            }
        }
        ClassF2::from_bits(self.genus, bits)
    }

    fn check_genus(&self, other: &Self) -> Result<()> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch(self.genus.get(), other.genus.get()));
        }
        Ok(())
    }
}

impl std::fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if k % 2 == 0 {
                format!("x{}", k / 2 + 1)
            } else {
                format!("y{}", k / 2 + 1)
            };
            if first {
                if c.is_one() {
                    write!(f, "{name}")?;
                } else if (-c.clone()).is_one() {
                    write!(f, "-{name}")?;
                } else {
                    write!(f, "{c}*{name}")?;
                }
                first = false;
            } else if c.is_positive() {
                if c.is_one() {
                    write!(f, "+{name}")?;
                } else {
                    write!(f, "+{c}*{name}")?;
                }
            } else if (-c.clone()).is_one() {
                write!(f, "-{name}")?;
            } else {
                write!(f, "{c}*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Algebraic intersection number (u, v) in the fixed symplectic basis.
pub fn intersection(u: &HomologyClass, v: &HomologyClass) -> Result<BigInt> {
    if u.genus() != v.genus() {
        return Err(Error::GenusMismatch(u.genus().get(), v.genus().get()));
    }
    let g = u.genus().get();
    let mut acc = BigInt::zero();
    for i in 1..=g {
        let xi = x_index(i);
        let yi = y_index(i);
        acc += &u.coeffs[xi] * &v.coeffs[yi] - &u.coeffs[yi] * &v.coeffs[xi];
    }
    Ok(acc)
}

/// The transvection T_a(v) = v + (a, v) a, the homology action of the Dehn
/// twist about a curve representing a.
pub fn transvect(a: &HomologyClass, v: &HomologyClass) -> Result<HomologyClass> {
    let n = intersection(a, v)?;
    let mut out = v.clone();
    for (o, c) in out.coeffs.iter_mut().zip(&a.coeffs) {
        *o += &n * c;
    }
    Ok(out)
}

/// Applies T_a^e in place: v += e (a, v) a. Shared by word evaluation.
pub(crate) fn transvect_pow_in_place(a: &HomologyClass, e: i64, v: &mut HomologyClass) {
    let n = intersection(a, v).expect("same genus") * BigInt::from(e);
    if n.is_zero() {
        return;
    }
    for (o, c) in v.coeffs.iter_mut().zip(&a.coeffs) {
        *o += &n * c;
    }
}

/// A 2g x 2g integer matrix preserving the intersection form, stored by
/// columns (column k is the image of the k-th basis class).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticMatrix {
    genus: Genus,
    cols: Vec<HomologyClass>,
}

impl SymplecticMatrix {
    pub fn identity(genus: Genus) -> Self {
        let cols = (0..genus.dim())
            .map(|k| {
                let mut v = HomologyClass::zero(genus);
                v.coeffs[k] = BigInt::one();
                v
            })
            .collect();
        SymplecticMatrix { genus, cols }
    }

    pub(crate) fn from_columns(genus: Genus, cols: Vec<HomologyClass>) -> Self {
        debug_assert_eq!(cols.len(), genus.dim());
        SymplecticMatrix { genus, cols }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.cols[col].coeffs[row]
    }

    pub fn column(&self, col: usize) -> &HomologyClass {
        &self.cols[col]
    }

    /// Row-major copy of the entries, the external text form.
    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        let n = self.genus.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        let n = self.genus.dim();
        (0..n).all(|j| {
            self.cols[j].coeffs.iter().enumerate().all(|(i, c)| {
                if i == j {
                    c.is_one()
                } else {
                    c.is_zero()
                }
            })
        })
    }

    pub fn apply(&self, v: &HomologyClass) -> Result<HomologyClass> {
        if v.genus() != self.genus {
            return Err(Error::GenusMismatch(v.genus().get(), self.genus.get()));
        }
        let mut out = HomologyClass::zero(self.genus);
        for (vk, col) in v.coeffs.iter().zip(&self.cols) {
            if vk.is_zero() {
                continue;
            }
            for (o, c) in out.coeffs.iter_mut().zip(&col.coeffs) {
                *o += vk * c;
            }
        }
        Ok(out)
    }

    /// Matrix product; (self * other) acts as other first, then self.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch(self.genus.get(), other.genus.get()));
        }
        let cols = other
            .cols
            .iter()
            .map(|c| self.apply(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymplecticMatrix {
            genus: self.genus,
            cols,
        })
    }

    /// True iff M^T J M = J, i.e. the matrix preserves the intersection form.
    pub fn is_symplectic(&self) -> bool {
        let g = self.genus.get();
        let n = self.genus.dim();
        for j in 0..n {
            for k in j..n {
                let got = intersection(&self.cols[j], &self.cols[k]).expect("same genus");
                let want: BigInt = if j % 2 == 0 && k == j + 1 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                if got != want {
                    return false;
                }
            }
        }
        debug_assert_eq!(n, 2 * g);
        true
    }

    /// Entrywise reduction mod 2. A group homomorphism to Sp(2g, F2).
    pub fn mod2_reduce(&self) -> MatrixF2 {
        let mut m = MatrixF2::zero(self.genus);
        for (j, col) in self.cols.iter().enumerate() {
            let bits = col.mod2().bits();
            m.set_column(j, bits);
        }
        m
    }

    /// Membership in the level-2 congruence kernel Sp^(2)(2g): the mod-2
    /// reduction is the identity. Rejects non-symplectic input.
    pub fn in_level2_kernel(&self) -> Result<bool> {
        if !self.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        Ok(self.mod2_reduce().is_identity())
    }
}

/// Matrix of the transvection T_a. T_{-a} = T_a, and T_0 is the identity.
pub fn transvection_matrix(a: &HomologyClass) -> SymplecticMatrix {
    transvection_power_matrix(a, 1)
}

/// Matrix of T_a^e: v -> v + e (a, v) a.
pub fn transvection_power_matrix(a: &HomologyClass, e: i64) -> SymplecticMatrix {
    let genus = a.genus();
    let mut m = SymplecticMatrix::identity(genus);
    for col in m.cols.iter_mut() {
        transvect_pow_in_place(a, e, col);
    }
    m
}

/// Matrix of the square transvection T_a^2 about a primitive class.
/// Its mod-2 reduction is the identity.
pub fn square_transvection_matrix(a: &HomologyClass) -> Result<SymplecticMatrix> {
    if !a.is_primitive() {
        return Err(Error::NotPrimitive(a.to_string()));
    }
    Ok(transvection_power_matrix(a, 2))
}
