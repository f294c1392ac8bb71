//! Z2-quadratic forms on H1 of the surface.
//!
//! A form is stored by its 2g basis values; evaluation on arbitrary classes
//! uses the expansion rule q(u+v) = q(u) + q(v) + (u,v)_2, which makes the
//! value on a sum of basis elements independent of summation order.

use serde::{Deserialize, Serialize};

use crate::f2::{pairing_f2, parse_bit_list, ClassF2, MatrixF2};
use crate::genus::{x_index, Genus};
use crate::{Error, Result};

/// Default cap on exhaustive enumerations (2^{2g} classes or forms).
pub const ENUMERATION_CAP: usize = 8;

/// A Z2-quadratic form, stored by its values on (x1, y1, ..., xg, yg).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadraticForm {
    genus: Genus,
    basis_values: u64,
}

impl QuadraticForm {
    pub fn from_basis_values(genus: Genus, basis_values: u64) -> Self {
        debug_assert_eq!(basis_values >> genus.dim(), 0);
        QuadraticForm {
            genus,
            basis_values,
        }
    }

    /// The even reference form: zero on every basis element.
    pub fn q0(genus: Genus) -> Self {
        QuadraticForm {
            genus,
            basis_values: 0,
        }
    }

    /// The odd reference form: q(x1) = q(y1) = 1, zero elsewhere.
    pub fn q1(genus: Genus) -> Self {
        QuadraticForm {
            genus,
            basis_values: 0b11,
        }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn basis_values(&self) -> u64 {
        self.basis_values
    }

    /// Parses the bracketed bit list "`[1,1,0,0]`" of basis values.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = parse_bit_list(text)?;
        if bits.len() % 2 != 0 || bits.is_empty() {
            return Err(Error::Syntax {
                position: 0,
                message: "a form needs 2g basis values".into(),
            });
        }
        let genus = Genus::new(bits.len() / 2)?;
        let mut v = 0u64;
        for (k, b) in bits.iter().enumerate() {
            if *b {
                v |= 1 << k;
            }
        }
        Ok(QuadraticForm::from_basis_values(genus, v))
    }

    /// Evaluates the form on a class by the quadratic expansion rule.
    pub fn eval(&self, v: &ClassF2) -> Result<u8> {
        if v.genus() != self.genus {
            return Err(Error::GenusMismatch(v.genus().get(), self.genus.get()));
        }
        // Sum of basis values over the support, plus the number of support
        // pairs with nonzero pairing; only (x_i, y_i) pairs contribute.
        let linear = (self.basis_values & v.bits()).count_ones();
        let xm = x_mask(self.genus);
        let cross = (v.bits() & (v.bits() >> 1) & xm).count_ones();
        Ok(((linear + cross) & 1) as u8)
    }

    /// Arf invariant: sum of q(x_i) q(y_i) over the blocks.
    pub fn arf(&self) -> u8 {
        let xm = x_mask(self.genus);
        ((self.basis_values & (self.basis_values >> 1) & xm).count_ones() & 1) as u8
    }

    /// The right action (q . M)(v) = q(M v). Rejects non-symplectic M.
    pub fn act(&self, m: &MatrixF2) -> Result<QuadraticForm> {
        if m.genus() != self.genus {
            return Err(Error::GenusMismatch(m.genus().get(), self.genus.get()));
        }
        if !m.is_symplectic_f2() {
            return Err(Error::NotSymplectic);
        }
        Ok(self.act_unchecked(m))
    }

    /// Same as `act` without the symplectic check; used by closure searches
    /// over matrices already known to be products of transvections.
    pub fn act_unchecked(&self, m: &MatrixF2) -> QuadraticForm {
        let mut basis_values = 0u64;
        for k in 0..self.genus.dim() {
            let image = m.apply(&ClassF2::from_bits(self.genus, 1 << k));
            basis_values |= (self.eval(&image).expect("same genus") as u64) << k;
        }
        QuadraticForm {
            genus: self.genus,
            basis_values,
        }
    }
}

impl std::fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for k in 0..self.genus.dim() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", (self.basis_values >> k) & 1)?;
        }
        write!(f, "]")
    }
}

fn x_mask(genus: Genus) -> u64 {
    let mut m = 0u64;
    for i in 1..=genus.get() {
        m |= 1 << x_index(i);
    }
    m
}

/// The box operation z1 [] z2 = z1 + (z2, z1)_2 z2 on the set of q-value-1
/// classes. Mirrors conjugation of Z2-transvections:
/// T_{z2} T_{z1} T_{z2}^{-1} = T_{z1 [] z2}, and (z1 [] z2) [] z2 = z1.
pub fn box_op(q: &QuadraticForm, z1: &ClassF2, z2: &ClassF2) -> Result<ClassF2> {
    for z in [z1, z2] {
        if q.eval(z)? != 1 {
            return Err(Error::NotInLambda(z.to_string()));
        }
    }
    let out = if pairing_f2(z2, z1) == 1 {
        z1.add(z2)
    } else {
        *z1
    };
    Ok(out)
}

/// All classes z with q(z) = 1 (the transvection domain of q), in increasing
/// bit order. Errors beyond the enumeration cap.
pub fn enumerate_lambda(q: &QuadraticForm) -> Result<Vec<ClassF2>> {
    let genus = q.genus();
    check_cap(genus)?;
    let mut out = Vec::new();
    for bits in 1u64..(1 << genus.dim()) {
        let v = ClassF2::from_bits(genus, bits);
        if q.eval(&v)? == 1 {
            out.push(v);
        }
    }
    Ok(out)
}

/// All 2^{2g} forms with the requested Arf invariant, in increasing bit order.
pub fn enumerate_forms(genus: Genus, arf: u8) -> Result<Vec<QuadraticForm>> {
    check_cap(genus)?;
    let mut out = Vec::new();
    for bits in 0u64..(1 << genus.dim()) {
        let q = QuadraticForm::from_basis_values(genus, bits);
        if q.arf() == arf {
            out.push(q);
        }
    }
    Ok(out)
}

fn check_cap(genus: Genus) -> Result<()> {
    if genus.get() > ENUMERATION_CAP {
        return Err(Error::CapExceeded(genus.get(), ENUMERATION_CAP));
    }
    Ok(())
}

/// Number of q-value-1 classes: 2^{2g-1} - 2^{g-1} for even forms and
/// 2^{2g-1} + 2^{g-1} for odd forms (depends only on the Arf invariant).
pub fn lambda_size(genus: Genus, arf: u8) -> u64 {
    let g = genus.get() as u32;
    if arf == 0 {
        (1u64 << (2 * g - 1)) - (1u64 << (g - 1))
    } else {
        (1u64 << (2 * g - 1)) + (1u64 << (g - 1))
    }
}

/// Number of Z2-quadratic forms with the given Arf invariant:
/// 2^{2g-1} + 2^{g-1} even ones and 2^{2g-1} - 2^{g-1} odd ones.
pub fn form_count(genus: Genus, arf: u8) -> u64 {
    let g = genus.get() as u32;
    if arf == 0 {
        (1u64 << (2 * g - 1)) + (1u64 << (g - 1))
    } else {
        (1u64 << (2 * g - 1)) - (1u64 << (g - 1))
    }
}

pub use crate::f2::z2_transvection as transvection_about;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::z2_transvection;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    /// Order-dependent expansion used as an oracle: peel off basis elements
    /// one at a time in the supplied order.
    fn eval_by_expansion(q: &QuadraticForm, v: &ClassF2, order: &[usize]) -> u8 {
        let genus = q.genus();
        let mut acc = 0u8;
        let mut rest = *v;
        for &k in order {
            if (rest.bits() >> k) & 1 == 0 {
                continue;
            }
            let e = ClassF2::from_bits(genus, 1 << k);
            let without = ClassF2::from_bits(genus, rest.bits() & !(1 << k));
            // q(rest) = q(e) + q(without) + (e, without)_2
            acc ^= (((q.basis_values() >> k) & 1) as u8) ^ pairing_f2(&e, &without);
            rest = without;
        }
        acc
    }

    #[test]
    fn eval_examples() {
        let g2 = g(2);
        let q1 = QuadraticForm::q1(g2);
        let x1y1 = ClassF2::from_bits(g2, 0b0011);
        let x1x2 = ClassF2::from_bits(g2, 0b0101);
        assert_eq!(q1.eval(&x1y1).unwrap(), 1);
        assert_eq!(q1.eval(&x1x2).unwrap(), 1);
        assert_eq!(q1.eval(&ClassF2::zero(g2)).unwrap(), 0);
        assert_eq!(QuadraticForm::q0(g2).eval(&ClassF2::zero(g2)).unwrap(), 0);
    }

    #[test]
    fn eval_is_order_independent() {
        let g3 = g(3);
        for qbits in [0u64, 0b11, 0b101101, 0b111111] {
            let q = QuadraticForm::from_basis_values(g3, qbits);
            for vbits in 0u64..64 {
                let v = ClassF2::from_bits(g3, vbits);
                let forward: Vec<usize> = (0..6).collect();
                let backward: Vec<usize> = (0..6).rev().collect();
                let shuffled = [3, 0, 5, 2, 4, 1];
                let a = eval_by_expansion(&q, &v, &forward);
                let b = eval_by_expansion(&q, &v, &backward);
                let c = eval_by_expansion(&q, &v, &shuffled);
                assert_eq!(a, b);
                assert_eq!(a, c);
                assert_eq!(a, q.eval(&v).unwrap());
            }
        }
    }

    #[test]
    fn arf_examples() {
        let g2 = g(2);
        assert_eq!(QuadraticForm::q0(g2).arf(), 0);
        assert_eq!(QuadraticForm::q1(g2).arf(), 1);
        assert_eq!(QuadraticForm::from_basis_values(g2, 0b1111).arf(), 0);
    }

    #[test]
    fn action_examples() {
        // q1 . C4 and q1 . C5 at genus 2, against the transvection images.
        let g2 = g(2);
        let q1 = QuadraticForm::q1(g2);
        let t_y2 = z2_transvection(&ClassF2::y(g2, 2)).unwrap();
        let t_x2 = z2_transvection(&ClassF2::x(g2, 2)).unwrap();
        assert_eq!(q1.act(&t_y2).unwrap().to_string(), "[1,1,1,0]");
        assert_eq!(q1.act(&t_x2).unwrap().to_string(), "[1,1,0,1]");
        assert_eq!(q1.act(&MatrixF2::identity(g2)).unwrap(), q1);
    }

    #[test]
    fn action_is_functorial() {
        let g2 = g(2);
        let q1 = QuadraticForm::q1(g2);
        let a = z2_transvection(&ClassF2::from_bits(g2, 0b0110)).unwrap();
        let b = z2_transvection(&ClassF2::from_bits(g2, 0b1011)).unwrap();
        let lhs = q1.act(&a).unwrap().act(&b).unwrap();
        let rhs = q1.act(&a.mul(&b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn transvection_preserves_form_iff_value_one() {
        let g2 = g(2);
        let q1 = QuadraticForm::q1(g2);
        for bits in 1u64..16 {
            let z = ClassF2::from_bits(g2, bits);
            let t = z2_transvection(&z).unwrap();
            let preserved = q1.act(&t).unwrap() == q1;
            assert_eq!(preserved, q1.eval(&z).unwrap() == 1, "z = {z}");
        }
    }

    #[test]
    fn box_examples() {
        let g2 = g(2);
        let q1 = QuadraticForm::q1(g2);
        let x1 = ClassF2::x(g2, 1);
        let y1 = ClassF2::y(g2, 1);
        assert_eq!(box_op(&q1, &x1, &y1).unwrap(), x1.add(&y1));
        assert_eq!(box_op(&q1, &x1, &x1).unwrap(), x1);
        // ([ (0,0),(1,1) ] [] (x1+x2)) [] y1 = [(1,1),(0,1)]
        let z = ClassF2::from_bits(g2, 0b1100);
        let x1x2 = ClassF2::from_bits(g2, 0b0101);
        let step1 = box_op(&q1, &z, &x1x2).unwrap();
        let step2 = box_op(&q1, &step1, &y1).unwrap();
        assert_eq!(step2, ClassF2::from_bits(g2, 0b1011));
        // Box by a value-0 class is rejected.
        assert!(box_op(&q1, &x1, &ClassF2::x(g2, 2)).is_err());
    }

    #[test]
    fn box_matches_transvection_conjugation() {
        let g2 = g(2);
        let q1 = QuadraticForm::q1(g2);
        let lambda = enumerate_lambda(&q1).unwrap();
        for z1 in &lambda {
            for z2 in &lambda {
                let t1 = z2_transvection(z1).unwrap();
                let t2 = z2_transvection(z2).unwrap();
                let conj = t2.mul(&t1).mul(&t2);
                let boxed = z2_transvection(&box_op(&q1, z1, z2).unwrap()).unwrap();
                assert_eq!(conj, boxed);
                // ... and the operation is an involution in z2.
                let back = box_op(&q1, &box_op(&q1, z1, z2).unwrap(), z2).unwrap();
                assert_eq!(back, *z1);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let g2 = g(2);
        let q1 = QuadraticForm::q1(g2);
        assert_eq!(
            enumerate_lambda(&q1).unwrap().len() as u64,
            lambda_size(g2, 1)
        );
        assert_eq!(enumerate_lambda(&q1).unwrap().len(), 10);
        assert_eq!(enumerate_forms(g2, 1).unwrap().len(), 6);
        assert_eq!(enumerate_forms(g2, 0).unwrap().len(), 10);
        let g3 = g(3);
        assert_eq!(enumerate_lambda(&QuadraticForm::q1(g3)).unwrap().len(), 36);
        assert_eq!(enumerate_forms(g3, 1).unwrap().len(), 28);
        assert_eq!(form_count(g3, 1), 28);
        assert!(enumerate_forms(g(9), 1).is_err());
    }
}
