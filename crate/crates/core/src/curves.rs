//! The named-curve homology catalog.
//!
//! Classes of the chain curves c_1..c_{2g+1}, the handle curves b_4, b_6,
//! ..., b_{2g-2}, the pushed-off curve b_4', and the auxiliary chain start
//! c_beta. Signs follow the fixed catalog below; since T_{-a} = T_a the sign
//! choices never affect an evaluated matrix.

use num_bigint::BigInt;
use num_traits::One;

use crate::genus::{x_index, Genus};
use crate::homology::{transvect_pow_in_place, HomologyClass};
use crate::{Error, Result};

/// A curve name the catalog resolves to a homology class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveName {
    /// c_i for 1 <= i <= 2g+1.
    C(usize),
    /// b_{2j} for 2 <= j <= g-1 (even index 4 <= i <= 2g-2).
    B(usize),
    /// The curve b_4' = C4 C3 C2 C1 C1 C2 C3 C4 (b_4).
    BPrime4,
    /// The start of the auxiliary chain (c_beta, c_5, ..., c_{2g+1}).
    /// Its class is a documented default, see the module notes.
    CBeta,
}

impl CurveName {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "b4'" {
            return Ok(CurveName::BPrime4);
        }
        if t == "cbeta" {
            return Ok(CurveName::CBeta);
        }
        if let Some(rest) = t.strip_prefix('c') {
            if let Ok(i) = rest.parse::<usize>() {
                return Ok(CurveName::C(i));
            }
        }
        if let Some(rest) = t.strip_prefix('b') {
            if let Ok(i) = rest.parse::<usize>() {
                return Ok(CurveName::B(i));
            }
        }
        Err(Error::UnknownCurve(text.to_string()))
    }
}

impl std::fmt::Display for CurveName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveName::C(i) => write!(f, "c{i}"),
            CurveName::B(i) => write!(f, "b{i}"),
            CurveName::BPrime4 => write!(f, "b4'"),
            CurveName::CBeta => write!(f, "cbeta"),
        }
    }
}

/// Resolves a curve name to its homology class at genus g.
///
/// Catalog: `[c1] = -x1`, `[c_{2k}] = -y_k`, `[b_{2i}] = x_i`,
/// `[c_{2g+1}] = x_g`, `[c_{2i+1}] = x_i + x_{i+1}` for 1 <= i <= g-1,
/// `[b4']` is the image of x2
/// under the twist word C4 C3 C2 C1 C1 C2 C3 C4, and `[cbeta]` defaults to x2.
pub fn curve_class(name: CurveName, genus: Genus) -> Result<HomologyClass> {
    let g = genus.get();
    match name {
        CurveName::C(i) => {
            if i == 0 || i > 2 * g + 1 {
                return Err(Error::IndexOutOfRange {
                    symbol: format!("c{i}"),
                    genus: g,
                });
            }
            if i == 1 {
                Ok(HomologyClass::x(genus, 1).negate())
            } else if i % 2 == 0 {
                Ok(HomologyClass::y(genus, i / 2).negate())
            } else if i == 2 * g + 1 {
                Ok(HomologyClass::x(genus, g))
            } else {
                // c_{2k+1} with 1 <= k <= g-1.
                let k = (i - 1) / 2;
                let mut coeffs = vec![BigInt::from(0); genus.dim()];
                coeffs[x_index(k)] = BigInt::one();
                coeffs[x_index(k + 1)] = BigInt::one();
                HomologyClass::from_coeffs(genus, coeffs)
            }
        }
        CurveName::B(i) => {
            if i < 4 || i > 2 * g - 2 || i % 2 != 0 {
                return Err(Error::IndexOutOfRange {
                    symbol: format!("b{i}"),
                    genus: g,
                });
            }
            Ok(HomologyClass::x(genus, i / 2))
        }
        CurveName::BPrime4 => {
            genus.require_at_least(3, "b4' requires genus at least 3")?;
            let mut v = curve_class(CurveName::B(4), genus)?;
            // Apply C4 C3 C2 C1 C1 C2 C3 C4 to b4, rightmost twist first.
            for &i in &[4, 3, 2, 1, 1, 2, 3, 4] {
                let a = curve_class(CurveName::C(i), genus)?;
                transvect_pow_in_place(&a, 1, &mut v);
            }
            Ok(v)
        }
        CurveName::CBeta => {
            genus.require_at_least(3, "cbeta requires genus at least 3")?;
            Ok(HomologyClass::x(genus, 2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::intersection;
    use num_traits::Zero;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn catalog_basis_classes() {
        let g2 = g(2);
        assert_eq!(
            curve_class(CurveName::C(1), g2).unwrap(),
            HomologyClass::x(g2, 1).negate()
        );
        assert_eq!(
            curve_class(CurveName::C(5), g2).unwrap(),
            HomologyClass::x(g2, 2)
        );
        assert_eq!(
            curve_class(CurveName::C(4), g2).unwrap(),
            HomologyClass::y(g2, 2).negate()
        );
        let c3 = curve_class(CurveName::C(3), g2).unwrap();
        assert_eq!(
            c3,
            HomologyClass::x(g2, 1)
                .add(&HomologyClass::x(g2, 2))
                .unwrap()
        );
    }

    #[test]
    fn b_prime_4_is_minus_b4() {
        // The pushed-off curve is homologous to b_4 up to sign, which is what
        // makes B4 B4'^{-1} act trivially on homology.
        for n in 3..=5 {
            let gn = g(n);
            let b4p = curve_class(CurveName::BPrime4, gn).unwrap();
            let b4 = curve_class(CurveName::B(4), gn).unwrap();
            assert_eq!(b4p, b4.negate());
        }
    }

    #[test]
    fn chain_adjacency() {
        // Consecutive chain curves pair to +-1, non-consecutive to 0.
        let g3 = g(3);
        for i in 1..=6 {
            let a = curve_class(CurveName::C(i), g3).unwrap();
            let b = curve_class(CurveName::C(i + 1), g3).unwrap();
            let n = intersection(&a, &b).unwrap();
            assert_eq!(n.magnitude().to_string(), "1", "pair c{i}, c{}", i + 1);
        }
        for i in 1..=5 {
            let a = curve_class(CurveName::C(i), g3).unwrap();
            let b = curve_class(CurveName::C(i + 2), g3).unwrap();
            assert!(intersection(&a, &b).unwrap().is_zero());
        }
        // b4 meets c4 once and is homologically disjoint from c5.
        let b4 = curve_class(CurveName::B(4), g3).unwrap();
        let c4 = curve_class(CurveName::C(4), g3).unwrap();
        let c5 = curve_class(CurveName::C(5), g3).unwrap();
        assert_eq!(intersection(&b4, &c4).unwrap().magnitude().to_string(), "1");
        assert!(intersection(&b4, &c5).unwrap().is_zero());
    }

    #[test]
    fn index_range_checks() {
        let g2 = g(2);
        assert!(curve_class(CurveName::C(6), g2).is_err());
        assert!(curve_class(CurveName::B(4), g2).is_err());
        assert!(curve_class(CurveName::BPrime4, g2).is_err());
        assert!(curve_class(CurveName::B(5), g(3)).is_err());
        assert!(CurveName::parse("q3").is_err());
    }
}
