//! Membership of twist words in the spin subgroup of a quadratic form, and
//! the extendability test it decides for the connected-sum surfaces in the
//! complex projective plane.
//!
//! Membership in the form stabilizer is exact: the spin subgroup is defined
//! by the homology action, so checking q . Phi2(w) = q decides it. The
//! extendability reading for (CP^2, K3 # Sigma_{g-1}) identifies the Rokhlin
//! form of that surface with the odd reference form q1; reports label the
//! verdict accordingly.

use serde::Serialize;

use crate::f2::{z2_transvection, ClassF2, MatrixF2};
use crate::genus::Genus;
use crate::quadform::QuadraticForm;
use crate::words::TwistWord;
use crate::Result;

/// Outcome of a spin membership test.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    /// A class whose form value changes under the word's action, when the
    /// word is not a member; the least such class in bit order.
    pub failing_class: Option<ClassF2>,
    /// The F2 image of the word.
    #[serde(serialize_with = "serialize_matrix")]
    pub image: MatrixF2,
}

fn serialize_matrix<S: serde::Serializer>(
    m: &MatrixF2,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let n = m.genus().dim();
    let mut seq = s.serialize_seq(Some(n))?;
    for i in 0..n {
        let row: Vec<u8> = (0..n).map(|j| ((m.rows()[i] >> j) & 1) as u8).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// Tests whether the word stabilizes q under the homology action.
pub fn is_spin_member(
    word: &TwistWord,
    q: &QuadraticForm,
    genus: Genus,
) -> Result<MembershipReport> {
    word.check_range(genus)?;
    let image = word.evaluate_f2(genus)?;
    let acted = q.act_unchecked(&image);
    if acted == *q {
        return Ok(MembershipReport {
            member: true,
            failing_class: None,
            image,
        });
    }
    // Find the least class in bit order whose value moves.
    let mut failing = None;
    for bits in 1u64..(1 << genus.dim()) {
        let v = ClassF2::from_bits(genus, bits);
        if q.eval(&image.apply(&v))? != q.eval(&v)? {
            failing = Some(v);
            break;
        }
    }
    debug_assert!(failing.is_some());
    Ok(MembershipReport {
        member: false,
        failing_class: failing,
        image,
    })
}

/// Extendability over the connected sum of the cubic curve and the trivial
/// surface: the word extends iff it stabilizes the odd reference form q1.
pub fn is_extendable_k3_sum(word: &TwistWord, genus: Genus) -> Result<bool> {
    genus.require_at_least(2, "the connected-sum criterion requires genus at least 2")?;
    Ok(is_spin_member(word, &QuadraticForm::q1(genus), genus)?.member)
}

/// A homological witness that the stabilizer of q is proper: the least
/// nonzero z in bit order with q(z) = 0, together with the transvection
/// about z, which then moves q. Returns None in the single degenerate
/// family (the odd form at genus 1, where every nonzero class has value 1).
pub fn non_preserving_witness(
    q: &QuadraticForm,
    genus: Genus,
) -> Result<Option<(ClassF2, MatrixF2)>> {
    for bits in 1u64..(1 << genus.dim()) {
        let z = ClassF2::from_bits(genus, bits);
        if q.eval(&z)? == 0 {
            let t = z2_transvection(&z)?;
            debug_assert_ne!(q.act_unchecked(&t), *q);
            return Ok(Some((z, t)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn twist_membership_examples() {
        let g2 = g(2);
        let q1 = QuadraticForm::q1(g2);
        let c1 = parse_word("C1", g2).unwrap();
        assert!(is_spin_member(&c1, &q1, g2).unwrap().member);

        let c4 = parse_word("C4", g2).unwrap();
        let report = is_spin_member(&c4, &q1, g2).unwrap();
        assert!(!report.member);
        assert_eq!(report.failing_class.unwrap(), ClassF2::x(g2, 2));

        let c4c4 = parse_word("C4 C4", g2).unwrap();
        assert!(is_spin_member(&c4c4, &q1, g2).unwrap().member);
    }

    #[test]
    fn extendability_examples() {
        let g2 = g(2);
        assert!(is_extendable_k3_sum(&TwistWord::identity(), g2).unwrap());
        assert!(!is_extendable_k3_sum(&parse_word("C4", g2).unwrap(), g2).unwrap());
        assert!(is_extendable_k3_sum(&TwistWord::identity(), g(1)).is_err());
    }

    #[test]
    fn witness_examples() {
        let g2 = g(2);
        let (z, t) = non_preserving_witness(&QuadraticForm::q1(g2), g2)
            .unwrap()
            .unwrap();
        assert_eq!(z, ClassF2::x(g2, 2));
        assert_ne!(
            QuadraticForm::q1(g2).act(&t).unwrap(),
            QuadraticForm::q1(g2)
        );

        let g1 = g(1);
        let (z0, _) = non_preserving_witness(&QuadraticForm::q0(g1), g1)
            .unwrap()
            .unwrap();
        assert_eq!(z0, ClassF2::x(g1, 1));
        // The odd genus-1 form takes value 1 on all three nonzero classes.
        assert!(non_preserving_witness(&QuadraticForm::q1(g1), g1)
            .unwrap()
            .is_none());
    }
}
