//! Tack sequences, odd subchain indices, and the licensed conjugation moves
//! acting on them.
//!
//! An odd subchain map is recorded by the strictly increasing index set
//! [i_1, ..., i_{r+1}] inside (1, ..., 2g+2), or equivalently by its tack
//! sequence: the bit vector of length 2g+2 marking the used indices. The
//! conjugation oracle implements the three single-twist rules
//!
//!   (a) C_j commutes when j and j+1 are both in or both out of the set;
//!   (b) conjugating by C_j^{-1} replaces j by j+1 when j+1 is absent;
//!   (c) conjugating by C_j replaces j+1 by j when j is absent;
//!
//! everything else is unlicensed. Composite moves (the pair and lone-tack
//! shifts, the T1 slide, and the complement identity) expand into these
//! single-twist steps, with the B4 letter allowed only against sequences
//! whose first four tacks agree.

use serde::Serialize;

use crate::genus::Genus;
use crate::words::{SymbolName, TwistWord};
use crate::{Error, Result};

/// Bit sequence of length 2g+2 with an even number of set tacks, recording
/// which chain indices an odd subchain map uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TackSequence {
    genus: Genus,
    bits: u64,
}

impl TackSequence {
    pub fn from_bits(genus: Genus, bits: u64) -> Result<Self> {
        if bits >> genus.chain_len() != 0 {
            return Err(Error::BadTackSequence(format!(
                "tacks beyond position {}",
                genus.chain_len()
            )));
        }
        if bits.count_ones() % 2 != 0 {
            return Err(Error::BadTackSequence(
                "odd subchain maps use an even number of indices".into(),
            ));
        }
        if bits.count_ones() < 2 {
            return Err(Error::BadTackSequence("at least two tacks required".into()));
        }
        Ok(TackSequence { genus, bits })
    }

    pub fn from_indices(genus: Genus, indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i == 0 || i > genus.chain_len() {
                return Err(Error::BadTackSequence(format!(
                    "index {i} outside 1..={}",
                    genus.chain_len()
                )));
            }
            if bits >> (i - 1) & 1 == 1 {
                return Err(Error::BadTackSequence(format!("repeated index {i}")));
            }
            bits |= 1 << (i - 1);
        }
        Self::from_bits(genus, bits)
    }

    /// Parses either a bit string "11110000" or an index list "1,2,3,4".
    pub fn parse(text: &str, genus: Genus) -> Result<Self> {
        let t = text.trim();
        if t.contains(',') || t.starts_with('[') {
            let inner = t.trim_start_matches('[').trim_end_matches(']');
            let indices = inner
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::BadTackSequence(format!("bad index `{}`", p.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::from_indices(genus, &indices);
        }
        if t.chars().all(|c| c == '0' || c == '1') && !t.is_empty() {
            if t.len() != genus.chain_len() {
                return Err(Error::BadTackSequence(format!(
                    "bit string length {} but the chain has {} positions",
                    t.len(),
                    genus.chain_len()
                )));
            }
            let mut bits = 0u64;
            for (k, c) in t.chars().enumerate() {
                if c == '1' {
                    bits |= 1 << k;
                }
            }
            return Self::from_bits(genus, bits);
        }
        Err(Error::BadTackSequence(format!("unrecognized form `{t}`")))
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn popcount(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn contains(&self, index: usize) -> bool {
        index >= 1 && index <= self.genus.chain_len() && (self.bits >> (index - 1)) & 1 == 1
    }

    pub fn indices(&self) -> Vec<usize> {
        (1..=self.genus.chain_len())
            .filter(|&i| self.contains(i))
            .collect()
    }

    /// Bit string form, "11110000".
    pub fn bit_string(&self) -> String {
        (1..=self.genus.chain_len())
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    fn with(&self, remove: usize, add: usize) -> TackSequence {
        let mut bits = self.bits;
        bits &= !(1 << (remove - 1));
        bits |= 1 << (add - 1);
        TackSequence {
            genus: self.genus,
            bits,
        }
    }

    fn complemented(&self) -> TackSequence {
        let mask = (1u64 << self.genus.chain_len()) - 1;
        TackSequence {
            genus: self.genus,
            bits: !self.bits & mask,
        }
    }
}

impl std::fmt::Display for TackSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.bit_string())
    }
}

impl Serialize for TackSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.bit_string())
    }
}

/// Outcome of a single-twist conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    /// The twist commutes with the subchain map; the sequence is unchanged.
    Commutes,
    /// The licensed substitution happened.
    Moved(TackSequence),
    /// No rule covers this configuration.
    Unlicensed(String),
}

/// The single-twist conjugation oracle: the action of C_j^{sign} on an odd
/// subchain map, per the three rules in the module notes.
pub fn conjugation_oracle(j: usize, sign: i8, s: &TackSequence) -> Result<OracleOutcome> {
    if j == 0 || j + 1 > s.genus().chain_len() {
        return Err(Error::BadTackSequence(format!(
            "twist index {j} outside the chain"
        )));
    }
    let has_j = s.contains(j);
    let has_j1 = s.contains(j + 1);
    Ok(match (has_j, has_j1, sign >= 0) {
        (true, true, _) | (false, false, _) => OracleOutcome::Commutes,
        (false, true, true) => OracleOutcome::Moved(s.with(j + 1, j)),
        (true, false, false) => OracleOutcome::Moved(s.with(j, j + 1)),
        (true, false, true) => OracleOutcome::Unlicensed(format!(
            "C{j} against a sequence containing {j} but not {}",
            j + 1
        )),
        (false, true, false) => OracleOutcome::Unlicensed(format!(
            "C{j}^-1 against a sequence containing {} but not {j}",
            j + 1
        )),
    })
}

/// True when the subchain map commutes with B4: the first four tacks agree.
pub fn b4_commutes(s: &TackSequence) -> bool {
    let prefix = s.bits & 0b1111;
    prefix == 0 || prefix == 0b1111
}

/// Primitive letters a conjugator word expands into for tack replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Letter {
    C(usize),
    B(usize),
}

fn symbol_letters(name: SymbolName, exponent: i64, out: &mut Vec<(Letter, i8)>) -> Result<()> {
    let sign = exponent.signum() as i8;
    let reps = exponent.unsigned_abs();
    match name {
        SymbolName::C(i) => {
            for _ in 0..reps {
                out.push((Letter::C(i), sign));
            }
        }
        SymbolName::B(i) => {
            for _ in 0..reps {
                out.push((Letter::B(i), sign));
            }
        }
        SymbolName::D(i) => {
            for _ in 0..2 * reps {
                out.push((Letter::C(i), sign));
            }
        }
        SymbolName::Db(i) => {
            for _ in 0..2 * reps {
                out.push((Letter::B(i), sign));
            }
        }
        SymbolName::X(i) => {
            out.push((Letter::C(i + 1), 1));
            for _ in 0..reps {
                out.push((Letter::C(i), sign));
            }
            out.push((Letter::C(i + 1), -1));
        }
        SymbolName::Xs(i) => {
            out.push((Letter::C(i + 1), -1));
            for _ in 0..reps {
                out.push((Letter::C(i), sign));
            }
            out.push((Letter::C(i + 1), 1));
        }
        SymbolName::Y(i) => {
            out.push((Letter::C(i), 1));
            for _ in 0..reps {
                out.push((Letter::B(i), sign));
            }
            out.push((Letter::C(i), -1));
        }
        SymbolName::Ys(i) => {
            out.push((Letter::C(i), -1));
            for _ in 0..reps {
                out.push((Letter::B(i), sign));
            }
            out.push((Letter::C(i), 1));
        }
        SymbolName::T1 => {
            return Err(Error::UnlicensedMove(
                "T1 conjugation is a dedicated move, not a raw letter expansion".into(),
            ));
        }
        SymbolName::BPrime4 => {
            return Err(Error::UnlicensedMove(
                "B4' does not act on tack sequences".into(),
            ));
        }
    }
    Ok(())
}

/// Replays the conjugation of a subchain map by a word, one licensed letter
/// at a time (rightmost letter first). The B4 letter requires the running
/// sequence to commute with it.
pub fn conjugate_by_word(word: &TwistWord, s: &TackSequence) -> Result<TackSequence> {
    let mut letters = Vec::new();
    for f in &word.factors {
        if f.name == SymbolName::T1 {
            // Expand T1 to its letters so the replay stays single-twist.
            let g = s.genus().get();
            let reps = f.exponent.unsigned_abs();
            let sign = f.exponent.signum() as i8;
            let mut batch = vec![(Letter::B(4), sign)];
            let mut i = 5;
            while i <= 2 * g + 1 {
                batch.push((Letter::C(i), sign));
                i += 2;
            }
            if sign < 0 {
                batch.reverse();
            }
            for _ in 0..reps {
                letters.extend(batch.iter().copied());
            }
        } else {
            symbol_letters(f.name, f.exponent, &mut letters)?;
        }
    }
    let mut at = *s;
    for (letter, sign) in letters.iter().rev() {
        match letter {
            Letter::C(j) => match conjugation_oracle(*j, *sign, &at)? {
                OracleOutcome::Commutes => {}
                OracleOutcome::Moved(next) => at = next,
                OracleOutcome::Unlicensed(msg) => {
                    return Err(Error::UnlicensedMove(format!("{msg} in {at}")));
                }
            },
            Letter::B(4) => {
                if !b4_commutes(&at) {
                    return Err(Error::UnlicensedMove(format!(
                        "B4 against {at}, whose first four tacks differ"
                    )));
                }
            }
            Letter::B(i) => {
                return Err(Error::UnlicensedMove(format!(
                    "B{i} has no licensed action on tack sequences"
                )));
            }
        }
    }
    Ok(at)
}

/// The composite licensed moves. Position arguments are 1-based chain
/// indices of the tack being moved (the left tack of the pair for the pair
/// shifts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Conjugation by C_j (j <= 3): pulls a tack from j+1 to j.
    ShiftC { j: usize },
    /// Conjugation by C_j^{-1} (j <= 3): pushes a tack from j to j+1.
    ShiftB { j: usize },
    /// Pair shift left: conjugation by X_{p-1} moves the adjacent pair
    /// (p, p+1) to (p-1, p).
    PairLeft { p: usize },
    /// Pair shift right: conjugation by X_p^{-1} moves (p, p+1) to
    /// (p+1, p+2).
    PairRight { p: usize },
    /// Lone shift left: conjugation by Xs_{p-2} moves a tack from p to p-2.
    LoneLeft { p: usize },
    /// Lone shift right: conjugation by Xs_p^{-1} moves a tack from p to
    /// p+2.
    LoneRight { p: usize },
    /// Conjugation by T1^{sign}; needs the first four tacks to agree.
    T1 { inverse: bool },
    /// The complement identity on the distinguished middle-block pattern.
    Complement,
}

impl Move {
    /// The conjugator word, empty for the complement identity.
    pub fn conjugator(&self) -> TwistWord {
        match *self {
            Move::ShiftC { j } => TwistWord::single(SymbolName::C(j), 1),
            Move::ShiftB { j } => TwistWord::single(SymbolName::C(j), -1),
            Move::PairLeft { p } => TwistWord::single(SymbolName::X(p - 1), 1),
            Move::PairRight { p } => TwistWord::single(SymbolName::X(p), -1),
            Move::LoneLeft { p } => TwistWord::single(SymbolName::Xs(p - 2), 1),
            Move::LoneRight { p } => TwistWord::single(SymbolName::Xs(p), -1),
            Move::T1 { inverse } => TwistWord::single(SymbolName::T1, if inverse { -1 } else { 1 }),
            Move::Complement => TwistWord::identity(),
        }
    }

    /// The rule-family name recorded in certificates.
    pub fn rule_name(&self) -> &'static str {
        match self {
            Move::ShiftC { .. } => "shift-c",
            Move::ShiftB { .. } => "shift-b",
            Move::PairLeft { .. } | Move::PairRight { .. } => "shiftL1",
            Move::LoneLeft { .. } | Move::LoneRight { .. } => "shiftL2",
            Move::T1 { .. } => "t1",
            Move::Complement => "complement",
        }
    }
}

/// The exact complement pattern: tacks 5..=10 set, everything else clear.
pub fn complement_pattern(genus: Genus) -> Option<TackSequence> {
    if genus.get() < 4 {
        return None;
    }
    Some(TackSequence {
        genus,
        bits: 0b11_1111_0000,
    })
}

/// Applies a licensed move, returning the new sequence and the conjugator
/// word. Conjugation moves replay through the single-twist oracle; the
/// complement move is the identity of maps on the distinguished pattern
/// pair, with an empty conjugator.
pub fn apply_move(mv: Move, s: &TackSequence) -> Result<(TackSequence, TwistWord)> {
    let genus = s.genus();
    match mv {
        Move::Complement => {
            let p = complement_pattern(genus).ok_or_else(|| {
                Error::MovePrecondition("complement requires genus at least 4".into())
            })?;
            if *s != p && *s != p.complemented() {
                return Err(Error::MovePrecondition(format!(
                    "complement applies only to {} or {}, got {s}",
                    p,
                    p.complemented()
                )));
            }
            Ok((s.complemented(), TwistWord::identity()))
        }
        Move::ShiftC { j } | Move::ShiftB { j } => {
            if !(1..=3).contains(&j) {
                return Err(Error::MovePrecondition(format!(
                    "single-twist shifts are restricted to C1..C3, got C{j}"
                )));
            }
            let word = mv.conjugator();
            let after = conjugate_by_word(&word, s)?;
            if after == *s {
                return Err(Error::MovePrecondition(format!(
                    "C{j} conjugation leaves {s} unchanged"
                )));
            }
            Ok((after, word))
        }
        Move::PairLeft { p } => {
            if p < 5 {
                return Err(Error::MovePrecondition(format!(
                    "pair shift left needs X_{} in range, so p >= 5 (got {p})",
                    p.wrapping_sub(1)
                )));
            }
            composite(mv, s)
        }
        Move::PairRight { p } => {
            if p < 4 || p + 2 > genus.chain_len() {
                return Err(Error::MovePrecondition(format!(
                    "pair shift right needs 4 <= p <= {} (got {p})",
                    genus.chain_len() - 2
                )));
            }
            composite(mv, s)
        }
        Move::LoneLeft { p } => {
            if p < 6 {
                return Err(Error::MovePrecondition(format!(
                    "lone shift left needs Xs_{} in range, so p >= 6 (got {p})",
                    p.wrapping_sub(2)
                )));
            }
            composite(mv, s)
        }
        Move::LoneRight { p } => {
            if p < 4 || p + 2 > genus.chain_len() {
                return Err(Error::MovePrecondition(format!(
                    "lone shift right needs 4 <= p <= {} (got {p})",
                    genus.chain_len() - 2
                )));
            }
            composite(mv, s)
        }
        Move::T1 { .. } => {
            genus.require_at_least(3, "T1 needs genus at least 3")?;
            if !b4_commutes(s) {
                return Err(Error::MovePrecondition(format!(
                    "T1 needs the first four tacks of {s} to agree"
                )));
            }
            composite(mv, s)
        }
    }
}

fn composite(mv: Move, s: &TackSequence) -> Result<(TackSequence, TwistWord)> {
    let word = mv.conjugator();
    word.check_range(s.genus())?;
    let after = conjugate_by_word(&word, s)?;
    if after == *s {
        return Err(Error::MovePrecondition(format!(
            "{} at {s} has no effect",
            mv.rule_name()
        )));
    }
    Ok((after, word))
}

/// All moves that can fire on this sequence, in a fixed enumeration order.
/// Used by the factorization search; deterministic.
pub fn applicable_moves(s: &TackSequence) -> Vec<(Move, TackSequence, TwistWord)> {
    let genus = s.genus();
    let n = genus.chain_len();
    let mut candidates: Vec<Move> = Vec::new();
    for j in 1..=3 {
        candidates.push(Move::ShiftC { j });
        candidates.push(Move::ShiftB { j });
    }
    for p in 5..=n.saturating_sub(1) {
        candidates.push(Move::PairLeft { p });
    }
    for p in 4..=n.saturating_sub(2) {
        candidates.push(Move::PairRight { p });
        candidates.push(Move::LoneRight { p });
    }
    for p in 6..=n {
        candidates.push(Move::LoneLeft { p });
    }
    if genus.get() >= 3 {
        candidates.push(Move::T1 { inverse: false });
        candidates.push(Move::T1 { inverse: true });
    }
    candidates.push(Move::Complement);

    let mut out = Vec::new();
    for mv in candidates {
        if let Ok((after, word)) = apply_move(mv, s) {
            out.push((mv, after, word));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    fn seq(genus: Genus, text: &str) -> TackSequence {
        TackSequence::parse(text, genus).unwrap()
    }

    #[test]
    fn parse_forms_agree() {
        let g3 = g(3);
        assert_eq!(seq(g3, "11110000"), seq(g3, "1,2,3,4"));
        assert_eq!(seq(g3, "[1,2,3,4]").indices(), vec![1, 2, 3, 4]);
        assert!(TackSequence::parse("111", g3).is_err());
        assert!(TackSequence::parse("11100000", g3).is_err());
        assert!(TackSequence::parse("1,1", g3).is_err());
        assert!(TackSequence::parse("1,9", g3).is_err());
    }

    #[test]
    fn oracle_rules() {
        let g3 = g(3);
        let s = seq(g3, "1,2,3,4");
        // (a): both 1 and 2 present.
        assert_eq!(
            conjugation_oracle(1, 1, &s).unwrap(),
            OracleOutcome::Commutes
        );
        // (b): 4 present, 5 absent, negative sign.
        assert_eq!(
            conjugation_oracle(4, -1, &s).unwrap(),
            OracleOutcome::Moved(seq(g3, "1,2,3,5"))
        );
        // (c): 4 present, 3 absent in [1,2,4,6].
        let s2 = seq(g3, "1,2,4,6");
        assert_eq!(
            conjugation_oracle(3, 1, &s2).unwrap(),
            OracleOutcome::Moved(seq(g3, "1,2,3,6"))
        );
        // Unlicensed combinations.
        assert!(matches!(
            conjugation_oracle(4, 1, &s).unwrap(),
            OracleOutcome::Unlicensed(_)
        ));
        assert!(matches!(
            conjugation_oracle(3, -1, &s2).unwrap(),
            OracleOutcome::Unlicensed(_)
        ));
    }

    #[test]
    fn pair_and_lone_shifts() {
        let g3 = g(3);
        // Pair (5,6) moves left to (4,5) by X4.
        let s = seq(g3, "1,2,5,6");
        let (after, word) = apply_move(Move::PairLeft { p: 5 }, &s).unwrap();
        assert_eq!(after, seq(g3, "1,2,4,5"));
        assert_eq!(word.to_string(), "X4");
        // ... and back right by X4^-1.
        let (back, _) = apply_move(Move::PairRight { p: 4 }, &after).unwrap();
        assert_eq!(back, s);
        // Lone tack at 6 moves to 4 by Xs4.
        let s = seq(g3, "1,2,3,6");
        let (after, word) = apply_move(Move::LoneLeft { p: 6 }, &s).unwrap();
        assert_eq!(after, seq(g3, "1,2,3,4"));
        assert_eq!(word.to_string(), "Xs4");
        // Blocked when the target is occupied.
        assert!(apply_move(Move::LoneLeft { p: 6 }, &seq(g3, "1,4,5,6")).is_err());
    }

    #[test]
    fn t1_slide() {
        let g3 = g(3);
        // [[1,1,1,1,0,1,0,1]] -> [[1,1,1,1,1,0,1,0]] under T1.
        let s = seq(g3, "11110101");
        let (after, word) = apply_move(Move::T1 { inverse: false }, &s).unwrap();
        assert_eq!(after, seq(g3, "11111010"));
        assert_eq!(word.to_string(), "T1");
        // The inverse slide undoes it.
        let (back, _) = apply_move(Move::T1 { inverse: true }, &after).unwrap();
        assert_eq!(back, s);
        // Mixed prefix blocks the B4 letter.
        assert!(apply_move(Move::T1 { inverse: false }, &seq(g3, "11010010")).is_err());
    }

    #[test]
    fn complement_identity() {
        let g5 = g(5);
        let s = seq(g5, "000011111100");
        let (after, word) = apply_move(Move::Complement, &s).unwrap();
        assert_eq!(after, seq(g5, "111100000011"));
        assert!(word.is_identity_word());
        let (back, _) = apply_move(Move::Complement, &after).unwrap();
        assert_eq!(back, s);
        assert!(apply_move(Move::Complement, &seq(g5, "110000001100")).is_err());
        assert!(complement_pattern(g(3)).is_none());
    }

    #[test]
    fn word_replay_matches_proof_displays() {
        let g4 = g(4);
        // [[1,1,0,1,1,1,...]] --C3--> [[1,1,1,0,1,1,...]]
        let s = seq(g4, "1101111000");
        assert_eq!(
            conjugate_by_word(&parse_word("C3", g4).unwrap(), &s).unwrap(),
            seq(g4, "1110111000")
        );
        // [[1,0,0,1,...]] --C2 C3--> [[1,1,0,0,...]]
        let s = seq(g4, "1001101000");
        assert_eq!(
            conjugate_by_word(&parse_word("C2 C3", g4).unwrap(), &s).unwrap(),
            seq(g4, "1100101000")
        );
        // An unlicensed conjugation reports the failing twist.
        assert!(conjugate_by_word(&parse_word("C4", g4).unwrap(), &seq(g4, "1111000000")).is_err());
    }
}
