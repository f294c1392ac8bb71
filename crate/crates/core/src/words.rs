//! Twist words: the generator alphabet, parsing, printing, and evaluation to
//! Sp(2g, Z) and Sp(2g, F2).
//!
//! Grammar (tokens separated by whitespace):
//!   word   := item*
//!   item   := NAME ('^' INTEGER)?  |  '(' word ')' '^' INTEGER
//!   NAME   := `C<k>` | `B<k>` | B4' | `X<k>` | `Xs<k>` | `Y<k>` | `Ys<k>`
//!           | `D<k>` | `DB<k>` | T1
//!
//! `Xs`/`Ys` are the starred conjugates. The order of composition is
//! functional: in `C1 C2` the twist C2 acts first.

use serde::{Deserialize, Serialize};

use crate::curves::{curve_class, CurveName};
use crate::f2::MatrixF2;
use crate::genus::Genus;
use crate::homology::{transvect_pow_in_place, HomologyClass, SymplecticMatrix};
use crate::{Error, Result};

/// Names of the twist generators and their derived abbreviations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolName {
    /// C_i = twist about c_i, 1 <= i <= 2g+1.
    C(usize),
    /// B_{2j} = twist about b_{2j}, 2 <= j <= g-1.
    B(usize),
    /// Twist about the pushed-off curve b_4'.
    BPrime4,
    /// X_i = C_{i+1} C_i C_{i+1}^{-1}, 4 <= i <= 2g.
    X(usize),
    /// X*_i = C_{i+1}^{-1} C_i C_{i+1}, 4 <= i <= 2g.
    Xs(usize),
    /// Y_{2j} = C_{2j} B_{2j} C_{2j}^{-1}, 2 <= j <= g-1.
    Y(usize),
    /// Y*_{2j} = C_{2j}^{-1} B_{2j} C_{2j}, 2 <= j <= g-1.
    Ys(usize),
    /// D_i = C_i^2, 1 <= i <= 2g+1.
    D(usize),
    /// DB_{2j} = B_{2j}^2, 2 <= j <= g-1.
    Db(usize),
    /// T_1 = B_4 C_5 C_7 ... C_{2g+1}.
    T1,
}

impl SymbolName {
    /// Index ranges valid at genus g.
    pub fn check_range(&self, genus: Genus) -> Result<()> {
        let g = genus.get();
        let ok = match *self {
            SymbolName::C(i) | SymbolName::D(i) => i >= 1 && i <= 2 * g + 1,
            SymbolName::B(i) | SymbolName::Y(i) | SymbolName::Ys(i) | SymbolName::Db(i) => {
                i >= 4 && i <= 2 * g - 2 && i % 2 == 0
            }
            SymbolName::BPrime4 => g >= 3,
            SymbolName::X(i) | SymbolName::Xs(i) => i >= 4 && i <= 2 * g,
            SymbolName::T1 => g >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                symbol: self.to_string(),
                genus: g,
            })
        }
    }
}

impl std::fmt::Display for SymbolName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymbolName::C(i) => write!(f, "C{i}"),
            SymbolName::B(i) => write!(f, "B{i}"),
            SymbolName::BPrime4 => write!(f, "B4'"),
            SymbolName::X(i) => write!(f, "X{i}"),
            SymbolName::Xs(i) => write!(f, "Xs{i}"),
            SymbolName::Y(i) => write!(f, "Y{i}"),
            SymbolName::Ys(i) => write!(f, "Ys{i}"),
            SymbolName::D(i) => write!(f, "D{i}"),
            SymbolName::Db(i) => write!(f, "DB{i}"),
            SymbolName::T1 => write!(f, "T1"),
        }
    }
}

/// One factor of a twist word: a generator name with a nonzero exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub name: SymbolName,
    pub exponent: i64,
}

/// A finite product of generator symbols, leftmost factor applied last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TwistWord {
    pub factors: Vec<GeneratorSymbol>,
}

impl TwistWord {
    pub fn identity() -> Self {
        TwistWord::default()
    }

    pub fn single(name: SymbolName, exponent: i64) -> Self {
        if exponent == 0 {
            return TwistWord::identity();
        }
        TwistWord {
            factors: vec![GeneratorSymbol { name, exponent }],
        }
    }

    pub fn is_identity_word(&self) -> bool {
        self.factors.is_empty()
    }

    /// Concatenation: self then other on the right (other acts first).
    pub fn concat(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().copied());
        TwistWord { factors }
    }

    pub fn inverse(&self) -> Self {
        TwistWord {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| GeneratorSymbol {
                    name: f.name,
                    exponent: -f.exponent,
                })
                .collect(),
        }
    }

    /// The conjugate self * other * self^{-1}.
    pub fn conjugate(&self, other: &Self) -> Self {
        self.concat(other).concat(&self.inverse())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return TwistWord::identity();
        }
        let base = if e > 0 { self.clone() } else { self.inverse() };
        let mut out = TwistWord::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn check_range(&self, genus: Genus) -> Result<()> {
        for f in &self.factors {
            f.name.check_range(genus)?;
        }
        Ok(())
    }

    /// Expands derived names, returning the primitive twists and exponents
    /// to apply from right to left.
    pub fn expand(&self, genus: Genus) -> Result<Vec<(HomologyClass, i64)>> {
        let mut out = Vec::new();
        for f in &self.factors {
            f.name.check_range(genus)?;
            push_expansion(f.name, f.exponent, genus, &mut out)?;
        }
        Ok(out)
    }

    /// Evaluates the word to its action on H1 over Z.
    pub fn evaluate(&self, genus: Genus) -> Result<SymplecticMatrix> {
        let prim = self.expand(genus)?;
        let cols = (0..genus.dim())
            .map(|k| {
                let mut v = basis_class(genus, k);
                for (a, e) in prim.iter().rev() {
                    transvect_pow_in_place(a, *e, &mut v);
                }
                v
            })
            .collect();
        Ok(SymplecticMatrix::from_columns(genus, cols))
    }

    /// Evaluates the word to its action on H1 over F2.
    pub fn evaluate_f2(&self, genus: Genus) -> Result<MatrixF2> {
        Ok(self.evaluate(genus)?.mod2_reduce())
    }
}

fn basis_class(genus: Genus, k: usize) -> HomologyClass {
    if k % 2 == 0 {
        HomologyClass::x(genus, k / 2 + 1)
    } else {
        HomologyClass::y(genus, k / 2 + 1)
    }
}

fn push_expansion(
    name: SymbolName,
    exponent: i64,
    genus: Genus,
    out: &mut Vec<(HomologyClass, i64)>,
) -> Result<()> {
    match name {
        SymbolName::C(i) => out.push((curve_class(CurveName::C(i), genus)?, exponent)),
        SymbolName::B(i) => out.push((curve_class(CurveName::B(i), genus)?, exponent)),
        SymbolName::BPrime4 => out.push((curve_class(CurveName::BPrime4, genus)?, exponent)),
        SymbolName::D(i) => out.push((curve_class(CurveName::C(i), genus)?, 2 * exponent)),
        SymbolName::Db(i) => out.push((curve_class(CurveName::B(i), genus)?, 2 * exponent)),
        SymbolName::X(i) => {
            // C_{i+1} C_i^e C_{i+1}^{-1} = twist about C_{i+1}(c_i), power e.
            let c = curve_class(CurveName::C(i), genus)?;
            let outer = curve_class(CurveName::C(i + 1), genus)?;
            let mut moved = c;
            transvect_pow_in_place(&outer, 1, &mut moved);
            out.push((moved, exponent));
        }
        SymbolName::Xs(i) => {
            let c = curve_class(CurveName::C(i), genus)?;
            let outer = curve_class(CurveName::C(i + 1), genus)?;
            let mut moved = c;
            transvect_pow_in_place(&outer, -1, &mut moved);
            out.push((moved, exponent));
        }
        SymbolName::Y(i) => {
            let b = curve_class(CurveName::B(i), genus)?;
            let outer = curve_class(CurveName::C(i), genus)?;
            let mut moved = b;
            transvect_pow_in_place(&outer, 1, &mut moved);
            out.push((moved, exponent));
        }
        SymbolName::Ys(i) => {
            let b = curve_class(CurveName::B(i), genus)?;
            let outer = curve_class(CurveName::C(i), genus)?;
            let mut moved = b;
            transvect_pow_in_place(&outer, -1, &mut moved);
            out.push((moved, exponent));
        }
        SymbolName::T1 => {
            // B_4 C_5 C_7 ... C_{2g+1}; rightmost factor applied first, so
            // push in word order (the evaluator walks the list in reverse).
            let mut letters = vec![(curve_class(CurveName::B(4), genus)?, exponent.signum())];
            let mut i = 5;
            while i <= 2 * genus.get() + 1 {
                letters.push((curve_class(CurveName::C(i), genus)?, exponent.signum()));
                i += 2;
            }
            if exponent < 0 {
                letters.reverse();
            }
            for _ in 0..exponent.unsigned_abs() {
                out.extend(letters.iter().cloned());
            }
        }
    }
    Ok(())
}

/// Parses a word in the grammar above, checking index ranges against g.
pub fn parse_word(text: &str, genus: Genus) -> Result<TwistWord> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let word = parser.word(genus, 0)?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(Error::Syntax {
            position: parser.pos,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(word)
}

/// Prints a word with normalized exponents: adjacent equal names merge, so
/// `C1^-1 C1^-1` prints as `C1^-2`. The empty word prints as `1`.
pub fn print_word(word: &TwistWord) -> String {
    let mut merged: Vec<GeneratorSymbol> = Vec::new();
    for f in &word.factors {
        if let Some(last) = merged.last_mut() {
            if last.name == f.name {
                last.exponent += f.exponent;
                if last.exponent == 0 {
                    merged.pop();
                }
                continue;
            }
        }
        if f.exponent != 0 {
            merged.push(*f);
        }
    }
    if merged.is_empty() {
        return "1".to_string();
    }
    merged
        .iter()
        .map(|f| {
            if f.exponent == 1 {
                f.name.to_string()
            } else {
                format!("{}^{}", f.name, f.exponent)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl std::fmt::Display for TwistWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", print_word(self))
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn token_is_bare_one(&self) -> bool {
        self.bytes[self.pos] == b'1'
            && self
                .bytes
                .get(self.pos + 1)
                .map(|b| !b.is_ascii_alphanumeric() && *b != b'\'' && *b != b'^')
                .unwrap_or(true)
    }

    fn word(&mut self, genus: Genus, depth: usize) -> Result<TwistWord> {
        let mut out = TwistWord::identity();
        loop {
            self.skip_ws();
            if self.pos >= self.bytes.len() {
                break;
            }
            match self.bytes[self.pos] {
                b')' => {
                    if depth == 0 {
                        return Err(Error::Syntax {
                            position: self.pos,
                            message: "unmatched `)`".into(),
                        });
                    }
                    break;
                }
                b'(' => {
                    self.pos += 1;
                    let inner = self.word(genus, depth + 1)?;
                    self.skip_ws();
                    if self.pos >= self.bytes.len() || self.bytes[self.pos] != b')' {
                        return Err(Error::Syntax {
                            position: self.pos,
                            message: "expected `)`".into(),
                        });
                    }
                    self.pos += 1;
                    self.skip_ws();
                    if self.pos >= self.bytes.len() || self.bytes[self.pos] != b'^' {
                        return Err(Error::Syntax {
                            position: self.pos,
                            message: "a parenthesized group needs an exponent".into(),
                        });
                    }
                    self.pos += 1;
                    let e = self.integer()?;
                    out = out.concat(&inner.pow(e));
                }
                b'1' if self.token_is_bare_one() => {
                    // `1` denotes the empty word; useful in table entries.
                    self.pos += 1;
                }
                _ => {
                    let name = self.name()?;
                    name.check_range(genus)?;
                    let mut exponent = 1i64;
                    if self.pos < self.bytes.len() && self.bytes[self.pos] == b'^' {
                        self.pos += 1;
                        exponent = self.integer()?;
                    }
                    if exponent != 0 {
                        out.factors.push(GeneratorSymbol { name, exponent });
                    }
                }
            }
        }
        Ok(out)
    }

    fn name(&mut self) -> Result<SymbolName> {
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_alphanumeric() || b == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let token = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        if token.is_empty() {
            return Err(Error::Syntax {
                position: start,
                message: format!("expected a generator name, got `{}`", self.peek_char(start)),
            });
        }
        let parsed = if token == "T1" {
            Some(SymbolName::T1)
        } else if token == "B4'" {
            Some(SymbolName::BPrime4)
        } else if let Some(rest) = token.strip_prefix("DB") {
            rest.parse().ok().map(SymbolName::Db)
        } else if let Some(rest) = token.strip_prefix("Xs") {
            rest.parse().ok().map(SymbolName::Xs)
        } else if let Some(rest) = token.strip_prefix("Ys") {
            rest.parse().ok().map(SymbolName::Ys)
        } else if let Some(rest) = token.strip_prefix('C') {
            rest.parse().ok().map(SymbolName::C)
        } else if let Some(rest) = token.strip_prefix('B') {
            rest.parse().ok().map(SymbolName::B)
        } else if let Some(rest) = token.strip_prefix('X') {
            rest.parse().ok().map(SymbolName::X)
        } else if let Some(rest) = token.strip_prefix('Y') {
            rest.parse().ok().map(SymbolName::Y)
        } else if let Some(rest) = token.strip_prefix('D') {
            rest.parse().ok().map(SymbolName::D)
        } else {
            None
        };
        parsed.ok_or_else(|| Error::Syntax {
            position: start,
            message: format!("unknown generator `{token}`"),
        })
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.pos < self.bytes.len()
            && (self.bytes[self.pos] == b'-' || self.bytes[self.pos] == b'+')
        {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| Error::Syntax {
                position: start,
                message: "expected an integer exponent".into(),
            })
    }

    fn peek_char(&self, at: usize) -> String {
        self.bytes
            .get(at)
            .map(|&b| (b as char).to_string())
            .unwrap_or_else(|| "end of input".into())
    }
}

/// The generating set G_g of the odd spin mapping class group.
///
/// g = 2: C1, C2, C3, X4, D1..D5 (nine words). g >= 3: C1, C2, C3,
/// X_i (4 <= i <= 2g), Y_{2j} (2 <= j <= g-1), D_k (1 <= k <= 2g+1),
/// DB_{2l} (2 <= l <= g-1), and T1.
pub fn gg_generators(genus: Genus) -> Result<Vec<TwistWord>> {
    genus.require_at_least(2, "the generator catalog requires genus at least 2")?;
    let g = genus.get();
    let mut out = Vec::new();
    for i in 1..=3 {
        out.push(TwistWord::single(SymbolName::C(i), 1));
    }
    if g == 2 {
        out.push(TwistWord::single(SymbolName::X(4), 1));
        for i in 1..=5 {
            out.push(TwistWord::single(SymbolName::D(i), 1));
        }
        return Ok(out);
    }
    for i in 4..=2 * g {
        out.push(TwistWord::single(SymbolName::X(i), 1));
    }
    for j in 2..=g - 1 {
        out.push(TwistWord::single(SymbolName::Y(2 * j), 1));
    }
    for k in 1..=2 * g + 1 {
        out.push(TwistWord::single(SymbolName::D(k), 1));
    }
    for l in 2..=g - 1 {
        out.push(TwistWord::single(SymbolName::Db(2 * l), 1));
    }
    out.push(TwistWord::single(SymbolName::T1, 1));
    Ok(out)
}
