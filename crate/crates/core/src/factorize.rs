//! Factorization of odd subchain maps into the generating set, with
//! replayable certificates.
//!
//! The reduction searches for a shortest chain of licensed conjugation
//! moves from the input tack sequence to a sequence that either matches one
//! of the three terminal families (which carry explicit square-twist
//! expansions) or begins 1,1,1,1,1 (where the chain-shortening identity
//! splits it into strictly shorter maps). Certificates record every move
//! with its conjugator, the shortening steps, and the terminal expansions;
//! verification replays the moves through the single-twist oracle, checks
//! the leaf alphabet against the generating set, and evaluates the
//! flattened word, whose integral image must be the identity.

use std::collections::{HashMap, VecDeque};

use serde_json::{json, Value};

use crate::genus::Genus;
use crate::homology::SymplecticMatrix;
use crate::tacks::{applicable_moves, apply_move, Move, TackSequence};
use crate::words::{parse_word, print_word, SymbolName, TwistWord};
use crate::{Error, Result};

/// Rule families a rewrite step can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    ShiftC,
    ShiftB,
    ShiftL1,
    ShiftL2,
    T1,
    Complement,
    ChainShorten,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::ShiftC => "shift-c",
            RuleId::ShiftB => "shift-b",
            RuleId::ShiftL1 => "shiftL1",
            RuleId::ShiftL2 => "shiftL2",
            RuleId::T1 => "t1",
            RuleId::Complement => "complement",
            RuleId::ChainShorten => "chain-shorten",
        }
    }

    fn parse(name: &str) -> Option<RuleId> {
        Some(match name {
            "shift-c" => RuleId::ShiftC,
            "shift-b" => RuleId::ShiftB,
            "shiftL1" => RuleId::ShiftL1,
            "shiftL2" => RuleId::ShiftL2,
            "t1" => RuleId::T1,
            "complement" => RuleId::Complement,
            "chain-shorten" => RuleId::ChainShorten,
            _ => return None,
        })
    }

    fn of_move(mv: Move) -> RuleId {
        match mv {
            Move::ShiftC { .. } => RuleId::ShiftC,
            Move::ShiftB { .. } => RuleId::ShiftB,
            Move::PairLeft { .. } | Move::PairRight { .. } => RuleId::ShiftL1,
            Move::LoneLeft { .. } | Move::LoneRight { .. } => RuleId::ShiftL2,
            Move::T1 { .. } => RuleId::T1,
            Move::Complement => RuleId::Complement,
        }
    }
}

/// One rewrite step: `after` is the single result of a conjugation move, or
/// the four prescribed factors of a chain-shortening.
#[derive(Debug, Clone)]
pub struct RewriteStep {
    pub rule: RuleId,
    pub conjugator: TwistWord,
    pub before: TackSequence,
    pub after: Vec<TackSequence>,
}

/// A certificate node. The flattened word of a node realizes the mapping
/// class the node stands for.
#[derive(Debug, Clone)]
pub enum CertNode {
    /// A word over the generating-set alphabet.
    Leaf { word: TwistWord },
    /// Product of the children, in order.
    Prod { children: Vec<CertNode> },
    /// conjugator . child . conjugator^{-1}.
    Conj {
        conjugator: TwistWord,
        child: Box<CertNode>,
    },
    /// The subchain map `tacks`, carried by licensed moves to the map the
    /// child realizes.
    Moves {
        tacks: TackSequence,
        steps: Vec<RewriteStep>,
        child: Box<CertNode>,
    },
    /// A subchain map starting 1,2,3,4,5, split by the chain-shortening
    /// identity into inverse-head, conjugated base, middle, conjugated tail.
    Shorten {
        tacks: TackSequence,
        step: RewriteStep,
        children: Vec<CertNode>,
    },
    /// Inverse of the subchain map `tacks`; the child realizes the map.
    Inverse {
        tacks: TackSequence,
        child: Box<CertNode>,
    },
    /// A terminal-family subchain map with its explicit expansion into
    /// conjugated square twists.
    Terminal {
        tacks: TackSequence,
        children: Vec<CertNode>,
    },
    /// A subchain map on at most two indices; isotopically trivial.
    Trivial { tacks: TackSequence },
}

/// The three terminal families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalKind {
    /// 1,2,3,4 (the pushed-off handle relation).
    A,
    /// 1,2,3,5.
    B,
    /// 1,2,5,7.
    C,
}

/// Identifies a terminal tack sequence.
pub fn terminal_kind(s: &TackSequence) -> Option<TerminalKind> {
    match s.bits() {
        0b1111 => Some(TerminalKind::A),
        0b10111 => Some(TerminalKind::B),
        0b1010011 => Some(TerminalKind::C),
        _ => None,
    }
}

fn conj_leaf(genus: Genus, conjugator: &str, leaf: &str) -> CertNode {
    let word = parse_word(leaf, genus).expect("fixed terminal leaf");
    let leaf_node = CertNode::Leaf { word };
    if conjugator.is_empty() {
        leaf_node
    } else {
        CertNode::Conj {
            conjugator: parse_word(conjugator, genus).expect("fixed terminal conjugator"),
            child: Box::new(leaf_node),
        }
    }
}

/// The explicit expansions of the three terminal families as products of
/// conjugated square twists over the generating-set alphabet.
pub fn terminal_expansion(kind: TerminalKind, genus: Genus) -> Result<Vec<CertNode>> {
    genus.require_at_least(3, "terminal expansions require genus at least 3")?;
    let rows: &[(&str, &str)] = match kind {
        TerminalKind::A => &[
            ("C1^-1 C2^-1 C3^-1", "Ys4^2"),
            ("C2^-1 C3^-1", "Ys4^2"),
            ("C3^-1", "Ys4^2"),
            ("", "Ys4^2"),
            ("C1 C2 C3", "D4^-1"),
            ("C2 C3", "D4^-1"),
            ("C3", "D4^-1"),
            ("", "D4^-1"),
        ],
        TerminalKind::B => &[
            ("Ys4 C3 C2", "D1"),
            ("Ys4 C3", "D2"),
            ("Ys4", "D3"),
            ("Ys4", "D4"),
            ("D4^-1 C3^-1 C2^-1", "D1^-1"),
            ("D4^-1 C3^-1", "D2^-1"),
            ("D4^-1", "D3^-1"),
            ("", "D4^-1"),
        ],
        TerminalKind::C => &[
            ("C1^-1 Ys4 C2^-1 C3 Xs5", "D4"),
            ("Ys4 C2^-1 C3 Xs5", "D4"),
            ("Ys4 C3 D4^-1", "Xs5^2"),
            ("C3 Ys4 Xs5 D4^-1", "D3"),
            ("C1 C3 C2 D4^-1 Xs5^-1 D4^-1", "D3^-1"),
            ("C3 C2 D4^-1 Xs5^-1 D4^-1", "D3^-1"),
            ("C3 Xs5^2", "D4^-1"),
            ("C3 X4", "D6^-1"),
        ],
    };
    Ok(rows.iter().map(|(c, l)| conj_leaf(genus, c, l)).collect())
}

/// The unrewritten factor words of a terminal expansion: the conjugated
/// squares read off the pushed-off handle relation directly, before the
/// braid rewriting that lands them in the generating-set alphabet. Used by
/// tests to pin each rewritten factor at the matrix level.
pub fn terminal_expansion_raw(kind: TerminalKind, genus: Genus) -> Result<Vec<TwistWord>> {
    genus.require_at_least(3, "terminal expansions require genus at least 3")?;
    let prefix = match kind {
        TerminalKind::A => "",
        TerminalKind::B => "C4^-1",
        TerminalKind::C => "C4^-1 C3^-1 C6^-1 C5^-1 C4^-1",
    };
    let rows = [
        ("B4 C4 C3 C2", "D1"),
        ("B4 C4 C3", "D2"),
        ("B4 C4", "D3"),
        ("B4", "D4"),
        ("C4^-1 C3^-1 C2^-1", "D1^-1"),
        ("C4^-1 C3^-1", "D2^-1"),
        ("C4^-1", "D3^-1"),
        ("", "D4^-1"),
    ];
    rows.iter()
        .map(|(c, l)| {
            let conj = parse_word(&format!("{prefix} {c}"), genus)?;
            let leaf = parse_word(l, genus)?;
            Ok(conj.conjugate(&leaf))
        })
        .collect()
}

/// The word whose twist image is the pushed-off handle curve relation:
/// B4 B4'^{-1}, the map of the terminal family A.
pub fn handle_relation_word(genus: Genus) -> Result<TwistWord> {
    parse_word("B4 B4'^-1", genus)
}

/// Result of converting a subchain of the auxiliary chain to the straight
/// chain.
#[derive(Debug, Clone)]
pub enum BetaConversion {
    /// The subchain avoided the beta curve; same indices on the straight
    /// chain.
    Straight(TackSequence),
    /// The subchain uses the beta curve; conversion needs curve-level data
    /// this toolkit does not model. The conjugator template (with all signs
    /// positive) is supplied for external verification.
    RequiresGeometry { conjugator_template: TwistWord },
}

/// Converts an odd subchain of the auxiliary chain (beta, 5, 6, ...,
/// 2g+2) to the straight chain when possible.
pub fn beta_convert(
    includes_beta: bool,
    indices: &[usize],
    genus: Genus,
) -> Result<BetaConversion> {
    genus.require_at_least(3, "the auxiliary chain requires genus at least 3")?;
    for &i in indices {
        if i < 5 || i > genus.chain_len() {
            return Err(Error::BadTackSequence(format!(
                "auxiliary-chain index {i} outside 5..={}",
                genus.chain_len()
            )));
        }
    }
    if !includes_beta {
        return Ok(BetaConversion::Straight(TackSequence::from_indices(
            genus, indices,
        )?));
    }
    let mut text = String::new();
    let mut i = 2 * genus.get() + 1;
    while i >= 5 {
        text.push_str(&format!("C{i} "));
        i -= 2;
    }
    text.push_str("B4^-1");
    Ok(BetaConversion::RequiresGeometry {
        conjugator_template: parse_word(&text, genus)?,
    })
}

/// The four prescribed chain-shortening factors of a sequence starting
/// 1,2,3,4,5: the head `[4, n6, ...]` (to be inverted), the base `[1,2,3,5]`
/// (conjugated by D4), the middle `[1,2,4, n6, ...]`, and the tail
/// `[3,4,5, n6, ...]` (conjugated by Y4).
pub struct ShortenFactors {
    pub head: TackSequence,
    pub base: TackSequence,
    pub mid: TackSequence,
    pub tail: TackSequence,
}

pub fn chain_shorten(s: &TackSequence) -> Result<ShortenFactors> {
    let genus = s.genus();
    genus.require_at_least(3, "chain shortening requires genus at least 3")?;
    if s.bits() & 0b11111 != 0b11111 {
        return Err(Error::MovePrecondition(format!(
            "chain shortening needs a sequence starting 1,1,1,1,1, got {s}"
        )));
    }
    let rest: Vec<usize> = s.indices().into_iter().filter(|&i| i > 5).collect();
    let with = |head: &[usize]| {
        let mut v = head.to_vec();
        v.extend_from_slice(&rest);
        TackSequence::from_indices(genus, &v)
    };
    Ok(ShortenFactors {
        head: with(&[4])?,
        base: TackSequence::from_indices(genus, &[1, 2, 3, 5])?,
        mid: with(&[1, 2, 4])?,
        tail: with(&[3, 4, 5])?,
    })
}

fn is_target(t: &TackSequence) -> bool {
    terminal_kind(t).is_some() || t.bits() & 0b11111 == 0b11111
}

/// Breadth-first search over licensed moves for a nearest sequence that is
/// terminal or starts 1,1,1,1,1. Deterministic: moves enumerate in a fixed
/// order. Errors when the (finite) reachable set holds no target.
pub fn reduce_to_target(s: &TackSequence) -> Result<(Vec<RewriteStep>, TackSequence)> {
    if is_target(s) {
        return Ok((Vec::new(), *s));
    }
    let explored = explore(s);
    let target = explored
        .targets_by_depth
        .first()
        .ok_or_else(|| Error::Factorization {
            tacks: s.to_string(),
            message: "no licensed path to a terminal or shortenable sequence".into(),
        })?;
    let steps = explored.path_to(*target, s.genus())?;
    Ok((steps, TackSequence::from_bits(s.genus(), *target)?))
}

/// The reachable component of a sequence: shortest-path parents and the
/// targets found, by search depth.
struct Explored {
    start: u64,
    parents: HashMap<u64, (u64, Move)>,
    targets_by_depth: Vec<u64>,
}

impl Explored {
    fn path_to(&self, target: u64, genus: Genus) -> Result<Vec<RewriteStep>> {
        let mut chain = Vec::new();
        let mut at = target;
        while at != self.start {
            let (prev, mv) = self.parents[&at];
            chain.push((prev, mv));
            at = prev;
        }
        chain.reverse();
        let mut steps = Vec::new();
        for (prev_bits, mv) in chain {
            let before = TackSequence::from_bits(genus, prev_bits)?;
            let (after, conjugator) = apply_move(mv, &before)?;
            steps.push(RewriteStep {
                rule: RuleId::of_move(mv),
                conjugator,
                before,
                after: vec![after],
            });
        }
        Ok(steps)
    }

    fn depth_of(&self, t: u64) -> usize {
        let mut d = 0;
        let mut at = t;
        while at != self.start {
            at = self.parents[&at].0;
            d += 1;
        }
        d
    }
}

fn explore(s: &TackSequence) -> Explored {
    let mut parents: HashMap<u64, (u64, Move)> = HashMap::new();
    parents.insert(s.bits(), (s.bits(), Move::Complement));
    let mut targets_by_depth = Vec::new();
    let mut queue = VecDeque::new();
    queue.push_back(*s);
    while let Some(current) = queue.pop_front() {
        for (mv, next, _) in applicable_moves(&current) {
            if parents.contains_key(&next.bits()) {
                continue;
            }
            parents.insert(next.bits(), (current.bits(), mv));
            if is_target(&next) {
                targets_by_depth.push(next.bits());
            }
            queue.push_back(next);
        }
    }
    Explored {
        start: s.bits(),
        parents,
        targets_by_depth,
    }
}

/// A complete factorization certificate for an odd subchain map.
#[derive(Debug, Clone)]
pub struct FactorizationCertificate {
    pub genus: Genus,
    pub input: TackSequence,
    pub root: CertNode,
}

/// Factorizes the odd subchain map with the given indices into the
/// generating set.
pub fn factorize(indices: &[usize], genus: Genus) -> Result<FactorizationCertificate> {
    genus.require_at_least(3, "factorization requires genus at least 3")?;
    let input = TackSequence::from_indices(genus, indices)?;
    factorize_tacks(&input)
}

/// Same entry point for a tack sequence.
pub fn factorize_tacks(input: &TackSequence) -> Result<FactorizationCertificate> {
    let genus = input.genus();
    genus.require_at_least(3, "factorization requires genus at least 3")?;
    let mut builder = Builder {
        memo: HashMap::new(),
        stack: Vec::new(),
    };
    match builder.build(input) {
        Ok(root) => Ok(FactorizationCertificate {
            genus,
            input: *input,
            root,
        }),
        Err(BuildError::Cycle(bits)) => Err(Error::Factorization {
            tacks: input.to_string(),
            message: format!(
                "every reduction route revisits {}",
                TackSequence::from_bits(genus, bits)
                    .map(|t| t.to_string())
                    .unwrap_or_default()
            ),
        }),
        Err(BuildError::Other(e)) => Err(e),
    }
}

/// Internal build failures: a genuine error, or a route that would revisit
/// a sequence already being expanded (the builder then backtracks and
/// tries the next candidate target).
enum BuildError {
    Cycle(u64),
    Other(Error),
}

impl From<Error> for BuildError {
    fn from(e: Error) -> Self {
        BuildError::Other(e)
    }
}

struct Builder {
    memo: HashMap<u64, CertNode>,
    stack: Vec<u64>,
}

impl Builder {
    fn build(&mut self, s: &TackSequence) -> std::result::Result<CertNode, BuildError> {
        let genus = s.genus();
        if let Some(done) = self.memo.get(&s.bits()) {
            return Ok(done.clone());
        }
        if s.popcount() <= 2 {
            return Ok(CertNode::Trivial { tacks: *s });
        }
        if let Some(kind) = terminal_kind(s) {
            let node = CertNode::Terminal {
                tacks: *s,
                children: terminal_expansion(kind, genus)?,
            };
            self.memo.insert(s.bits(), node.clone());
            return Ok(node);
        }
        if self.stack.contains(&s.bits()) {
            return Err(BuildError::Cycle(s.bits()));
        }
        self.stack.push(s.bits());
        let result = if s.bits() & 0b11111 == 0b11111 {
            self.shorten(s)
        } else {
            self.reduce(s)
        };
        self.stack.pop();
        if let Ok(node) = &result {
            self.memo.insert(s.bits(), node.clone());
        }
        result
    }

    /// Expands a non-target sequence: candidate targets of its reachable
    /// component are tried in descent-preferring order (terminals first,
    /// then smaller tack counts, then more gathered, then nearer), and a
    /// route is abandoned if its expansion would revisit a sequence on the
    /// build stack.
    fn reduce(&mut self, s: &TackSequence) -> std::result::Result<CertNode, BuildError> {
        let genus = s.genus();
        let explored = explore(s);
        let mut targets = explored.targets_by_depth.clone();
        if targets.is_empty() {
            return Err(BuildError::Other(Error::Factorization {
                tacks: s.to_string(),
                message: "no licensed path to a terminal or shortenable sequence".into(),
            }));
        }
        let spread = |bits: u64| -> u64 {
            let mut total = 0;
            let mut b = bits;
            while b != 0 {
                total += b.trailing_zeros() as u64;
                b &= b - 1;
            }
            total
        };
        targets.sort_by_key(|&t| {
            let terminal = TackSequence::from_bits(genus, t)
                .ok()
                .and_then(|seq| terminal_kind(&seq))
                .is_none();
            (terminal, t.count_ones(), spread(t), explored.depth_of(t), t)
        });
        let mut cycle = None;
        for t in targets {
            let target = TackSequence::from_bits(genus, t)?;
            match self.build(&target) {
                Ok(child) => {
                    let steps = explored.path_to(t, genus)?;
                    return Ok(CertNode::Moves {
                        tacks: *s,
                        steps,
                        child: Box::new(child),
                    });
                }
                Err(BuildError::Cycle(b)) => cycle = Some(b),
                Err(other) => return Err(other),
            }
        }
        Err(BuildError::Cycle(cycle.expect("at least one target tried")))
    }

    fn shorten(&mut self, s: &TackSequence) -> std::result::Result<CertNode, BuildError> {
        let f = chain_shorten(s)?;
        let step = RewriteStep {
            rule: RuleId::ChainShorten,
            conjugator: TwistWord::identity(),
            before: *s,
            after: vec![f.head, f.base, f.mid, f.tail],
        };
        let head_cert = self.build(&f.head)?;
        let base_cert = self.build(&f.base)?;
        let mid_cert = self.build(&f.mid)?;
        let tail_cert = self.build(&f.tail)?;
        let children = vec![
            CertNode::Inverse {
                tacks: f.head,
                child: Box::new(head_cert),
            },
            CertNode::Conj {
                conjugator: TwistWord::single(SymbolName::D(4), 1),
                child: Box::new(base_cert),
            },
            mid_cert,
            CertNode::Conj {
                conjugator: TwistWord::single(SymbolName::Y(4), 1),
                child: Box::new(tail_cert),
            },
        ];
        Ok(CertNode::Shorten {
            tacks: *s,
            step,
            children,
        })
    }
}

impl CertNode {
    /// The flattened word of the node.
    pub fn flatten(&self) -> TwistWord {
        match self {
            CertNode::Leaf { word } => word.clone(),
            CertNode::Prod { children } => {
                let mut out = TwistWord::identity();
                for c in children {
                    out = out.concat(&c.flatten());
                }
                out
            }
            CertNode::Conj { conjugator, child } => conjugator.conjugate(&child.flatten()),
            CertNode::Moves { steps, child, .. } => {
                // The recorded moves give map(before) = W^{-1} map(after) W
                // with W the step conjugators multiplied latest first.
                let mut w = TwistWord::identity();
                for step in steps.iter().rev() {
                    w = w.concat(&step.conjugator);
                }
                w.inverse().conjugate(&child.flatten())
            }
            CertNode::Shorten { children, .. } | CertNode::Terminal { children, .. } => {
                let mut out = TwistWord::identity();
                for c in children {
                    out = out.concat(&c.flatten());
                }
                out
            }
            CertNode::Inverse { child, .. } => child.flatten().inverse(),
            CertNode::Trivial { .. } => TwistWord::identity(),
        }
    }

    /// The tack-sequence label, for labeled nodes.
    pub fn tacks(&self) -> Option<TackSequence> {
        match self {
            CertNode::Moves { tacks, .. }
            | CertNode::Shorten { tacks, .. }
            | CertNode::Terminal { tacks, .. }
            | CertNode::Trivial { tacks } => Some(*tacks),
            _ => None,
        }
    }

    /// Number of leaves under this node.
    pub fn leaf_count(&self) -> usize {
        match self {
            CertNode::Leaf { .. } => 1,
            CertNode::Prod { children }
            | CertNode::Shorten { children, .. }
            | CertNode::Terminal { children, .. } => children.iter().map(|c| c.leaf_count()).sum(),
            CertNode::Conj { child, .. }
            | CertNode::Moves { child, .. }
            | CertNode::Inverse { child, .. } => child.leaf_count(),
            CertNode::Trivial { .. } => 0,
        }
    }
}

/// A located verification failure.
#[derive(Debug, Clone)]
pub struct VerifyFailure {
    pub path: String,
    pub message: String,
}

/// Outcome of certificate verification.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub ok: bool,
    pub failures: Vec<VerifyFailure>,
    /// The integral image of the flattened word is the identity matrix.
    pub identity_ok: bool,
    /// Number of generator-word leaves.
    pub leaves: usize,
}

/// Names allowed in leaves and conjugators: the generating set, its starred
/// conjugates, and nothing else. In particular no bare C_i with i >= 4 and
/// no bare B or B4'.
fn allowed_symbol(name: SymbolName, genus: Genus) -> bool {
    if name.check_range(genus).is_err() {
        return false;
    }
    match name {
        SymbolName::C(i) => i <= 3,
        SymbolName::B(_) | SymbolName::BPrime4 => false,
        _ => true,
    }
}

/// Verifies a certificate: every move replays through the oracle, every
/// shortening step lists the prescribed factors, every leaf and conjugator
/// stays inside the generating-set alphabet, and the flattened word maps to
/// the identity matrix over Z. Failures carry the node path.
pub fn verify_certificate(cert: &FactorizationCertificate) -> Result<VerifyReport> {
    let mut failures = Vec::new();
    if let Some(label) = cert.root.tacks() {
        if label != cert.input {
            failures.push(VerifyFailure {
                path: "root".into(),
                message: format!("root label {label} differs from input {}", cert.input),
            });
        }
    }
    walk(&cert.root, cert.genus, "root", &mut failures);
    let flattened = cert.root.flatten();
    let image: SymplecticMatrix = flattened.evaluate(cert.genus)?;
    let identity_ok = image.is_identity();
    if !identity_ok {
        failures.push(VerifyFailure {
            path: "root".into(),
            message: "flattened word does not act trivially on homology".into(),
        });
    }
    Ok(VerifyReport {
        ok: failures.is_empty(),
        failures,
        identity_ok,
        leaves: cert.root.leaf_count(),
    })
}

fn check_alphabet(
    word: &TwistWord,
    genus: Genus,
    path: &str,
    what: &str,
    failures: &mut Vec<VerifyFailure>,
) {
    for f in &word.factors {
        if !allowed_symbol(f.name, genus) {
            failures.push(VerifyFailure {
                path: path.to_string(),
                message: format!("{what} uses `{}`, outside the generating set", f.name),
            });
        }
    }
}

fn walk(node: &CertNode, genus: Genus, path: &str, failures: &mut Vec<VerifyFailure>) {
    match node {
        CertNode::Leaf { word } => check_alphabet(word, genus, path, "leaf", failures),
        CertNode::Prod { children } => {
            for (k, c) in children.iter().enumerate() {
                walk(c, genus, &format!("{path}/prod[{k}]"), failures);
            }
        }
        CertNode::Conj { conjugator, child } => {
            check_alphabet(conjugator, genus, path, "conjugator", failures);
            walk(child, genus, &format!("{path}/conj"), failures);
        }
        CertNode::Moves {
            tacks,
            steps,
            child,
        } => {
            let mut at = *tacks;
            for (k, step) in steps.iter().enumerate() {
                let spath = format!("{path}/steps[{k}]");
                if step.before != at {
                    failures.push(VerifyFailure {
                        path: spath.clone(),
                        message: format!("step starts at {} but the chain is at {at}", step.before),
                    });
                    return;
                }
                if step.after.len() != 1 {
                    failures.push(VerifyFailure {
                        path: spath.clone(),
                        message: "conjugation steps have exactly one result".into(),
                    });
                    return;
                }
                check_alphabet(&step.conjugator, genus, &spath, "step conjugator", failures);
                let replayed = if step.rule == RuleId::Complement {
                    apply_move(Move::Complement, &at).map(|(t, _)| t)
                } else {
                    crate::tacks::conjugate_by_word(&step.conjugator, &at)
                };
                match replayed {
                    Ok(next) if next == step.after[0] => at = next,
                    Ok(next) => {
                        failures.push(VerifyFailure {
                            path: spath,
                            message: format!(
                                "replay gives {next}, certificate claims {}",
                                step.after[0]
                            ),
                        });
                        return;
                    }
                    Err(e) => {
                        failures.push(VerifyFailure {
                            path: spath,
                            message: format!("replay failed: {e}"),
                        });
                        return;
                    }
                }
            }
            if let Some(label) = child.tacks() {
                if label != at {
                    failures.push(VerifyFailure {
                        path: path.to_string(),
                        message: format!("moves end at {at} but the child is labeled {label}"),
                    });
                }
            }
            walk(child, genus, &format!("{path}/moves"), failures);
        }
        CertNode::Shorten {
            tacks,
            step,
            children,
        } => {
            match chain_shorten(tacks) {
                Ok(f) => {
                    let want = [f.head, f.base, f.mid, f.tail];
                    if step.rule != RuleId::ChainShorten
                        || step.before != *tacks
                        || step.after != want
                    {
                        failures.push(VerifyFailure {
                            path: path.to_string(),
                            message: "shortening step does not list the prescribed factors".into(),
                        });
                    }
                    if children.len() != 4 {
                        failures.push(VerifyFailure {
                            path: path.to_string(),
                            message: format!("expected 4 factors, found {}", children.len()),
                        });
                        return;
                    }
                    check_shorten_child(
                        &children[0],
                        Some(f.head),
                        true,
                        None,
                        genus,
                        path,
                        0,
                        failures,
                    );
                    check_shorten_child(
                        &children[1],
                        Some(f.base),
                        false,
                        Some("D4"),
                        genus,
                        path,
                        1,
                        failures,
                    );
                    check_shorten_child(
                        &children[2],
                        Some(f.mid),
                        false,
                        None,
                        genus,
                        path,
                        2,
                        failures,
                    );
                    check_shorten_child(
                        &children[3],
                        Some(f.tail),
                        false,
                        Some("Y4"),
                        genus,
                        path,
                        3,
                        failures,
                    );
                }
                Err(e) => failures.push(VerifyFailure {
                    path: path.to_string(),
                    message: format!("not shortenable: {e}"),
                }),
            }
            for (k, c) in children.iter().enumerate() {
                walk(c, genus, &format!("{path}/shorten[{k}]"), failures);
            }
        }
        CertNode::Inverse { tacks, child } => {
            if let Some(label) = child.tacks() {
                if label != *tacks {
                    failures.push(VerifyFailure {
                        path: path.to_string(),
                        message: format!("inverse of {tacks} wraps a child labeled {label}"),
                    });
                }
            }
            walk(child, genus, &format!("{path}/inv"), failures);
        }
        CertNode::Terminal { tacks, children } => {
            match terminal_kind(tacks) {
                None => failures.push(VerifyFailure {
                    path: path.to_string(),
                    message: format!("{tacks} is not a terminal family"),
                }),
                Some(_) => {
                    // The expansion must itself act trivially on homology.
                    let word = CertNode::Prod {
                        children: children.clone(),
                    }
                    .flatten();
                    match word.evaluate(genus) {
                        Ok(m) if m.is_identity() => {}
                        Ok(_) => failures.push(VerifyFailure {
                            path: path.to_string(),
                            message: "terminal expansion does not act trivially".into(),
                        }),
                        Err(e) => failures.push(VerifyFailure {
                            path: path.to_string(),
                            message: format!("terminal expansion fails to evaluate: {e}"),
                        }),
                    }
                }
            }
            for (k, c) in children.iter().enumerate() {
                walk(c, genus, &format!("{path}/term[{k}]"), failures);
            }
        }
        CertNode::Trivial { tacks } => {
            if tacks.popcount() > 2 {
                failures.push(VerifyFailure {
                    path: path.to_string(),
                    message: format!("{tacks} marked trivial but uses more than two indices"),
                });
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn check_shorten_child(
    node: &CertNode,
    want_tacks: Option<TackSequence>,
    want_inverse: bool,
    want_conj: Option<&str>,
    _genus: Genus,
    path: &str,
    index: usize,
    failures: &mut Vec<VerifyFailure>,
) {
    let mut fail = |message: String| {
        failures.push(VerifyFailure {
            path: format!("{path}/shorten[{index}]"),
            message,
        });
    };
    match (node, want_inverse, want_conj) {
        (CertNode::Inverse { tacks, .. }, true, None) => {
            if Some(*tacks) != want_tacks {
                fail(format!(
                    "expected inverse of {:?}, found {tacks}",
                    want_tacks
                ));
            }
        }
        (CertNode::Conj { conjugator, child }, false, Some(w)) => {
            if print_word(conjugator) != w {
                fail(format!("expected conjugator {w}, found {conjugator}"));
            } else if child.tacks() != want_tacks {
                fail(format!(
                    "expected conjugated factor {:?}, found {:?}",
                    want_tacks,
                    child.tacks()
                ));
            }
        }
        (node, false, None) => {
            if node.tacks() != want_tacks {
                fail(format!(
                    "expected factor {:?}, found {:?}",
                    want_tacks,
                    node.tacks()
                ));
            }
        }
        _ => fail("factor has the wrong shape".into()),
    }
}

// --- JSON serialization -------------------------------------------------

impl RewriteStep {
    pub fn to_json(&self) -> Value {
        json!({
            "rule": self.rule.name(),
            "conjugator": print_word(&self.conjugator),
            "before": self.before.bit_string(),
            "after": self.after.iter().map(|t| t.bit_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, genus: Genus) -> Result<RewriteStep> {
        let rule =
            RuleId::parse(str_field(v, "rule")?).ok_or_else(|| bad_json("unknown rule id"))?;
        let conjugator = parse_word(str_field(v, "conjugator")?, genus)?;
        let before = TackSequence::parse(str_field(v, "before")?, genus)?;
        let after = v
            .get("after")
            .and_then(Value::as_array)
            .ok_or_else(|| bad_json("missing `after`"))?
            .iter()
            .map(|t| {
                t.as_str()
                    .ok_or_else(|| bad_json("`after` entries must be strings"))
                    .and_then(|s| TackSequence::parse(s, genus))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RewriteStep {
            rule,
            conjugator,
            before,
            after,
        })
    }
}

fn str_field<'v>(v: &'v Value, key: &str) -> Result<&'v str> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| bad_json(&format!("missing string field `{key}`")))
}

fn bad_json(message: &str) -> Error {
    Error::Syntax {
        position: 0,
        message: message.to_string(),
    }
}

impl CertNode {
    pub fn to_json(&self) -> Value {
        match self {
            CertNode::Leaf { word } => json!({"op": "leaf", "word": print_word(word)}),
            CertNode::Prod { children } => json!({
                "op": "prod",
                "children": children.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            }),
            CertNode::Conj { conjugator, child } => json!({
                "op": "conj",
                "word": print_word(conjugator),
                "children": [child.to_json()],
            }),
            CertNode::Moves {
                tacks,
                steps,
                child,
            } => json!({
                "op": "moves",
                "tacks": tacks.bit_string(),
                "steps": steps.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
                "children": [child.to_json()],
            }),
            CertNode::Shorten {
                tacks,
                step,
                children,
            } => json!({
                "op": "shorten",
                "tacks": tacks.bit_string(),
                "steps": [step.to_json()],
                "children": children.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            }),
            CertNode::Inverse { tacks, child } => json!({
                "op": "inv",
                "tacks": tacks.bit_string(),
                "children": [child.to_json()],
            }),
            CertNode::Terminal { tacks, children } => json!({
                "op": "terminal",
                "tacks": tacks.bit_string(),
                "children": children.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            }),
            CertNode::Trivial { tacks } => json!({
                "op": "trivial",
                "tacks": tacks.bit_string(),
            }),
        }
    }

    pub fn from_json(v: &Value, genus: Genus) -> Result<CertNode> {
        let op = str_field(v, "op")?;
        let children = || -> Result<Vec<CertNode>> {
            v.get("children")
                .and_then(Value::as_array)
                .ok_or_else(|| bad_json("missing `children`"))?
                .iter()
                .map(|c| CertNode::from_json(c, genus))
                .collect()
        };
        let one_child = || -> Result<Box<CertNode>> {
            let cs = children()?;
            if cs.len() != 1 {
                return Err(bad_json("expected exactly one child"));
            }
            Ok(Box::new(cs.into_iter().next().unwrap()))
        };
        let tacks =
            || -> Result<TackSequence> { TackSequence::parse(str_field(v, "tacks")?, genus) };
        let steps = || -> Result<Vec<RewriteStep>> {
            v.get("steps")
                .and_then(Value::as_array)
                .ok_or_else(|| bad_json("missing `steps`"))?
                .iter()
                .map(|s| RewriteStep::from_json(s, genus))
                .collect()
        };
        Ok(match op {
            "leaf" => CertNode::Leaf {
                word: parse_word(str_field(v, "word")?, genus)?,
            },
            "prod" => CertNode::Prod {
                children: children()?,
            },
            "conj" => CertNode::Conj {
                conjugator: parse_word(str_field(v, "word")?, genus)?,
                child: one_child()?,
            },
            "moves" => CertNode::Moves {
                tacks: tacks()?,
                steps: steps()?,
                child: one_child()?,
            },
            "shorten" => {
                let mut ss = steps()?;
                if ss.len() != 1 {
                    return Err(bad_json("shorten carries exactly one step"));
                }
                CertNode::Shorten {
                    tacks: tacks()?,
                    step: ss.pop().unwrap(),
                    children: children()?,
                }
            }
            "inv" => CertNode::Inverse {
                tacks: tacks()?,
                child: one_child()?,
            },
            "terminal" => CertNode::Terminal {
                tacks: tacks()?,
                children: children()?,
            },
            "trivial" => CertNode::Trivial { tacks: tacks()? },
            other => return Err(bad_json(&format!("unknown op `{other}`"))),
        })
    }
}

impl FactorizationCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "genus": self.genus.get(),
            "input": self.input.bit_string(),
            "root": self.root.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<FactorizationCertificate> {
        let genus = Genus::new(
            v.get("genus")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad_json("missing `genus`"))? as usize,
        )?;
        let input = TackSequence::parse(str_field(v, "input")?, genus)?;
        let root = CertNode::from_json(
            v.get("root").ok_or_else(|| bad_json("missing `root`"))?,
            genus,
        )?;
        Ok(FactorizationCertificate { genus, input, root })
    }
}
