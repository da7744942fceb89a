//! Letters, finite and eventually periodic words, the H-partition and the
//! order on the chains of words entering a vertex.
//!
//! A word `l1 l2 … ln` is a walk with nodes `x0 … xn`, read left to right
//! starting at the anchor `x0`. A direct letter `lᵢ = α` means `α·xᵢ = xᵢ₋₁`
//! and an inverse letter `lᵢ = β⁻¹` means `β·xᵢ₋₁ = xᵢ`.
//!
//! Text syntax:
//!
//! * finite: `a b^-1`; empty words are `1+` and `1-` (the two signs)
//! * one-sided: `b | (a b^-1)^inf`, or `(a b^-1)^inf` without a prefix
//! * two-sided: `inf^(b a^-1) b . (a b^-1)^inf`; the dot is the anchor and
//!   the part left of it spells `u⁻¹`, so here `u = b^-1 | (a b^-1)^inf`.
//!   Either side may be finite.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{ArrowId, StringAlgebra, VertexId};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub arrow: ArrowId,
    pub inverse: bool,
}

impl Letter {
    pub fn direct(arrow: ArrowId) -> Self {
        Letter { arrow, inverse: false }
    }

    pub fn inverse(arrow: ArrowId) -> Self {
        Letter { arrow, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            arrow: self.arrow,
            inverse: !self.inverse,
        }
    }

    pub fn is_direct(self) -> bool {
        !self.inverse
    }
}

/// Which of the two chains `Ĥ₁(S)`, `Ĥ₋₁(S)` a word belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn value(self) -> i8 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Parses `a` or `a^-1`.
pub fn parse_letter(alg: &StringAlgebra, token: &str) -> Result<Letter> {
    let (name, inverse) = match token.strip_suffix("^-1") {
        Some(n) => (n, true),
        None => (token, false),
    };
    let arrow = alg.arrow_id(name)?;
    Ok(Letter { arrow, inverse })
}

fn invalid(position: usize, reason: impl Into<String>) -> Error {
    Error::InvalidWord {
        position,
        reason: reason.into(),
    }
}

/// A finite word. Empty words carry a sign; for nonempty words the sign is
/// always stored as `Plus` and carries no meaning (the side comes from the
/// first letter and the H-partition).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    anchor: VertexId,
    end: VertexId,
    letters: Vec<Letter>,
    sign: Side,
}

impl Word {
    pub fn empty(anchor: VertexId, sign: Side) -> Self {
        Word {
            anchor,
            end: anchor,
            letters: Vec::new(),
            sign,
        }
    }

    /// Validates `letters` as a walk from `anchor`. For a nonempty word the
    /// anchor may be omitted.
    pub fn new(alg: &StringAlgebra, anchor: Option<VertexId>, letters: Vec<Letter>) -> Result<Self> {
        let anchor = match (anchor, letters.first()) {
            (Some(a), _) => a,
            (None, Some(&l)) => alg.letter_start(l),
            (None, None) => return Err(invalid(0, "empty word needs an anchor")),
        };
        alg.check_walk(anchor, &letters).map_err(|(p, r)| invalid(p, r))?;
        let end = letters.last().map_or(anchor, |&l| alg.letter_end(l));
        Ok(Word {
            anchor,
            end,
            letters,
            sign: Side::Plus,
        })
    }

    /// Parses the finite-word syntax. `1+` and `1-` denote empty words and
    /// require an anchor.
    pub fn parse(alg: &StringAlgebra, anchor: Option<VertexId>, text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "1+" | "1-" | "1" | "" => {
                let anchor = anchor.ok_or_else(|| invalid(0, "empty word needs an anchor"))?;
                let sign = if text == "1-" { Side::Minus } else { Side::Plus };
                return Ok(Word::empty(anchor, sign));
            }
            _ => {}
        }
        let letters = text
            .split_whitespace()
            .map(|t| parse_letter(alg, t))
            .collect::<Result<Vec<_>>>()?;
        Word::new(alg, anchor, letters)
    }

    pub fn anchor(&self) -> VertexId {
        self.anchor
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sign of an empty word.
    pub fn sign(&self) -> Side {
        self.sign
    }

    pub fn with_sign(mut self, sign: Side) -> Self {
        if self.letters.is_empty() {
            self.sign = sign;
        }
        self
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Reverses the word and flips every letter; flips the sign of an empty
    /// word.
    pub fn invert(&self) -> Word {
        Word {
            anchor: self.end,
            end: self.anchor,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
            sign: if self.letters.is_empty() {
                self.sign.flip()
            } else {
                Side::Plus
            },
        }
    }

    pub fn concat(&self, alg: &StringAlgebra, other: &Word) -> Result<Word> {
        if self.end != other.anchor {
            return Err(Error::AnchorMismatch {
                expected: alg.vertex_name(self.end).to_string(),
                found: alg.vertex_name(other.anchor).to_string(),
            });
        }
        if self.letters.is_empty() {
            return Ok(other.clone());
        }
        if other.letters.is_empty() {
            return Ok(self.clone());
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(alg, Some(self.anchor), letters)
    }

    /// Appends one letter, checking validity.
    pub fn push(&self, alg: &StringAlgebra, l: Letter) -> Option<Word> {
        if !alg.extends(self.end, &self.letters, l) {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.push(l);
        Some(Word {
            anchor: self.anchor,
            end: alg.letter_end(l),
            letters,
            sign: Side::Plus,
        })
    }

    /// The first `n` letters. The empty prefix keeps the side of `self`.
    pub fn prefix(&self, alg: &StringAlgebra, h: &HPartition, n: usize) -> Word {
        if n == 0 {
            return Word::empty(self.anchor, h.side_of_word(self));
        }
        let letters = self.letters[..n].to_vec();
        let end = alg.letter_end(letters[n - 1]);
        Word {
            anchor: self.anchor,
            end,
            letters,
            sign: Side::Plus,
        }
    }

    /// Is `other` an initial segment of `self`?
    pub fn starts_with(&self, other: &Word) -> bool {
        self.anchor == other.anchor && self.letters.starts_with(&other.letters)
    }

    pub fn to_text(&self, alg: &StringAlgebra) -> String {
        if self.letters.is_empty() {
            return match self.sign {
                Side::Plus => "1+".into(),
                Side::Minus => "1-".into(),
            };
        }
        letters_text(alg, &self.letters)
    }
}

/// Every nonempty word of length at most `max_len`.
pub fn all_words(alg: &StringAlgebra, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier: Vec<Word> = alg
        .letters()
        .into_iter()
        .map(|l| Word::new(alg, None, vec![l]).expect("single letters are walks"))
        .collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in alg.letters() {
                if let Some(x) = w.push(alg, l) {
                    next.push(x);
                }
            }
        }
        out.append(&mut frontier);
        frontier = next;
    }
    out
}

/// One word per string module of dimension at most `max_len + 1`: the
/// trivial words at each vertex and each nonempty word up to inversion.
pub fn string_representatives(alg: &StringAlgebra, max_len: usize) -> Vec<Word> {
    let key = |w: &Word| -> Vec<(String, bool)> {
        w.letters()
            .iter()
            .map(|&l| {
                let (n, i) = alg.letter_key(l);
                (n.to_string(), i)
            })
            .collect()
    };
    let mut out: Vec<Word> = (0..alg.num_vertices()).map(|v| Word::empty(VertexId(v), Side::Plus)).collect();
    out.extend(all_words(alg, max_len).into_iter().filter(|w| key(w) <= key(&w.invert())));
    out
}

pub fn letters_text(alg: &StringAlgebra, letters: &[Letter]) -> String {
    letters
        .iter()
        .map(|&l| alg.letter_name(l))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Smallest `d` with `q = (q[..d])^k`.
fn primitive_root_len(q: &[Letter]) -> usize {
    let n = q.len();
    (1..=n)
        .find(|&d| n % d == 0 && (d..n).all(|i| q[i] == q[i - d]))
        .unwrap_or(n)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// An infinite word `prefix · period^∞`, kept in canonical form: the period is
/// primitive and the prefix is as short as possible.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OneSidedWord {
    anchor: VertexId,
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl OneSidedWord {
    pub fn new(alg: &StringAlgebra, anchor: Option<VertexId>, prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(invalid(prefix.len(), "empty period"));
        }
        let anchor = anchor.unwrap_or_else(|| alg.letter_start(*prefix.first().unwrap_or(&period[0])));
        if !alg.is_cyclic_walk(&period) {
            return Err(invalid(prefix.len(), "period cannot be repeated"));
        }
        let reps = 2 + alg.max_relation_len() / period.len() + 1;
        let mut all = prefix.clone();
        for _ in 0..reps {
            all.extend_from_slice(&period);
        }
        alg.check_walk(anchor, &all).map_err(|(p, r)| invalid(p, r))?;
        Ok(Self::canonical(anchor, prefix, period))
    }

    fn canonical(anchor: VertexId, mut prefix: Vec<Letter>, period: Vec<Letter>) -> Self {
        let d = primitive_root_len(&period);
        let mut period = period[..d].to_vec();
        while let (Some(&p), Some(&q)) = (prefix.last(), period.last()) {
            if p != q {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        OneSidedWord { anchor, prefix, period }
    }

    /// Recomputes the canonical form; the identity on values built by `new`.
    pub fn canonicalize(&self) -> Self {
        Self::canonical(self.anchor, self.prefix.clone(), self.period.clone())
    }

    /// Parses `prefix | (period)^inf` or `(period)^inf`.
    pub fn parse(alg: &StringAlgebra, anchor: Option<VertexId>, text: &str) -> Result<Self> {
        let text = text.trim();
        let (pre, per) = match text.split_once('|') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => ("", text),
        };
        let per = per
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(")^inf"))
            .ok_or_else(|| invalid(0, "expected `(period)^inf`"))?;
        let parse_letters = |s: &str| -> Result<Vec<Letter>> {
            s.split_whitespace().map(|t| parse_letter(alg, t)).collect()
        };
        Self::new(alg, anchor, parse_letters(pre)?, parse_letters(per)?)
    }

    pub fn anchor(&self) -> VertexId {
        self.anchor
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn letter(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The finite word `prefix · periodⁿ`.
    pub fn truncate(&self, alg: &StringAlgebra, n: usize) -> Word {
        let mut letters = self.prefix.clone();
        for _ in 0..n {
            letters.extend_from_slice(&self.period);
        }
        Word::new(alg, Some(self.anchor), letters).expect("truncation of a valid word is valid")
    }

    /// The first `n` letters as a finite word.
    pub fn take(&self, alg: &StringAlgebra, n: usize) -> Word {
        Word::new(alg, Some(self.anchor), (0..n).map(|i| self.letter(i)).collect())
            .expect("prefix of a valid word is valid")
    }

    pub fn to_text(&self, alg: &StringAlgebra) -> String {
        let per = format!("({})^inf", letters_text(alg, &self.period));
        if self.prefix.is_empty() {
            per
        } else {
            format!("{} | {}", letters_text(alg, &self.prefix), per)
        }
    }

    /// Normal form `v · l · D^∞`: `None` when periodic, else `(l, D)`.
    pub fn normal_form(&self) -> Option<(Letter, &[Letter])> {
        self.prefix.last().map(|&l| (l, self.period.as_slice()))
    }
}

/// Shape of an infinite end `v · l · D^∞`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum OneSidedShape {
    Periodic,
    /// Last letter of `D` is inverse.
    Expanding(Letter, Vec<Letter>),
    /// Last letter of `D` is direct.
    Contracting(Letter, Vec<Letter>),
}

impl OneSidedShape {
    fn from_parts(l: Option<Letter>, d: Vec<Letter>) -> Self {
        match l {
            None => OneSidedShape::Periodic,
            Some(l) => {
                if d.last().is_some_and(|x| x.inverse) {
                    OneSidedShape::Expanding(l, d)
                } else {
                    OneSidedShape::Contracting(l, d)
                }
            }
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            OneSidedShape::Periodic => "periodic",
            OneSidedShape::Expanding(..) => "expanding",
            OneSidedShape::Contracting(..) => "contracting",
        }
    }
}

pub fn classify_one_sided(w: &OneSidedWord) -> OneSidedShape {
    let w = w.canonicalize();
    OneSidedShape::from_parts(w.prefix.last().copied(), w.period.clone())
}

/// A finite or one-sided infinite word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum AnyWord {
    Finite(Word),
    Infinite(OneSidedWord),
}

impl From<Word> for AnyWord {
    fn from(w: Word) -> Self {
        AnyWord::Finite(w)
    }
}

impl From<OneSidedWord> for AnyWord {
    fn from(w: OneSidedWord) -> Self {
        AnyWord::Infinite(w)
    }
}

impl AnyWord {
    /// Parses either syntax; `^inf` marks an infinite word.
    pub fn parse(alg: &StringAlgebra, anchor: Option<VertexId>, text: &str) -> Result<Self> {
        if text.contains("^inf") {
            OneSidedWord::parse(alg, anchor, text).map(AnyWord::Infinite)
        } else {
            Word::parse(alg, anchor, text).map(AnyWord::Finite)
        }
    }

    pub fn anchor(&self) -> VertexId {
        match self {
            AnyWord::Finite(w) => w.anchor(),
            AnyWord::Infinite(w) => w.anchor(),
        }
    }

    pub fn letter(&self, i: usize) -> Option<Letter> {
        match self {
            AnyWord::Finite(w) => w.letters().get(i).copied(),
            AnyWord::Infinite(w) => Some(w.letter(i)),
        }
    }

    pub fn first(&self) -> Option<Letter> {
        self.letter(0)
    }

    pub fn finite_len(&self) -> Option<usize> {
        match self {
            AnyWord::Finite(w) => Some(w.len()),
            AnyWord::Infinite(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.finite_len() == Some(0)
    }

    pub fn as_finite(&self) -> Option<&Word> {
        match self {
            AnyWord::Finite(w) => Some(w),
            AnyWord::Infinite(_) => None,
        }
    }

    pub fn as_infinite(&self) -> Option<&OneSidedWord> {
        match self {
            AnyWord::Finite(_) => None,
            AnyWord::Infinite(w) => Some(w),
        }
    }

    /// Number of letters after which two words with the same first
    /// `cutoff` letters are equal.
    fn cutoff(&self) -> (usize, usize) {
        match self {
            AnyWord::Finite(w) => (w.len(), 0),
            AnyWord::Infinite(w) => (w.prefix.len(), w.period.len()),
        }
    }

    /// The first `n` letters (or all of a shorter finite word) as a word on
    /// the same side.
    pub fn take(&self, alg: &StringAlgebra, h: &HPartition, n: usize) -> Word {
        match self {
            AnyWord::Finite(w) => w.prefix(alg, h, n.min(w.len())),
            AnyWord::Infinite(w) => {
                if n == 0 {
                    Word::empty(w.anchor, h.side_of_any(self))
                } else {
                    w.take(alg, n)
                }
            }
        }
    }

    pub fn side(&self, h: &HPartition) -> Side {
        h.side_of_any(self)
    }

    /// Sequence read in the opposite direction, for finite words.
    pub fn to_text(&self, alg: &StringAlgebra) -> String {
        match self {
            AnyWord::Finite(w) => w.to_text(alg),
            AnyWord::Infinite(w) => w.to_text(alg),
        }
    }

    /// Truncates an infinite word to `prefix · periodⁿ`; finite words are
    /// returned unchanged.
    pub fn truncate(&self, alg: &StringAlgebra, h: &HPartition, n: usize) -> Word {
        match self {
            AnyWord::Finite(w) => w.clone(),
            AnyWord::Infinite(w) => {
                let t = w.truncate(alg, n);
                if t.is_empty() {
                    t.with_sign(h.side_of_any(self))
                } else {
                    t
                }
            }
        }
    }
}

/// Assignment of the letters entering each vertex, and of the two empty
/// words, to the chains `H₁` and `H₋₁`.
///
/// The letters entering `S` are the letters whose walk starts at `S`: direct
/// letters of arrows ending at `S` and inverses of arrows starting at `S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HPartition {
    sides: Vec<BTreeMap<Letter, Side>>,
}

impl HPartition {
    /// The letters entering `v`, ordered by arrow name with direct first.
    pub fn entering(alg: &StringAlgebra, v: VertexId) -> Vec<Letter> {
        alg.letters()
            .into_iter()
            .filter(|&l| alg.letter_start(l) == v)
            .collect()
    }

    fn valid_at(alg: &StringAlgebra, assignment: &[(Letter, Side)]) -> std::result::Result<(), String> {
        for side in [Side::Plus, Side::Minus] {
            let class: Vec<Letter> = assignment.iter().filter(|(_, s)| *s == side).map(|(l, _)| *l).collect();
            let direct: Vec<Letter> = class.iter().copied().filter(|l| l.is_direct()).collect();
            let inverse: Vec<Letter> = class.iter().copied().filter(|l| l.inverse).collect();
            if direct.len() > 1 || inverse.len() > 1 {
                return Err(format!(
                    "H{side} contains {}",
                    letters_text(alg, &class)
                ));
            }
            if let (Some(&a), Some(&g)) = (direct.first(), inverse.first()) {
                if !alg.is_zero_pair(g.arrow, a.arrow) {
                    return Err(format!(
                        "H{side} contains {} and {} but {} {} is not a relation",
                        alg.letter_name(a),
                        alg.letter_name(g),
                        alg.arrows[g.arrow.0].name,
                        alg.arrows[a.arrow.0].name
                    ));
                }
            }
        }
        Ok(())
    }

    fn valid_assignments(alg: &StringAlgebra, v: VertexId) -> Vec<Vec<(Letter, Side)>> {
        let letters = Self::entering(alg, v);
        let n = letters.len();
        let mut out = Vec::new();
        // bit i set means letter i goes to H₋₁; counting upward visits the
        // assignments in lexicographic order with H₁ first
        for mask in 0u32..(1 << n) {
            let assignment: Vec<(Letter, Side)> = letters
                .iter()
                .enumerate()
                .map(|(i, &l)| {
                    let bit = (mask >> (n - 1 - i)) & 1;
                    (l, if bit == 0 { Side::Plus } else { Side::Minus })
                })
                .collect();
            if Self::valid_at(alg, &assignment).is_ok() {
                out.push(assignment);
            }
        }
        out
    }

    /// The lexicographically least valid partition (letters ordered by arrow
    /// name then direction, `H₁` preferred), and whether it is the only one.
    pub fn compute(alg: &StringAlgebra) -> (HPartition, bool) {
        let mut sides = Vec::new();
        let mut unique = true;
        for v in 0..alg.num_vertices() {
            let all = Self::valid_assignments(alg, VertexId(v));
            unique &= all.len() == 1;
            let first = all.into_iter().next().expect("string algebras admit an H-partition");
            sides.push(first.into_iter().collect());
        }
        (HPartition { sides }, unique)
    }

    /// Shorthand for the deterministic partition.
    pub fn lexicographic(alg: &StringAlgebra) -> HPartition {
        Self::compute(alg).0
    }

    /// Every valid partition.
    pub fn enumerate_all(alg: &StringAlgebra) -> Vec<HPartition> {
        let mut acc: Vec<Vec<BTreeMap<Letter, Side>>> = vec![Vec::new()];
        for v in 0..alg.num_vertices() {
            let options = Self::valid_assignments(alg, VertexId(v));
            acc = acc
                .into_iter()
                .flat_map(|prev| {
                    options.iter().map(move |o| {
                        let mut next = prev.clone();
                        next.push(o.iter().copied().collect());
                        next
                    })
                })
                .collect();
        }
        acc.into_iter().map(|sides| HPartition { sides }).collect()
    }

    /// Builds a partition from `(letter, side)` pairs, e.g. `("b", +1)`,
    /// `("b^-1", +1)`. Unlisted entering letters go to `H₁`.
    pub fn from_assignment(alg: &StringAlgebra, pairs: &[(&str, i8)]) -> Result<HPartition> {
        let mut given = BTreeMap::new();
        for (tok, s) in pairs {
            let l = parse_letter(alg, tok)?;
            let side = match s {
                1 => Side::Plus,
                -1 => Side::Minus,
                _ => return Err(Error::InvalidPartition(format!("side {s} is not ±1"))),
            };
            given.insert(l, side);
        }
        let mut sides = Vec::new();
        for v in 0..alg.num_vertices() {
            let assignment: Vec<(Letter, Side)> = Self::entering(alg, VertexId(v))
                .into_iter()
                .map(|l| (l, given.get(&l).copied().unwrap_or(Side::Plus)))
                .collect();
            Self::valid_at(alg, &assignment).map_err(Error::InvalidPartition)?;
            sides.push(assignment.into_iter().collect());
        }
        Ok(HPartition { sides })
    }

    /// The partition with `H₁` and `H₋₁` exchanged at every vertex.
    pub fn flipped(&self) -> HPartition {
        HPartition {
            sides: self
                .sides
                .iter()
                .map(|m| m.iter().map(|(&l, &s)| (l, s.flip())).collect())
                .collect(),
        }
    }

    pub fn side_of_letter(&self, alg: &StringAlgebra, l: Letter) -> Side {
        self.sides[alg.letter_start(l).0][&l]
    }

    fn side_of_first(&self, anchor: VertexId, first: Letter) -> Side {
        self.sides[anchor.0][&first]
    }

    pub fn side_of_word(&self, w: &Word) -> Side {
        match w.first() {
            None => w.sign(),
            Some(l) => self.side_of_first(w.anchor(), l),
        }
    }

    pub fn side_of_any(&self, w: &AnyWord) -> Side {
        match w {
            AnyWord::Finite(w) => self.side_of_word(w),
            AnyWord::Infinite(w) => self.side_of_first(w.anchor(), w.letter(0)),
        }
    }

    /// `side_of` with an anchor check.
    pub fn side_of(&self, alg: &StringAlgebra, w: &AnyWord, at: VertexId) -> Result<Side> {
        if w.anchor() != at {
            return Err(Error::AnchorMismatch {
                expected: alg.vertex_name(at).to_string(),
                found: alg.vertex_name(w.anchor()).to_string(),
            });
        }
        Ok(self.side_of_any(w))
    }

    /// The direct and inverse letters of `H_side(v)`.
    pub fn class_letters(&self, v: VertexId, side: Side) -> (Option<Letter>, Option<Letter>) {
        let mut d = None;
        let mut i = None;
        for (&l, &s) in &self.sides[v.0] {
            if s == side {
                if l.inverse {
                    i = Some(l);
                } else {
                    d = Some(l);
                }
            }
        }
        (d, i)
    }

    /// Readable assignment, one entry per vertex.
    pub fn describe(&self, alg: &StringAlgebra) -> Vec<(String, Vec<String>, Vec<String>)> {
        (0..self.sides.len())
            .map(|v| {
                let pick = |side| {
                    self.sides[v]
                        .iter()
                        .filter(|(_, s)| **s == side)
                        .map(|(l, _)| alg.letter_name(*l))
                        .collect::<Vec<_>>()
                };
                (alg.vertices[v].clone(), pick(Side::Plus), pick(Side::Minus))
            })
            .collect()
    }
}

/// Continuation letters of a finite word inside its chain: the direct and
/// the inverse letter `l` such that `w·l` is valid. For an empty word these
/// are the letters of its class.
pub fn continuations(alg: &StringAlgebra, h: &HPartition, w: &Word) -> (Option<Letter>, Option<Letter>) {
    if w.is_empty() {
        return h.class_letters(w.anchor(), w.sign());
    }
    let mut d = None;
    let mut i = None;
    for l in alg.letters() {
        if alg.extends(w.end(), w.letters(), l) {
            if l.inverse {
                i = Some(l);
            } else {
                d = Some(l);
            }
        }
    }
    (d, i)
}

/// Total order on a chain `Ĥᵢ(S)`.
///
/// With `c` the longest common prefix, `w1 < w2` iff `w1 = c` and `w2`
/// continues with a direct letter, or `w1` continues with an inverse letter
/// and `w2 = c`, or `w1` continues inverse and `w2` direct.
pub fn compare(alg: &StringAlgebra, h: &HPartition, w1: &AnyWord, w2: &AnyWord) -> Result<Ordering> {
    if w1.anchor() != w2.anchor() {
        return Err(Error::AnchorMismatch {
            expected: alg.vertex_name(w1.anchor()).to_string(),
            found: alg.vertex_name(w2.anchor()).to_string(),
        });
    }
    if h.side_of_any(w1) != h.side_of_any(w2) {
        return Err(Error::ChainMismatch);
    }
    let (p1, q1) = w1.cutoff();
    let (p2, q2) = w2.cutoff();
    let limit = match (q1, q2) {
        (0, _) | (_, 0) => p1.max(p2) + q1.max(q2) + 1,
        _ => p1.max(p2) + lcm(q1, q2),
    };
    for i in 0..=limit {
        match (w1.letter(i), w2.letter(i)) {
            (None, None) => return Ok(Ordering::Equal),
            (None, Some(l)) => return Ok(if l.inverse { Ordering::Greater } else { Ordering::Less }),
            (Some(l), None) => return Ok(if l.inverse { Ordering::Less } else { Ordering::Greater }),
            (Some(a), Some(b)) if a == b => {}
            (Some(a), Some(b)) => {
                if a.inverse == b.inverse {
                    return Err(Error::ChainMismatch);
                }
                return Ok(if a.inverse { Ordering::Less } else { Ordering::Greater });
            }
        }
    }
    Ok(Ordering::Equal)
}

/// A word `w = u⁻¹.v` with an anchor. `left` holds `u` and `right` holds `v`;
/// the empty side, if any, carries the sign opposite to the other side.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TwoSidedWord {
    anchor: VertexId,
    left: AnyWord,
    right: AnyWord,
}

/// Shape of one end of a two-sided word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum EndShape {
    Finite,
    Periodic,
    Expanding(Letter, Vec<Letter>),
    Contracting(Letter, Vec<Letter>),
}

impl EndShape {
    pub fn tag(&self) -> &'static str {
        match self {
            EndShape::Finite => "finite",
            EndShape::Periodic => "periodic",
            EndShape::Expanding(..) => "expanding",
            EndShape::Contracting(..) => "contracting",
        }
    }
}

impl TwoSidedWord {
    /// Builds `left⁻¹.right` and checks that it is a valid word. Signs of
    /// empty sides are normalized as described on the type.
    pub fn new(alg: &StringAlgebra, h: &HPartition, anchor: VertexId, left: AnyWord, right: AnyWord) -> Result<Self> {
        for w in [&left, &right] {
            if w.anchor() != anchor {
                return Err(Error::AnchorMismatch {
                    expected: alg.vertex_name(anchor).to_string(),
                    found: alg.vertex_name(w.anchor()).to_string(),
                });
            }
        }
        let (left, right) = Self::fix_signs(h, anchor, left, right);
        let w = TwoSidedWord { anchor, left, right };
        let probe = w.window(alg, 0);
        alg.check_walk(probe.0, &probe.1).map_err(|(p, r)| invalid(p, r))?;
        if !w.left.is_empty() && !w.right.is_empty() && h.side_of_any(&w.left) == h.side_of_any(&w.right) {
            // both sides in one class would make u⁻¹v cancel or meet a
            // relation, which the walk check has already excluded
            return Err(Error::ChainMismatch);
        }
        Ok(w)
    }

    fn fix_signs(h: &HPartition, anchor: VertexId, left: AnyWord, right: AnyWord) -> (AnyWord, AnyWord) {
        match (left.is_empty(), right.is_empty()) {
            (true, true) => (
                Word::empty(anchor, Side::Minus).into(),
                Word::empty(anchor, Side::Plus).into(),
            ),
            (true, false) => {
                let s = h.side_of_any(&right).flip();
                (Word::empty(anchor, s).into(), right)
            }
            (false, true) => {
                let s = h.side_of_any(&left).flip();
                (left, Word::empty(anchor, s).into())
            }
            (false, false) => (left, right),
        }
    }

    /// Parses `inf^(E) u' . v' (F)^inf`; infinite parts are optional.
    pub fn parse(alg: &StringAlgebra, h: &HPartition, anchor: Option<VertexId>, text: &str) -> Result<Self> {
        let (l, r) = text
            .split_once(" . ")
            .or_else(|| text.trim().strip_prefix(". ").map(|r| ("", r)))
            .or_else(|| text.trim().strip_suffix(" .").map(|l| (l, "")))
            .or_else(|| (text.trim() == ".").then_some(("", "")))
            .ok_or_else(|| invalid(0, "expected ` . ` separating the two sides"))?;
        let tokens = |s: &str| -> Result<Vec<Letter>> { s.split_whitespace().map(|t| parse_letter(alg, t)).collect() };
        // left side spells u⁻¹ = inf^(E) u'
        let l = l.trim();
        let (e, u_fin) = match l.strip_prefix("inf^(") {
            Some(rest) => {
                let (e, tail) = rest.split_once(')').ok_or_else(|| invalid(0, "unclosed `inf^(`"))?;
                (Some(tokens(e)?), tokens(tail)?)
            }
            None => (None, tokens(l)?),
        };
        let r = r.trim();
        let (v_fin, f) = match r.find('(') {
            Some(i) => {
                let per = r[i..]
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(")^inf"))
                    .ok_or_else(|| invalid(0, "expected `(period)^inf` on the right"))?;
                (tokens(&r[..i])?, Some(tokens(per)?))
            }
            None => (tokens(r)?, None),
        };
        let anchor = match anchor {
            Some(a) => a,
            None => {
                if let Some(&x) = v_fin.first().or(f.as_ref().and_then(|f| f.first())) {
                    alg.letter_start(x)
                } else if let Some(&x) = u_fin.last().or(e.as_ref().and_then(|e| e.last())) {
                    alg.letter_end(x)
                } else {
                    return Err(invalid(0, "empty two-sided word needs an anchor"));
                }
            }
        };
        let inv = |xs: &[Letter]| -> Vec<Letter> { xs.iter().rev().map(|l| l.inv()).collect() };
        let left: AnyWord = match e {
            Some(e) => OneSidedWord::new(alg, Some(anchor), inv(&u_fin), inv(&e))?.into(),
            None => {
                let w = Word::new(alg, Some(anchor), inv(&u_fin))?;
                w.into()
            }
        };
        let right: AnyWord = match f {
            Some(f) => OneSidedWord::new(alg, Some(anchor), v_fin, f)?.into(),
            None => Word::new(alg, Some(anchor), v_fin)?.into(),
        };
        Self::new(alg, h, anchor, left, right)
    }

    pub fn anchor(&self) -> VertexId {
        self.anchor
    }

    /// `u`, the word on the left.
    pub fn left(&self) -> &AnyWord {
        &self.left
    }

    /// `v`, the word on the right.
    pub fn right(&self) -> &AnyWord {
        &self.right
    }

    /// The word `v⁻¹.u` at the same anchor.
    pub fn flip(&self) -> TwoSidedWord {
        TwoSidedWord {
            anchor: self.anchor,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Is `u ∈ Ĥ₋₁` and `v ∈ Ĥ₁`?
    pub fn is_oriented(&self, h: &HPartition) -> bool {
        h.side_of_any(&self.left) == Side::Minus
    }

    /// Flips if needed so that `u ∈ Ĥ₋₁` and `v ∈ Ĥ₁`.
    pub fn oriented(&self, h: &HPartition) -> TwoSidedWord {
        if self.is_oriented(h) {
            self.clone()
        } else {
            self.flip()
        }
    }

    /// Letter at position `i` of the bi-infinite reading: `i ≥ 0` indexes
    /// `v`, `i < 0` indexes `u⁻¹`.
    pub fn letter_at(&self, i: i64) -> Option<Letter> {
        if i >= 0 {
            self.right.letter(i as usize)
        } else {
            self.left.letter((-i - 1) as usize).map(Letter::inv)
        }
    }

    fn reach(w: &AnyWord) -> usize {
        match w {
            AnyWord::Finite(w) => w.len(),
            AnyWord::Infinite(w) => w.prefix.len() + 3 * w.period.len(),
        }
    }

    /// A finite window of `u⁻¹v` that covers every junction plus `extra`
    /// periods on each infinite side; returns its left vertex and letters.
    fn window(&self, alg: &StringAlgebra, extra: usize) -> (VertexId, Vec<Letter>) {
        let lspan = Self::reach(&self.left) + extra * self.left.as_infinite().map_or(0, |w| w.period.len());
        let rspan = Self::reach(&self.right) + extra * self.right.as_infinite().map_or(0, |w| w.period.len());
        let letters: Vec<Letter> = (-(lspan as i64)..rspan as i64)
            .filter_map(|i| self.letter_at(i))
            .collect();
        let start = letters.first().map_or(self.anchor, |&l| alg.letter_start(l));
        (start, letters)
    }

    /// True iff the whole word is `^∞D.D^∞`.
    pub fn is_periodic(&self) -> bool {
        self.right_end_raw().0.is_none() && matches!(self.right, AnyWord::Infinite(_)) && matches!(self.left, AnyWord::Infinite(_))
    }

    /// Start index of the periodic tail on the right, extended leftwards as
    /// far as the bi-infinite word stays periodic (`None` if it never
    /// breaks), and the period length.
    fn right_end_raw(&self) -> (Option<i64>, usize) {
        let w = match &self.right {
            AnyWord::Infinite(w) => w,
            AnyWord::Finite(_) => return (Some(0), 0),
        };
        let n = w.period.len();
        let mut s = w.prefix.len() as i64;
        let bound = match &self.left {
            AnyWord::Infinite(u) => (u.prefix.len() + lcm(n, u.period.len()) + n) as i64,
            AnyWord::Finite(u) => u.len() as i64 + 1,
        };
        while s > -bound {
            match self.letter_at(s - 1) {
                Some(l) if Some(l) == self.letter_at(s - 1 + n as i64) => s -= 1,
                _ => return (Some(s), n),
            }
        }
        (None, n)
    }

    fn right_shape(&self) -> EndShape {
        if self.right.as_infinite().is_none() {
            return EndShape::Finite;
        }
        match self.right_end_raw() {
            (None, _) => EndShape::Periodic,
            (Some(s), n) => {
                let d: Vec<Letter> = (s..s + n as i64).map(|i| self.letter_at(i).unwrap()).collect();
                match self.letter_at(s - 1) {
                    None => EndShape::Periodic,
                    Some(l) => match OneSidedShape::from_parts(Some(l), d) {
                        OneSidedShape::Expanding(l, d) => EndShape::Expanding(l, d),
                        OneSidedShape::Contracting(l, d) => EndShape::Contracting(l, d),
                        OneSidedShape::Periodic => EndShape::Periodic,
                    },
                }
            }
        }
    }

    /// Shapes of the (left, right) ends. The left end is classified on the
    /// flipped word.
    pub fn end_shapes(&self) -> (EndShape, EndShape) {
        (self.flip().right_shape(), self.right_shape())
    }

    /// Replaces each infinite side `prefix·D^∞` by `prefix·Dⁿ`; returns the
    /// finite word `u_n⁻¹ v_n` and the index of the anchor node in it.
    pub fn truncate(&self, alg: &StringAlgebra, h: &HPartition, n: usize) -> (Word, usize) {
        let u = self.left.truncate(alg, h, n);
        let v = self.right.truncate(alg, h, n);
        let k = u.len();
        let word = u
            .invert()
            .concat(alg, &v)
            .expect("truncation of a valid two-sided word is valid");
        let word = if word.is_empty() { word.with_sign(Side::Plus) } else { word };
        (word, k)
    }

    pub fn to_text(&self, alg: &StringAlgebra) -> String {
        let left = match &self.left {
            AnyWord::Finite(w) => letters_text(alg, w.invert().letters()),
            AnyWord::Infinite(w) => {
                let e: Vec<Letter> = w.period.iter().rev().map(|l| l.inv()).collect();
                let u: Vec<Letter> = w.prefix.iter().rev().map(|l| l.inv()).collect();
                let mut s = format!("inf^({})", letters_text(alg, &e));
                if !u.is_empty() {
                    s += " ";
                    s += &letters_text(alg, &u);
                }
                s
            }
        };
        let right = match &self.right {
            AnyWord::Finite(w) => letters_text(alg, w.letters()),
            AnyWord::Infinite(w) => {
                let mut s = letters_text(alg, &w.prefix);
                if !s.is_empty() {
                    s += " ";
                }
                s + &format!("({})^inf", letters_text(alg, &w.period))
            }
        };
        format!("{left} . {right}").trim().to_string()
    }
}
