//! Ringel's list of indecomposable pure-injective modules over a domestic
//! string algebra, kept symbolic, and pp-type questions about the
//! distinguished element of a biperiodic word module answered through
//! word comparisons and finite truncations.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::bands::{domestic_bands, Band};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homs::{hom_basis, pointed_string_morphism};
use crate::linalg::Subspace;
use crate::module::{hom_space, pointed_morphism_exists, string_module, string_node_word, FDModule, ModuleKind, PPWordFormula, PointedElement};
use crate::presentation::StringAlgebra;
use crate::words::{
    all_words, classify_one_sided, compare, letters_text, string_representatives, AnyWord, EndShape, HPartition, Letter,
    OneSidedShape, OneSidedWord, Side, TwoSidedWord, Word,
};

/// Shape of an infinite end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Expanding,
    Contracting,
}

impl Shape {
    fn of_end(e: &EndShape) -> Option<Shape> {
        match e {
            EndShape::Expanding(..) => Some(Shape::Expanding),
            EndShape::Contracting(..) => Some(Shape::Contracting),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Shape::Expanding => "expanding",
            Shape::Contracting => "contracting",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingelDescriptor {
    FiniteString(Word),
    OneSided(OneSidedWord, Shape),
    TwoSidedBiperiodic(TwoSidedWord, Shape, Shape),
    Prufer(Band, i64),
    Adic(Band, i64),
    Generic(Band),
}

impl RingelDescriptor {
    pub fn kind(&self) -> &'static str {
        match self {
            RingelDescriptor::FiniteString(_) => "finite_string",
            RingelDescriptor::OneSided(..) => "one_sided",
            RingelDescriptor::TwoSidedBiperiodic(..) => "two_sided_biperiodic",
            RingelDescriptor::Prufer(..) => "prufer",
            RingelDescriptor::Adic(..) => "adic",
            RingelDescriptor::Generic(_) => "generic",
        }
    }

    pub fn to_text(&self, alg: &StringAlgebra) -> String {
        match self {
            RingelDescriptor::FiniteString(w) => format!("finite {}@{}", w.to_text(alg), alg.vertex_name(w.anchor())),
            RingelDescriptor::OneSided(w, s) => format!("one-sided {} [{}]", w.to_text(alg), s.tag()),
            RingelDescriptor::TwoSidedBiperiodic(w, l, r) => {
                format!("two-sided {} [{}, {}]", w.to_text(alg), l.tag(), r.tag())
            }
            RingelDescriptor::Prufer(b, l) => format!("prufer {} lambda={l}", b.to_text(alg)),
            RingelDescriptor::Adic(b, l) => format!("adic {} lambda={l}", b.to_text(alg)),
            RingelDescriptor::Generic(b) => format!("generic {}", b.to_text(alg)),
        }
    }

    pub fn to_json(&self, alg: &StringAlgebra) -> serde_json::Value {
        let mut v = serde_json::json!({ "kind": self.kind() });
        let o = v.as_object_mut().expect("object");
        match self {
            RingelDescriptor::FiniteString(w) => {
                o.insert("word".into(), w.to_text(alg).into());
                o.insert("anchor".into(), alg.vertex_name(w.anchor()).into());
            }
            RingelDescriptor::OneSided(w, s) => {
                o.insert("word".into(), w.to_text(alg).into());
                o.insert("anchor".into(), alg.vertex_name(w.anchor()).into());
                o.insert("shape".into(), s.tag().into());
            }
            RingelDescriptor::TwoSidedBiperiodic(w, l, r) => {
                o.insert("word".into(), w.to_text(alg).into());
                o.insert("anchor".into(), alg.vertex_name(w.anchor()).into());
                o.insert("left_shape".into(), l.tag().into());
                o.insert("right_shape".into(), r.tag().into());
            }
            RingelDescriptor::Prufer(b, l) | RingelDescriptor::Adic(b, l) => {
                o.insert("band".into(), b.to_text(alg).into());
                o.insert("lambda".into(), (*l).into());
            }
            RingelDescriptor::Generic(b) => {
                o.insert("band".into(), b.to_text(alg).into());
            }
        }
        v
    }
}

/// Band parameters used for the Prüfer and adic entries.
pub fn lambda_samples<F: Field>() -> Vec<i64> {
    [1, 2].into_iter().filter(|&x| !F::from_i64(x).is_zero()).collect()
}

fn inverse_letters(xs: &[Letter]) -> Vec<Letter> {
    xs.iter().rev().map(|l| l.inv()).collect()
}

fn rotations(xs: &[Letter]) -> Vec<Vec<Letter>> {
    (0..xs.len())
        .map(|k| {
            let mut r = xs.to_vec();
            r.rotate_left(k);
            r
        })
        .collect()
}

/// Normal form of `^∞X · m · Y^∞` (sequences read left to right), anchored
/// at the last socle node at or before the point where the left periodic
/// part ends.
fn biperiodic_at(alg: &StringAlgebra, h: &HPartition, x: &[Letter], m: &[Letter], y: &[Letter]) -> Result<TwoSidedWord> {
    let k = 3 + alg.max_relation_len() + m.len();
    let mut s = Vec::new();
    for _ in 0..k {
        s.extend_from_slice(x);
    }
    s.extend_from_slice(m);
    for _ in 0..k {
        s.extend_from_slice(y);
    }
    alg.check_walk(alg.letter_start(s[0]), &s)
        .map_err(|(p, r)| Error::InvalidWord { position: p, reason: r })?;
    let (nx, ny) = (x.len(), y.len());
    let a = (nx..s.len()).find(|&j| s[j] != s[j - nx]);
    let b = (0..s.len() - ny).rev().find(|&j| s[j] != s[j + ny]).map(|j| j + 1);
    let (a, b) = match (a, b) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::PeriodicWord),
    };
    let p0 = a.min(b);
    let p = (1..=p0)
        .rev()
        .find(|&p| s[p - 1].inverse && s[p].is_direct())
        .ok_or_else(|| Error::Consistency("no socle node in the left period".into()))?;
    let anchor = alg.letter_end(s[p - 1]);
    let bb = b.max(p);
    let right = OneSidedWord::new(alg, Some(anchor), s[p..bb].to_vec(), s[bb..bb + ny].to_vec())?;
    let left = OneSidedWord::new(alg, Some(anchor), Vec::new(), inverse_letters(&s[p - nx..p]))?;
    TwoSidedWord::new(alg, h, anchor, left.into(), right.into())
}

/// The `(X, m, Y)` data of a two-sided word with two infinite sides.
fn biperiodic_parts(w: &TwoSidedWord) -> Result<(Vec<Letter>, Vec<Letter>, Vec<Letter>)> {
    match (w.left(), w.right()) {
        (AnyWord::Infinite(u), AnyWord::Infinite(v)) => {
            let x = inverse_letters(u.period());
            let mut m = inverse_letters(u.prefix());
            m.extend_from_slice(v.prefix());
            Ok((x, m, v.period().to_vec()))
        }
        _ => Err(Error::Precondition("both sides must be infinite".into())),
    }
}

/// Canonical representative of a biperiodic word up to shift and inversion.
pub fn canonical_biperiodic(alg: &StringAlgebra, h: &HPartition, w: &TwoSidedWord) -> Result<TwoSidedWord> {
    let (x, m, y) = biperiodic_parts(w)?;
    let a = biperiodic_at(alg, h, &x, &m, &y)?;
    let b = biperiodic_at(alg, h, &inverse_letters(&y), &inverse_letters(&m), &inverse_letters(&x))?;
    let pick = if a.to_text(alg) <= b.to_text(alg) { a } else { b };
    Ok(pick.oriented(h))
}

/// Shapes of both ends of a biperiodic word.
pub fn end_shapes(w: &TwoSidedWord) -> Result<(Shape, Shape)> {
    if w.is_periodic() {
        return Err(Error::PeriodicWord);
    }
    let (l, r) = w.end_shapes();
    match (Shape::of_end(&l), Shape::of_end(&r)) {
        (Some(l), Some(r)) => Ok((l, r)),
        _ => Err(Error::Precondition("both ends must be infinite".into())),
    }
}

/// `prefix·Dⁿ` on each infinite side.
pub fn truncate(alg: &StringAlgebra, h: &HPartition, w: &TwoSidedWord, n: usize) -> (Word, usize) {
    w.truncate(alg, h, n)
}

pub fn enumerate_ringel_list<F: Field>(
    alg: &StringAlgebra,
    h: &HPartition,
    prefix_bound: usize,
    middle_bound: usize,
) -> Result<Vec<RingelDescriptor>> {
    let bands = domestic_bands(alg)?;
    let mut out: Vec<RingelDescriptor> = string_representatives(alg, prefix_bound)
        .into_iter()
        .map(RingelDescriptor::FiniteString)
        .collect();

    let periods: Vec<Vec<Letter>> = bands.iter().flat_map(|b| rotations(b.letters())).collect();
    let mut prefixes: Vec<Vec<Letter>> = vec![Vec::new()];
    prefixes.extend(all_words(alg, prefix_bound).into_iter().map(|w| w.letters().to_vec()));

    let mut one_sided = BTreeSet::new();
    for per in &periods {
        for pre in &prefixes {
            if let Ok(w) = OneSidedWord::new(alg, None, pre.clone(), per.clone()) {
                if !w.prefix().is_empty() && w.prefix().len() <= prefix_bound {
                    one_sided.insert(w);
                }
            }
        }
    }
    for w in one_sided {
        let shape = match classify_one_sided(&w) {
            OneSidedShape::Expanding(..) => Shape::Expanding,
            OneSidedShape::Contracting(..) => Shape::Contracting,
            OneSidedShape::Periodic => continue,
        };
        out.push(RingelDescriptor::OneSided(w, shape));
    }

    let mut middles: Vec<Vec<Letter>> = vec![Vec::new()];
    middles.extend(all_words(alg, middle_bound).into_iter().map(|w| w.letters().to_vec()));
    let mut seen = BTreeSet::new();
    let mut two_sided = Vec::new();
    for x in &periods {
        for y in &periods {
            for m in &middles {
                let w = match biperiodic_at(alg, h, x, m, y) {
                    Ok(w) => w,
                    Err(_) => continue,
                };
                let c = canonical_biperiodic(alg, h, &w)?;
                let (_, cm, _) = biperiodic_parts(&c)?;
                if cm.len() > middle_bound || !seen.insert(c.to_text(alg)) {
                    continue;
                }
                let (l, r) = end_shapes(&c)?;
                two_sided.push(RingelDescriptor::TwoSidedBiperiodic(c, l, r));
            }
        }
    }
    out.extend(two_sided);

    for b in &bands {
        for l in lambda_samples::<F>() {
            out.push(RingelDescriptor::Prufer(b.clone(), l));
            out.push(RingelDescriptor::Adic(b.clone(), l));
        }
        out.push(RingelDescriptor::Generic(b.clone()));
    }
    Ok(out)
}

/// Whether the distinguished element lies in a pp formula's solution set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    InType,
    NotInType,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::InType
        } else {
            Verdict::NotInType
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::InType
    }
}

fn check_side(alg: &StringAlgebra, h: &HPartition, w: &Word, side: Side, anchor: crate::presentation::VertexId) -> Result<()> {
    if w.anchor() != anchor {
        return Err(Error::AnchorMismatch {
            expected: alg.vertex_name(anchor).to_string(),
            found: alg.vertex_name(w.anchor()).to_string(),
        });
    }
    if h.side_of_word(w) != side {
        return Err(Error::ChainMismatch);
    }
    Ok(())
}

/// `(C1⁻¹.D1)` holds at the element with word `w = u⁻¹.v` iff `C1 ≤ u` and
/// `D1 ≤ v`.
pub fn pp_member(alg: &StringAlgebra, h: &HPartition, w: &TwoSidedWord, c1: &Word, d1: &Word) -> Result<Verdict> {
    let w = w.oriented(h);
    check_side(alg, h, c1, Side::Minus, w.anchor())?;
    check_side(alg, h, d1, Side::Plus, w.anchor())?;
    let c_ok = compare(alg, h, &c1.clone().into(), w.left())?.is_le();
    let d_ok = compare(alg, h, &d1.clone().into(), w.right())?.is_le();
    Ok(Verdict::from_bool(c_ok && d_ok))
}

/// The pair `φ = (C⁻¹.D)` and `ψ = (E′.D) + (C⁻¹.F′)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZieglerOpen {
    pub c: Word,
    pub d: Word,
    /// Left band `E`, with `u⁻¹ = ^∞E u′`.
    pub e: Vec<Letter>,
    /// Right band `F`, with `v = v′F^∞`.
    pub f: Vec<Letter>,
    /// `C` without its last letter.
    pub c_short: Word,
    /// `D` without its last letter.
    pub d_short: Word,
}

impl ZieglerOpen {
    pub fn phi(&self) -> PPWordFormula {
        PPWordFormula::Both(self.c.clone(), self.d.clone())
    }

    pub fn psi(&self) -> [PPWordFormula; 2] {
        [
            PPWordFormula::Both(self.c_short.clone(), self.d.clone()),
            PPWordFormula::Both(self.c.clone(), self.d_short.clone()),
        ]
    }

    /// The string `C⁻¹D` and the index of the node between `C⁻¹` and `D`.
    pub fn free_word(&self, alg: &StringAlgebra) -> (Word, usize) {
        let mut letters = self.c.invert().letters().to_vec();
        letters.extend_from_slice(self.d.letters());
        let w = if letters.is_empty() {
            Word::empty(self.c.anchor(), Side::Plus)
        } else {
            Word::new(alg, None, letters).expect("C⁻¹D is a factor of a valid word")
        };
        (w, self.c.len())
    }

    pub fn to_json(&self, alg: &StringAlgebra) -> serde_json::Value {
        serde_json::json!({
            "C": self.c.to_text(alg),
            "D": self.d.to_text(alg),
            "E": letters_text(alg, &self.e),
            "F": letters_text(alg, &self.f),
            "E_prime": self.c_short.to_text(alg),
            "F_prime": self.d_short.to_text(alg),
            "phi": format!("({}^-1 . {})", self.c.to_text(alg), self.d.to_text(alg)),
            "psi": format!(
                "({}^-1 . {}) + ({}^-1 . {})",
                self.c_short.to_text(alg),
                self.d.to_text(alg),
                self.c.to_text(alg),
                self.d_short.to_text(alg)
            ),
        })
    }
}

/// Shortest prefix of `w` that ends with a full copy of the period, is
/// followed by a direct letter and ends with an inverse letter.
fn band_cut(w: &OneSidedWord) -> usize {
    let (p, q) = (w.prefix().len(), w.period().len());
    (0..q)
        .map(|k| p + k)
        .find(|&s| w.letter(s).is_direct() && w.letter(s + q - 1).inverse)
        .map(|s| s + q)
        .expect("a band has direct and inverse letters")
}

pub fn ziegler_basic_open(alg: &StringAlgebra, h: &HPartition, w: &TwoSidedWord) -> Result<ZieglerOpen> {
    if w.is_periodic() {
        return Err(Error::PeriodicWord);
    }
    let w = w.oriented(h);
    let (u, v) = match (w.left(), w.right()) {
        (AnyWord::Infinite(u), AnyWord::Infinite(v)) => (u, v),
        _ => return Err(Error::Precondition("both sides must be infinite".into())),
    };
    let lc = band_cut(u);
    let ld = band_cut(v);
    let c = u.take(alg, lc);
    let d = v.take(alg, ld);
    let e = inverse_letters(&c.letters()[lc - u.period().len()..]);
    let f = d.letters()[ld - v.period().len()..].to_vec();
    if Band::new(alg, e.clone())?.is_rotation_of(&f) {
        return Err(Error::Consistency("both ends carry the same band".into()));
    }
    Ok(ZieglerOpen {
        c_short: c.prefix(alg, h, lc - 1),
        d_short: d.prefix(alg, h, ld - 1),
        c,
        d,
        e,
        f,
    })
}

/// A finite piece of `w` around its anchor: each infinite side is cut after
/// at least `n` periods, just before a direct letter, so the anchor's word
/// in the piece lies below `w` on both sides.
pub fn oracle_truncation(alg: &StringAlgebra, w: &TwoSidedWord, n: usize) -> (Word, usize) {
    let cut = |x: &AnyWord| -> usize {
        match x {
            AnyWord::Finite(x) => x.len(),
            AnyWord::Infinite(x) => {
                let start = x.prefix().len() + n * x.period().len();
                (start..).find(|&i| x.letter(i).is_direct()).expect("periods contain direct letters")
            }
        }
    };
    let (lu, lv) = (cut(w.left()), cut(w.right()));
    let mut letters: Vec<Letter> = (0..lu).rev().map(|i| w.left().letter(i).expect("within cut").inv()).collect();
    letters.extend((0..lv).map(|i| w.right().letter(i).expect("within cut")));
    let word = if letters.is_empty() {
        Word::empty(w.anchor(), Side::Plus)
    } else {
        Word::new(alg, None, letters).expect("factor of a valid word")
    };
    (word, lu)
}

/// First truncation level for the oracle.
pub fn oracle_start_level(w: &TwoSidedWord) -> usize {
    let sides = [w.left(), w.right()];
    let middle: usize = sides
        .iter()
        .map(|s| match s {
            AnyWord::Finite(x) => x.len(),
            AnyWord::Infinite(x) => x.prefix().len(),
        })
        .sum();
    let periods: Vec<usize> = sides.iter().filter_map(|s| s.as_infinite().map(|x| x.period().len())).collect();
    match (periods.iter().max(), periods.iter().min()) {
        (Some(&mx), Some(&mn)) => (middle + mx).div_ceil(mn) + 1,
        _ => 1,
    }
}

/// Verdict of the truncation oracle with the levels it looked at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub verdict: Verdict,
    pub levels: Vec<(usize, bool)>,
    /// Three consecutive levels agreed.
    pub stable: bool,
}

const ORACLE_MAX_LEVELS: usize = 8;

/// Evaluates `test` at the truncation levels until three consecutive levels
/// agree.
pub fn stabilize(
    alg: &StringAlgebra,
    w: &TwoSidedWord,
    mut test: impl FnMut(&Word, usize) -> Result<bool>,
) -> Result<OracleVerdict> {
    let n0 = oracle_start_level(w);
    let mut levels = Vec::new();
    for n in n0..n0 + ORACLE_MAX_LEVELS {
        let (word, idx) = oracle_truncation(alg, w, n);
        let r = test(&word, idx)?;
        levels.push((n, r));
        let k = levels.len();
        if k >= 3 && levels[k - 3..].iter().all(|&(_, x)| x == r) {
            return Ok(OracleVerdict {
                verdict: Verdict::from_bool(r),
                levels,
                stable: true,
            });
        }
        if w.left().as_infinite().is_none() && w.right().as_infinite().is_none() {
            break;
        }
    }
    let last = levels.last().map(|&(_, r)| r).unwrap_or(false);
    Ok(OracleVerdict {
        verdict: Verdict::from_bool(last),
        levels,
        stable: false,
    })
}

/// Truncation oracle for a sum of word formulas `Σ (Cᵢ⁻¹.Dᵢ)`: membership
/// of the anchor node of each truncation in the sum of the solution sets.
pub fn pp_oracle<F: Field>(alg: &Arc<StringAlgebra>, h: &HPartition, w: &TwoSidedWord, formulas: &[PPWordFormula]) -> Result<OracleVerdict> {
    let w = w.oriented(h);
    stabilize(alg, &w, |word, idx| {
        let m: FDModule<F> = string_module(alg, word);
        let x = m.basis_element(idx);
        let mut total = Subspace::zero(x.coords.len());
        for f in formulas {
            total = total.sum(&m.pp_formula(h, f)?);
        }
        Ok(total.contains(&x.coords))
    })
}

/// `{f(l) : f ∈ Hom(L, M)}`, the solution set in `M` of the formula freely
/// realized by `(L, l)`.
pub fn realized_subspace<F: Field>(big_l: &FDModule<F>, l: &PointedElement<F>, m: &FDModule<F>) -> Result<Subspace<F>> {
    let ambient = m.dims()[l.vertex.0];
    let images: Vec<Vec<F>> = match big_l.kind() {
        ModuleKind::String(_) if matches!(m.kind(), ModuleKind::String(_)) => {
            hom_basis(big_l, m)?.iter().map(|g| g.morphism.apply(l).coords).collect()
        }
        _ => hom_space(big_l, m)?.iter().map(|f| f.apply(l).coords).collect(),
    };
    Ok(Subspace::span(ambient, images))
}

/// Truncation oracle for `χ + Σ extra`, with `χ` the formula freely
/// realized by `(L, l)`.
pub fn morphism_oracle<F: Field>(
    alg: &Arc<StringAlgebra>,
    h: &HPartition,
    w: &TwoSidedWord,
    big_l: &FDModule<F>,
    l: &PointedElement<F>,
    extra: &[PPWordFormula],
) -> Result<OracleVerdict> {
    let w = w.oriented(h);
    stabilize(alg, &w, |word, idx| {
        let m: FDModule<F> = string_module(alg, word);
        let x = m.basis_element(idx);
        if x.vertex != l.vertex {
            return Err(Error::Precondition("pointed element is not at the anchor vertex".into()));
        }
        let mut total = realized_subspace(big_l, l, &m)?;
        for f in extra {
            total = total.sum(&m.pp_formula(h, f)?);
        }
        Ok(total.contains(&x.coords))
    })
}

/// Outcome of the classifier with the rule that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub reason: String,
}

/// The pointed module `(M(C⁻¹D), n)` freely realizing `φ`.
pub fn phi_realization<F: Field>(alg: &Arc<StringAlgebra>, z: &ZieglerOpen) -> (FDModule<F>, PointedElement<F>) {
    let (word, idx) = z.free_word(alg);
    let m: FDModule<F> = string_module(alg, &word);
    let n = m.basis_element(idx);
    (m, n)
}

/// Decides whether `χ + ψ` belongs to the pp-type of the distinguished
/// element of `M_w`, where `χ` is the formula freely realized by `(L, l)`,
/// assumed to lie below `φ`.
///
/// Band modules give `NotInType`. For a string module the basis components
/// of `l` whose words do not extend `C` on the left and `D` on the right
/// satisfy `ψ` and are dropped; `χ` is in the type iff some remaining
/// component has word `G⁻¹.H` with `G ≤ u` and `H ≤ v`.
pub fn classify_formula<F: Field>(
    alg: &Arc<StringAlgebra>,
    h: &HPartition,
    w: &TwoSidedWord,
    big_l: &FDModule<F>,
    l: &PointedElement<F>,
) -> Result<Classification> {
    if !Arc::ptr_eq(alg, big_l.algebra_arc()) && **alg != *big_l.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let w = w.oriented(h);
    let z = ziegler_basic_open(alg, h, &w)?;
    if l.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (free, n) = phi_realization::<F>(alg, &z);
    if n.vertex != l.vertex {
        return Err(Error::Precondition("pointed element is not at the anchor vertex".into()));
    }
    let below = match big_l.kind() {
        ModuleKind::String(_) => pointed_string_morphism(&free, &n, big_l, l)?,
        ModuleKind::Band { .. } => pointed_morphism_exists(&free, &n, big_l, l)?,
        _ => return Err(Error::Precondition("expected a string or band module".into())),
    };
    if below.is_none() {
        return Err(Error::Precondition("the pointed module does not lie below phi".into()));
    }
    let x = match big_l.kind() {
        ModuleKind::Band { .. } => {
            return Ok(Classification {
                verdict: Verdict::NotInType,
                reason: "band module: C^-1 D is shortened, psi holds".into(),
            })
        }
        ModuleKind::String(x) => x,
        _ => unreachable!("checked above"),
    };
    let (u, v) = (w.left(), w.right());
    let mut kept = 0;
    for (i, node) in big_l.nodes().iter().enumerate() {
        if node.vertex != l.vertex || l.coords[node.offset].is_zero() {
            continue;
        }
        let nw = string_node_word(alg, h, x, i);
        let (g, hh) = match (nw.left(), nw.right()) {
            (AnyWord::Finite(g), AnyWord::Finite(hh)) => (g, hh),
            _ => unreachable!("string modules have finite words"),
        };
        if !(g.letters().starts_with(z.c.letters()) && hh.letters().starts_with(z.d.letters())) {
            continue;
        }
        kept += 1;
        let g_ok = compare(alg, h, &g.clone().into(), u)?.is_le();
        let h_ok = compare(alg, h, &hh.clone().into(), v)?.is_le();
        if g_ok && h_ok {
            return Ok(Classification {
                verdict: Verdict::InType,
                reason: format!("component x{i} has word {} below w", nw.to_text(alg)),
            });
        }
    }
    Ok(Classification {
        verdict: Verdict::NotInType,
        reason: if kept == 0 {
            "every component satisfies psi".into()
        } else {
            format!("{kept} component(s) extend C and D but lie above w")
        },
    })
}

/// DOT drawing of a string module: direct letters go down to the left,
/// inverse letters down to the right.
pub fn string_dot(alg: &StringAlgebra, w: &Word, mark: Option<usize>) -> String {
    let mut s = String::from("digraph string {\n  node [shape=circle, label=\"\", width=0.15];\n");
    for i in 0..=w.len() {
        let v = if i == 0 { w.anchor() } else { alg.letter_end(w.letters()[i - 1]) };
        let extra = if mark == Some(i) { ", style=filled, fillcolor=black" } else { "" };
        s += &format!("  x{i} [xlabel=\"{}\"{extra}];\n", alg.vertex_name(v));
    }
    for (i, &l) in w.letters().iter().enumerate() {
        let name = &alg.arrow(l.arrow).name;
        if l.inverse {
            s += &format!("  x{} -> x{} [label=\"{name}\"];\n", i, i + 1);
        } else {
            s += &format!("  x{} -> x{} [label=\"{name}\"];\n", i + 1, i);
        }
    }
    s + "}\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::Q;

    fn r1() -> (Arc<StringAlgebra>, HPartition, TwoSidedWord) {
        let a = Arc::new(StringAlgebra::parse(corpus::R1).unwrap());
        let h = HPartition::from_assignment(&a, &corpus::R1_B_FIRST).unwrap();
        let w = TwoSidedWord::parse(&a, &h, None, corpus::R1_BIPERIODIC).unwrap();
        (a, h, w)
    }

    #[test]
    fn shapes_and_canonical_form() {
        let (a, h, w) = r1();
        assert_eq!(end_shapes(&w).unwrap(), (Shape::Contracting, Shape::Expanding));
        assert_eq!(end_shapes(&w.flip()).unwrap(), (Shape::Expanding, Shape::Contracting));
        let c = canonical_biperiodic(&a, &h, &w).unwrap();
        assert_eq!(c, w);
        assert_eq!(canonical_biperiodic(&a, &h, &w.flip()).unwrap(), w);
    }

    #[test]
    fn list_contains_expected_entries() {
        let (a, h, w) = r1();
        let list = enumerate_ringel_list::<Q>(&a, &h, 2, 1).unwrap();
        let one = OneSidedWord::parse(&a, None, "b | (a b^-1)^inf").unwrap();
        assert!(list.contains(&RingelDescriptor::OneSided(one, Shape::Expanding)));
        assert!(list.contains(&RingelDescriptor::TwoSidedBiperiodic(w, Shape::Contracting, Shape::Expanding)));
        let generic = list.iter().filter(|d| matches!(d, RingelDescriptor::Generic(_))).count();
        assert_eq!(generic, 2);
        for d in &list {
            if let RingelDescriptor::TwoSidedBiperiodic(x, _, _) = d {
                assert_eq!(&canonical_biperiodic(&a, &h, x).unwrap(), x);
            }
        }
    }

    #[test]
    fn non_domestic_rejected() {
        let a = StringAlgebra::parse(corpus::G23).unwrap();
        let h = HPartition::lexicographic(&a);
        assert!(matches!(enumerate_ringel_list::<Q>(&a, &h, 2, 1), Err(Error::NonDomestic { .. })));
    }

    #[test]
    fn open_pair() {
        let (a, h, w) = r1();
        let z = ziegler_basic_open(&a, &h, &w).unwrap();
        assert_eq!(z.c.to_text(&a), "a b^-1");
        assert_eq!(z.d.to_text(&a), "b a b^-1");
        assert_eq!(z.c_short.to_text(&a), "a");
        assert_eq!(z.d_short.to_text(&a), "b a");
        assert_eq!(pp_member(&a, &h, &w, &z.c, &z.d).unwrap(), Verdict::InType);
        assert_eq!(pp_member(&a, &h, &w, &z.c_short, &z.d).unwrap(), Verdict::NotInType);
        assert_eq!(pp_member(&a, &h, &w, &z.c, &z.d_short).unwrap(), Verdict::NotInType);
        assert!(pp_oracle::<Q>(&a, &h, &w, &[z.phi()]).unwrap().verdict.holds());
        assert!(!pp_oracle::<Q>(&a, &h, &w, &z.psi()).unwrap().verdict.holds());
    }

    #[test]
    fn truncations() {
        let (a, h, w) = r1();
        let (t, k) = truncate(&a, &h, &w, 2);
        assert_eq!(t.to_text(&a), "b a^-1 b a^-1 b a b^-1 a b^-1");
        assert_eq!(k, 4);
        let (t0, _) = truncate(&a, &h, &w, 0);
        assert_eq!(t0.to_text(&a), "b");
        let (o, k) = oracle_truncation(&a, &w, 1);
        assert_eq!(o.to_text(&a), "b a^-1 b a b^-1");
        assert_eq!(k, 2);
        assert!(string_dot(&a, &o, Some(k)).contains("x2 [xlabel=\"s\", style=filled"));
    }
}
