//! Bands, domesticity and the bridge quiver.
//!
//! Validity of a word is decided by windows of `k + 1` consecutive letters,
//! where `k = max(1, longest relation − 1)`. The window automaton has the
//! valid words of length `k` as states and an edge for each valid word of
//! length `k + 1`; its cycles are exactly the cyclic words that can be
//! repeated indefinitely. For `k = 1` it is the letter automaton.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::StringAlgebra;
use crate::words::{letters_text, Letter};

/// Letters as nodes, with an edge `l → l′` whenever `l l′` is a valid word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterAutomaton {
    pub nodes: Vec<Letter>,
    pub edges: Vec<(Letter, Letter)>,
}

pub fn letter_automaton(alg: &StringAlgebra) -> LetterAutomaton {
    let nodes = alg.letters();
    let mut edges = Vec::new();
    for &l in &nodes {
        for &m in &nodes {
            if alg.is_walk(alg.letter_start(l), &[l, m]) {
                edges.push((l, m));
            }
        }
    }
    LetterAutomaton { nodes, edges }
}

/// The window automaton used for cycle detection.
struct WindowAutomaton {
    states: Vec<Vec<Letter>>,
    succ: Vec<Vec<usize>>,
}

impl WindowAutomaton {
    fn new(alg: &StringAlgebra) -> Self {
        let k = alg.max_relation_len().saturating_sub(1).max(1);
        let letters = alg.letters();
        let mut states: Vec<Vec<Letter>> = letters.iter().map(|&l| vec![l]).collect();
        for _ in 1..k {
            let mut next = Vec::new();
            for s in &states {
                let at = alg.letter_end(*s.last().unwrap());
                for &l in &letters {
                    if alg.extends(at, s, l) {
                        let mut t = s.clone();
                        t.push(l);
                        next.push(t);
                    }
                }
            }
            states = next;
        }
        let index: HashMap<Vec<Letter>, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let succ = states
            .iter()
            .map(|s| {
                let at = alg.letter_end(*s.last().unwrap());
                letters
                    .iter()
                    .filter(|&&l| alg.extends(at, s, l))
                    .map(|&l| {
                        let mut t = s[1..].to_vec();
                        t.push(l);
                        index[&t]
                    })
                    .collect()
            })
            .collect();
        WindowAutomaton { states, succ }
    }

    /// Strongly connected components (Kosaraju, iterative).
    fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.states.len();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some((v, i)) = stack.pop() {
                if i < self.succ[v].len() {
                    stack.push((v, i + 1));
                    let w = self.succ[v][i];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(v);
                }
            }
        }
        let mut pred = vec![Vec::new(); n];
        for v in 0..n {
            for &w in &self.succ[v] {
                pred[w].push(v);
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for &root in order.iter().rev() {
            if comp[root] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![root];
            comp[root] = c;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &w in &pred[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Components that contain a cycle.
    fn cyclic_sccs(&self) -> Vec<Vec<usize>> {
        self.sccs()
            .into_iter()
            .filter(|c| c.len() > 1 || self.succ[c[0]].contains(&c[0]))
            .collect()
    }

    fn internal_edges(&self, comp: &[usize]) -> usize {
        let set: BTreeSet<usize> = comp.iter().copied().collect();
        comp.iter()
            .map(|&v| self.succ[v].iter().filter(|w| set.contains(w)).count())
            .sum()
    }

    /// Letters read along the unique cycle of a simple-cycle component.
    fn cycle_letters(&self, comp: &[usize]) -> Vec<Letter> {
        let set: BTreeSet<usize> = comp.iter().copied().collect();
        let start = comp[0];
        let mut v = start;
        let mut letters = Vec::new();
        loop {
            let w = *self.succ[v].iter().find(|w| set.contains(w)).unwrap();
            letters.push(*self.states[w].last().unwrap());
            v = w;
            if v == start {
                break;
            }
        }
        letters
    }

    /// Shortest path `from → … → to` inside `set`, as state indices after
    /// `from`.
    fn path_within(&self, set: &BTreeSet<usize>, from: usize, to: usize) -> Vec<usize> {
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut found = from == to;
        while let Some(v) = queue.pop_front() {
            if found {
                break;
            }
            for &w in &self.succ[v] {
                if set.contains(&w) && !prev.contains_key(&w) && w != from {
                    prev.insert(w, v);
                    if w == to {
                        found = true;
                        break;
                    }
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![to];
        let mut v = to;
        while let Some(&p) = prev.get(&v) {
            if p == from {
                break;
            }
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    }
}

fn key_seq<'a>(alg: &'a StringAlgebra, w: &[Letter]) -> Vec<(&'a str, bool)> {
    w.iter().map(|&l| alg.letter_key(l)).collect()
}

/// A primitive cyclic word containing direct and inverse letters, stored as
/// the least rotation (by letter order) of the form `α … β⁻¹`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Band {
    letters: Vec<Letter>,
}

impl Band {
    /// Validates and normalizes a cyclic word given by any rotation.
    pub fn new(alg: &StringAlgebra, letters: Vec<Letter>) -> Result<Band> {
        let bad = |m: &str| Err(Error::InvalidBand(format!("{}: {m}", letters_text(alg, &letters))));
        if letters.is_empty() {
            return bad("empty");
        }
        if !letters.iter().any(|l| l.inverse) || !letters.iter().any(|l| l.is_direct()) {
            return bad("needs both direct and inverse letters");
        }
        if !alg.is_cyclic_walk(&letters) {
            return bad("square is not a valid word");
        }
        let n = letters.len();
        if (1..n).any(|d| n % d == 0 && (d..n).all(|i| letters[i] == letters[i - d])) {
            return bad("not primitive");
        }
        let best = Self::socle_rotations(&letters)
            .into_iter()
            .min_by(|a, b| key_seq(alg, a).cmp(&key_seq(alg, b)))
            .expect("a cyclic word with both letter kinds has a direct-after-inverse position");
        Ok(Band { letters: best })
    }

    /// Rotations that start with a direct letter and end with an inverse one.
    fn socle_rotations(letters: &[Letter]) -> Vec<Vec<Letter>> {
        let n = letters.len();
        (0..n)
            .filter(|&i| letters[i].is_direct() && letters[(i + n - 1) % n].inverse)
            .map(|i| {
                let mut r = letters.to_vec();
                r.rotate_left(i);
                r
            })
            .collect()
    }

    pub fn parse(alg: &StringAlgebra, text: &str) -> Result<Band> {
        let letters = text
            .split_whitespace()
            .map(|t| crate::words::parse_letter(alg, t))
            .collect::<Result<Vec<_>>>()?;
        Band::new(alg, letters)
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

    pub fn inverse(&self, alg: &StringAlgebra) -> Band {
        let inv: Vec<Letter> = self.letters.iter().rev().map(|l| l.inv()).collect();
        Band::new(alg, inv).expect("inverse of a band is a band")
    }

    /// Is `letters` some rotation of this band?
    pub fn is_rotation_of(&self, letters: &[Letter]) -> bool {
        let n = self.letters.len();
        letters.len() == n && (0..n).any(|i| (0..n).all(|j| letters[j] == self.letters[(i + j) % n]))
    }

    /// All rotations of the form `α … β⁻¹`.
    pub fn socle_forms(&self) -> Vec<Vec<Letter>> {
        Self::socle_rotations(&self.letters)
    }

    pub fn to_text(&self, alg: &StringAlgebra) -> String {
        letters_text(alg, &self.letters)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandSet {
    /// Sorted by letter order.
    pub bands: Vec<Band>,
    /// Set when longer bands exist (including every non-domestic algebra).
    pub truncated: bool,
}

fn sort_bands(alg: &StringAlgebra, bands: &mut [Band]) {
    bands.sort_by(|a, b| (a.len(), key_seq(alg, &a.letters)).cmp(&(b.len(), key_seq(alg, &b.letters))));
}

/// All bands of length at most `max_len`, by depth-first search over valid
/// words that start direct and end inverse.
pub fn enumerate_bands(alg: &StringAlgebra, max_len: usize) -> BandSet {
    let mut found: BTreeSet<Band> = BTreeSet::new();
    let letters = alg.letters();
    let mut stack: Vec<Vec<Letter>> = letters.iter().filter(|l| l.is_direct()).map(|&l| vec![l]).collect();
    while let Some(w) = stack.pop() {
        let last = *w.last().unwrap();
        if last.inverse && alg.is_cyclic_walk(&w) {
            if let Ok(b) = Band::new(alg, w.clone()) {
                if b.letters == w {
                    found.insert(b);
                }
            }
        }
        if w.len() < max_len {
            let at = alg.letter_end(last);
            for &l in &letters {
                if alg.extends(at, &w, l) {
                    let mut next = w.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
    }
    let truncated = match is_domestic(alg) {
        Domesticity::Domestic { longest_band, .. } => longest_band > max_len,
        Domesticity::NonDomestic { .. } => true,
    };
    let mut bands: Vec<Band> = found.into_iter().collect();
    sort_bands(alg, &mut bands);
    BandSet { bands, truncated }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domesticity {
    /// `n` bands up to rotation and inversion.
    Domestic { n: usize, bands: Vec<Band>, longest_band: usize },
    /// Two distinct cycles through a common window of letters.
    NonDomestic { shared: Vec<Letter>, cycles: [Vec<Letter>; 2] },
}

impl Domesticity {
    pub fn is_domestic(&self) -> bool {
        matches!(self, Domesticity::Domestic { .. })
    }

    pub fn describe(&self, alg: &StringAlgebra) -> String {
        match self {
            Domesticity::Domestic { n, .. } => format!("Domestic({n})"),
            Domesticity::NonDomestic { cycles, .. } => format!(
                "NonDomestic(cycles: [{}], [{}])",
                letters_text(alg, &cycles[0]),
                letters_text(alg, &cycles[1])
            ),
        }
    }
}

/// Domestic iff every strongly connected component of the window automaton
/// that contains a cycle is a single simple cycle.
pub fn is_domestic(alg: &StringAlgebra) -> Domesticity {
    let aut = WindowAutomaton::new(alg);
    let mut bands = Vec::new();
    for comp in aut.cyclic_sccs() {
        if aut.internal_edges(&comp) > comp.len() {
            let set: BTreeSet<usize> = comp.iter().copied().collect();
            let hub = *comp
                .iter()
                .find(|&&v| aut.succ[v].iter().filter(|w| set.contains(w)).count() > 1)
                .expect("a component with extra edges has a branching state");
            let outs: Vec<usize> = aut.succ[hub].iter().copied().filter(|w| set.contains(w)).take(2).collect();
            let cycles = [outs[0], outs[1]].map(|first| {
                let mut states = vec![first];
                if first != hub {
                    states.extend(aut.path_within(&set, first, hub));
                }
                states.iter().map(|&s| *aut.states[s].last().unwrap()).collect::<Vec<Letter>>()
            });
            return Domesticity::NonDomestic {
                shared: aut.states[hub].clone(),
                cycles,
            };
        }
        let letters = aut.cycle_letters(&comp);
        bands.push(Band::new(alg, letters).expect("automaton cycles are bands"));
    }
    sort_bands(alg, &mut bands);
    let longest_band = bands.iter().map(Band::len).max().unwrap_or(0);
    Domesticity::Domestic {
        n: bands.len() / 2,
        bands,
        longest_band,
    }
}

/// All bands of a domestic algebra, or an error.
pub fn domestic_bands(alg: &StringAlgebra) -> Result<Vec<Band>> {
    match is_domestic(alg) {
        Domesticity::Domestic { bands, .. } => Ok(bands),
        Domesticity::NonDomestic { .. } => Err(Error::NonDomestic),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub lower: usize,
    pub upper: usize,
    /// A shortest `u` with `lower · u · upper` a valid word.
    pub witness: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeQuiver {
    pub bands: Vec<Band>,
    /// `leq[i][j]` iff `bands[i] ≼ bands[j]`.
    pub leq: Vec<Vec<bool>>,
    pub covers: Vec<Cover>,
    /// Length bound used for the witness search.
    pub bound: usize,
    /// Whether doubling the bound leaves the covers unchanged.
    pub stabilized: bool,
}

/// Shortest `u` of length at most `bound` with `c · u · d` valid.
pub fn bridge_witness(alg: &StringAlgebra, c: &Band, d: &Band, bound: usize) -> Option<Vec<Letter>> {
    let keep = alg.max_relation_len().saturating_sub(1).max(1);
    let tail = |w: &[Letter]| w[w.len().saturating_sub(keep)..].to_vec();
    let fits = |w: &[Letter]| -> bool {
        let mut cur = w.to_vec();
        for &l in d.letters() {
            let at = alg.letter_end(*cur.last().unwrap());
            if !alg.extends(at, &cur, l) {
                return false;
            }
            cur.push(l);
        }
        true
    };
    let letters = alg.letters();
    let start = c.letters().to_vec();
    // BFS over the last `keep` letters; the path carries the letters of u
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::new();
    let mut queue: VecDeque<(Vec<Letter>, Vec<Letter>)> = VecDeque::new();
    seen.insert(tail(&start));
    queue.push_back((start, Vec::new()));
    while let Some((ctx, u)) = queue.pop_front() {
        if fits(&ctx) {
            return Some(u);
        }
        if u.len() >= bound {
            continue;
        }
        let at = alg.letter_end(*ctx.last().unwrap());
        for &l in &letters {
            if alg.extends(at, &ctx, l) {
                let mut next = tail(&ctx);
                next.push(l);
                if seen.insert(tail(&next)) {
                    let mut u2 = u.clone();
                    u2.push(l);
                    queue.push_back((next, u2));
                }
            }
        }
    }
    None
}

fn covers_with_bound(alg: &StringAlgebra, bands: &[Band], bound: usize) -> Result<(Vec<Vec<bool>>, Vec<Cover>)> {
    let n = bands.len();
    let mut leq = vec![vec![false; n]; n];
    let mut witness: BTreeMap<(usize, usize), Vec<Letter>> = BTreeMap::new();
    for i in 0..n {
        leq[i][i] = true;
        for j in 0..n {
            if i != j {
                if let Some(u) = bridge_witness(alg, &bands[i], &bands[j], bound) {
                    leq[i][j] = true;
                    witness.insert((i, j), u);
                }
            }
        }
    }
    // the relation is transitive by construction; close anyway in case the
    // bound cut off a long bridge
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] && leq[j][i] {
                return Err(Error::Consistency(format!(
                    "bridge relation is not antisymmetric on {} and {}",
                    bands[i].to_text(alg),
                    bands[j].to_text(alg)
                )));
            }
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq[i][j] {
                continue;
            }
            let between = (0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j]);
            if !between {
                let w = match witness.get(&(i, j)) {
                    Some(w) => w.clone(),
                    None => bridge_witness(alg, &bands[i], &bands[j], 4 * bound + 8)
                        .ok_or_else(|| Error::Consistency("cover without a bridge".into()))?,
                };
                covers.push(Cover {
                    lower: i,
                    upper: j,
                    witness: w,
                });
            }
        }
    }
    Ok((leq, covers))
}

/// Default witness length bound: `(number of letters)² + longest band`.
pub fn default_bridge_bound(alg: &StringAlgebra, bands: &[Band]) -> usize {
    let l = alg.letters().len();
    l * l + bands.iter().map(Band::len).max().unwrap_or(0)
}

pub fn bridge_quiver(alg: &StringAlgebra, bound: Option<usize>) -> Result<BridgeQuiver> {
    let bands = domestic_bands(alg)?;
    let bound = bound.unwrap_or_else(|| default_bridge_bound(alg, &bands));
    let (leq, covers) = covers_with_bound(alg, &bands, bound)?;
    let (_, doubled) = covers_with_bound(alg, &bands, 2 * bound)?;
    let stabilized = doubled == covers;
    Ok(BridgeQuiver {
        bands,
        leq,
        covers,
        bound,
        stabilized,
    })
}

impl BridgeQuiver {
    pub fn index_of(&self, b: &Band) -> Option<usize> {
        self.bands.iter().position(|x| x == b)
    }

    pub fn strictly_below(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    /// Graphviz rendering: one node per band, one edge per cover from the
    /// lower band to the upper one, labelled by the bridge.
    pub fn to_dot(&self, alg: &StringAlgebra) -> String {
        let mut out = format!("digraph \"bridge_{}\" {{\n  rankdir=BT;\n  node [shape=box];\n", alg.name);
        for (i, b) in self.bands.iter().enumerate() {
            out += &format!("  b{i} [label=\"{}\"];\n", b.to_text(alg));
        }
        for c in &self.covers {
            let label = if c.witness.is_empty() {
                "1".to_string()
            } else {
                letters_text(alg, &c.witness)
            };
            out += &format!("  b{} -> b{} [label=\"{}\"];\n", c.lower, c.upper, label);
        }
        out += "}\n";
        out
    }

    pub fn to_json(&self, alg: &StringAlgebra) -> serde_json::Value {
        serde_json::json!({
            "bands": self.bands.iter().map(|b| b.to_text(alg)).collect::<Vec<_>>(),
            "domestic": true,
            "n": self.bands.len() / 2,
            "bound": self.bound,
            "stabilized": self.stabilized,
            "covers": self.covers.iter().map(|c| serde_json::json!({
                "lower": self.bands[c.lower].to_text(alg),
                "upper": self.bands[c.upper].to_text(alg),
                "witness": letters_text(alg, &c.witness),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditItem {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandAudit {
    pub items: Vec<AuditItem>,
}

impl BandAudit {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

fn cyclic_pairs(letters: &[Letter]) -> Vec<(Letter, Letter)> {
    let n = letters.len();
    (0..n).map(|i| (letters[i], letters[(i + 1) % n])).collect()
}

/// Checks the three standard facts about bands over a domestic algebra:
/// a shared `α⁻¹β` transition forces equal bands; a shared first letter of
/// an `α … β⁻¹` rotation forces equal bands; every string from `α` to `β⁻¹`
/// of length at most `max_len` is a power of the band.
pub fn band_facts_audit(alg: &StringAlgebra, max_len: usize) -> Result<BandAudit> {
    let bands = domestic_bands(alg)?;
    let mut items = Vec::new();

    let mut bad = Vec::new();
    let mut checked = 0;
    for (i, e) in bands.iter().enumerate() {
        for f in &bands[i + 1..] {
            checked += 1;
            let pe: BTreeSet<_> = cyclic_pairs(e.letters()).into_iter().filter(|(a, b)| a.inverse && b.is_direct()).collect();
            let pf: BTreeSet<_> = cyclic_pairs(f.letters()).into_iter().filter(|(a, b)| a.inverse && b.is_direct()).collect();
            if let Some((a, b)) = pe.intersection(&pf).next() {
                bad.push(format!(
                    "{} and {} share {} {}",
                    e.to_text(alg),
                    f.to_text(alg),
                    alg.letter_name(*a),
                    alg.letter_name(*b)
                ));
            }
        }
    }
    items.push(AuditItem {
        name: "shared inverse-direct transition",
        passed: bad.is_empty(),
        checked,
        counterexamples: bad,
    });

    let mut bad = Vec::new();
    let mut owner: BTreeMap<Letter, usize> = BTreeMap::new();
    for (i, e) in bands.iter().enumerate() {
        for r in e.socle_forms() {
            if let Some(&j) = owner.get(&r[0]) {
                if j != i {
                    bad.push(format!(
                        "{} and {} both begin with {}",
                        bands[j].to_text(alg),
                        e.to_text(alg),
                        alg.letter_name(r[0])
                    ));
                }
            }
            owner.insert(r[0], i);
        }
    }
    items.push(AuditItem {
        name: "shared first letter",
        passed: bad.is_empty(),
        checked: bands.len(),
        counterexamples: bad,
    });

    let mut bad = Vec::new();
    let mut checked = 0;
    for e in &bands {
        for r in e.socle_forms() {
            let (first, last) = (r[0], *r.last().unwrap());
            let mut stack = vec![vec![first]];
            while let Some(w) = stack.pop() {
                let end = *w.last().unwrap();
                if end == last {
                    checked += 1;
                    let is_power = w.len() % r.len() == 0 && w.chunks(r.len()).all(|c| c == r.as_slice());
                    if !is_power {
                        bad.push(format!("{} is not a power of {}", letters_text(alg, &w), letters_text(alg, &r)));
                    }
                }
                if w.len() < max_len {
                    let at = alg.letter_end(end);
                    for l in alg.letters() {
                        if alg.extends(at, &w, l) {
                            let mut next = w.clone();
                            next.push(l);
                            stack.push(next);
                        }
                    }
                }
            }
        }
    }
    items.push(AuditItem {
        name: "strings between band endpoints are powers",
        passed: bad.is_empty(),
        checked,
        counterexamples: bad,
    });
    Ok(BandAudit { items })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn alg(src: &str) -> StringAlgebra {
        StringAlgebra::parse(src).unwrap()
    }

    fn texts(a: &StringAlgebra, bs: &[Band]) -> BTreeSet<String> {
        bs.iter().map(|b| b.to_text(a)).collect()
    }

    #[test]
    fn automaton_edges_match_words() {
        for (_, src) in corpus::ALL {
            let a = alg(src);
            let aut = letter_automaton(&a);
            for &l in &aut.nodes {
                for &m in &aut.nodes {
                    let valid = crate::words::Word::new(&a, None, vec![l, m]).is_ok();
                    assert_eq!(valid, aut.edges.contains(&(l, m)));
                }
            }
        }
        let k = alg("algebra k\nvertices: x\n");
        assert!(letter_automaton(&k).nodes.is_empty());
    }

    #[test]
    fn bands_of_corpus() {
        let r1 = alg(corpus::R1);
        let bs = enumerate_bands(&r1, 12);
        assert!(!bs.truncated);
        assert_eq!(texts(&r1, &bs.bands), ["a b^-1", "b a^-1"].map(String::from).into());
        let l2 = alg(corpus::LAMBDA2);
        let bs = enumerate_bands(&l2, 12);
        assert_eq!(
            texts(&l2, &bs.bands),
            ["a b^-1", "b a^-1", "e d^-1", "d e^-1"].map(String::from).into()
        );
        let g = alg(corpus::G23);
        let bs = enumerate_bands(&g, 9);
        assert!(bs.truncated);
        let long = Band::parse(&g, "a b^-1 b^-1 a b^-1 b^-1 a b^-1").unwrap();
        assert!(bs.bands.contains(&long));
    }

    #[test]
    fn band_rejections() {
        let r1 = alg(corpus::R1);
        assert!(Band::parse(&r1, "a b^-1 a b^-1").is_err());
        assert!(Band::parse(&r1, "a").is_err());
        assert_eq!(Band::parse(&r1, "b^-1 a").unwrap().to_text(&r1), "a b^-1");
    }

    #[test]
    fn domesticity() {
        let d = |src| is_domestic(&alg(src));
        assert!(matches!(d(corpus::KRONECKER), Domesticity::Domestic { n: 1, .. }));
        assert!(matches!(d(corpus::R1), Domesticity::Domestic { n: 1, .. }));
        assert!(matches!(d(corpus::LAMBDA2), Domesticity::Domestic { n: 2, .. }));
        let g = alg(corpus::G23);
        match is_domestic(&g) {
            Domesticity::NonDomestic { cycles, .. } => {
                assert_ne!(cycles[0], cycles[1]);
                for c in &cycles {
                    assert!(a_cycle_is_valid(&g, c));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    fn a_cycle_is_valid(a: &StringAlgebra, c: &[Letter]) -> bool {
        a.is_cyclic_walk(c)
    }

    #[test]
    fn lambda2_bridges() {
        let a = alg(corpus::LAMBDA2);
        let q = bridge_quiver(&a, None).unwrap();
        assert!(q.stabilized);
        let idx = |s: &str| q.index_of(&Band::parse(&a, s).unwrap()).unwrap();
        let (c, d) = (idx("e d^-1"), idx("a b^-1"));
        let (ci, di) = (idx("d e^-1"), idx("b a^-1"));
        assert_eq!(q.covers.len(), 2);
        let cd = q.covers.iter().find(|x| x.lower == c && x.upper == d).unwrap();
        assert_eq!(letters_text(&a, &cd.witness), "e g");
        assert!(q.covers.iter().any(|x| x.lower == di && x.upper == ci));
        assert!(!q.leq[c][ci] && !q.leq[d][c]);
    }

    #[test]
    fn kronecker_antichain() {
        let a = alg(corpus::KRONECKER);
        let q = bridge_quiver(&a, None).unwrap();
        assert!(q.covers.is_empty());
        assert!(matches!(bridge_quiver(&alg(corpus::G23), None), Err(Error::NonDomestic)));
    }

    #[test]
    fn audits() {
        assert!(band_facts_audit(&alg(corpus::R1), 12).unwrap().passed());
        assert!(band_facts_audit(&alg(corpus::LAMBDA2), 12).unwrap().passed());
        assert!(band_facts_audit(&alg(corpus::G23), 12).is_err());
    }
}
