//! Quiver-with-monomial-relations presentations.
//!
//! Paths are written right to left: in `relation: d g` one goes first by `g`
//! and then by `d`. The text format is
//!
//! ```text
//! algebra lambda2
//! vertices: 1 2 3 4
//! arrow d: 2 -> 1
//! relation: d g
//! ```
//!
//! Everything after `#` on a line is a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::Letter;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ArrowId(pub usize);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A path of arrows listed left to right in composition order, so the last
/// entry is applied first.
pub type RelationPath = Vec<ArrowId>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraPresentation {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<RelationPath>,
}

#[derive(Serialize, Deserialize)]
struct JsonArrow {
    name: String,
    source: String,
    target: String,
}

#[derive(Serialize, Deserialize)]
struct JsonPresentation {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<JsonArrow>,
    relations: Vec<Vec<String>>,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl AlgebraPresentation {
    /// Builds a presentation from names, checking references and
    /// composability, then normalizing the relation set.
    pub fn from_parts(
        name: &str,
        vertices: &[&str],
        arrows: &[(&str, &str, &str)],
        relations: &[&[&str]],
    ) -> Result<Self> {
        let mut p = AlgebraPresentation {
            name: name.to_string(),
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
        };
        for v in vertices {
            p.add_vertex(v)?;
        }
        for (n, s, t) in arrows {
            p.add_arrow(n, s, t)?;
        }
        for r in relations {
            p.add_relation(r)?;
        }
        p.normalize();
        Ok(p)
    }

    fn add_vertex(&mut self, v: &str) -> Result<()> {
        if self.vertices.iter().any(|x| x == v) {
            return Err(Error::Duplicate {
                kind: "vertex",
                name: v.to_string(),
            });
        }
        self.vertices.push(v.to_string());
        Ok(())
    }

    fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<()> {
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(Error::Duplicate {
                kind: "arrow",
                name: name.to_string(),
            });
        }
        let source = self.vertex_id(source)?;
        let target = self.vertex_id(target)?;
        self.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
        });
        Ok(())
    }

    fn add_relation(&mut self, names: &[&str]) -> Result<()> {
        let path: Vec<ArrowId> = names
            .iter()
            .map(|n| self.arrow_id(n))
            .collect::<Result<_>>()?;
        let text = names.join(" ");
        if path.len() < 2 {
            return Err(Error::ShortRelation(text));
        }
        for w in path.windows(2) {
            // w[1] is applied first, then w[0]
            if self.arrows[w[1].0].target != self.arrows[w[0].0].source {
                return Err(Error::NotComposable(text));
            }
        }
        self.relations.push(path);
        Ok(())
    }

    /// Drops duplicate relations and those containing another relation as a
    /// proper factor; sorts the rest for a canonical layout.
    pub fn normalize(&mut self) {
        let set: BTreeSet<RelationPath> = self.relations.drain(..).collect();
        let all: Vec<RelationPath> = set.into_iter().collect();
        let minimal: Vec<RelationPath> = all
            .iter()
            .filter(|r| {
                !all.iter()
                    .any(|s| s.len() < r.len() && r.windows(s.len()).any(|w| w == s.as_slice()))
            })
            .cloned()
            .collect();
        self.relations = minimal;
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .map(VertexId)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .map(ArrowId)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn relation_text(&self, r: &RelationPath) -> String {
        r.iter()
            .map(|a| self.arrows[a.0].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Is the composition `second ∘ first` (first applied first) a relation?
    pub fn is_zero_pair(&self, second: ArrowId, first: ArrowId) -> bool {
        self.relations.iter().any(|r| r.as_slice() == [second, first])
    }

    /// Parses the text format. The result is well formed but not yet checked
    /// against the string-algebra axioms.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name: Option<String> = None;
        let mut p = AlgebraPresentation {
            name: String::new(),
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
        };
        let mut saw_vertices = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            let indent = line.len() - line.trim_start().len();
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let col = indent + 1;
            if let Some(rest) = line.strip_prefix("algebra") {
                let rest = rest.trim();
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(perr(line_no, col, "expected `algebra <name>`"));
                }
                if name.is_some() {
                    return Err(perr(line_no, col, "duplicate `algebra` header"));
                }
                name = Some(rest.to_string());
            } else if let Some(rest) = line.strip_prefix("vertices:") {
                if saw_vertices {
                    return Err(perr(line_no, col, "duplicate `vertices:` line"));
                }
                saw_vertices = true;
                for v in rest.split_whitespace() {
                    p.add_vertex(v)
                        .map_err(|e| perr(line_no, col, e.to_string()))?;
                }
            } else if let Some(rest) = line.strip_prefix("arrow ") {
                let (aname, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| perr(line_no, col, "expected `arrow <name>: <source> -> <target>`"))?;
                let aname = aname.trim();
                let (s, t) = ends
                    .split_once("->")
                    .ok_or_else(|| perr(line_no, col, "expected `->` in arrow declaration"))?;
                let (s, t) = (s.trim(), t.trim());
                if aname.is_empty() || s.is_empty() || t.is_empty() || aname.contains(char::is_whitespace) {
                    return Err(perr(line_no, col, "malformed arrow declaration"));
                }
                if aname.contains('^') {
                    return Err(perr(line_no, col, "arrow names may not contain `^`"));
                }
                p.add_arrow(aname, s, t).map_err(|e| {
                    let c = raw.find(match &e {
                        Error::UnknownVertex(v) => v.as_str(),
                        _ => aname,
                    });
                    perr(line_no, c.map_or(col, |c| c + 1), e.to_string())
                })?;
            } else if let Some(rest) = line.strip_prefix("relation:") {
                let names: Vec<&str> = rest.split_whitespace().collect();
                if names.is_empty() {
                    return Err(perr(line_no, col, "empty relation"));
                }
                p.add_relation(&names).map_err(|e| {
                    let c = match &e {
                        Error::UnknownArrow(a) => raw.find(a.as_str()).map(|c| c + 1),
                        _ => None,
                    };
                    perr(line_no, c.unwrap_or(col), e.to_string())
                })?;
            } else {
                return Err(perr(line_no, col, format!("unrecognized line `{line}`")));
            }
        }
        p.name = name.ok_or_else(|| perr(1, 1, "missing `algebra <name>` header"))?;
        if !saw_vertices {
            return Err(perr(1, 1, "missing `vertices:` line"));
        }
        p.normalize();
        Ok(p)
    }

    /// Text in the DSL; `parse(to_dsl())` reproduces the presentation.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("algebra {}\nvertices: {}\n", self.name, self.vertices.join(" "));
        for a in &self.arrows {
            out += &format!(
                "arrow {}: {} -> {}\n",
                a.name,
                self.vertex_name(a.source),
                self.vertex_name(a.target)
            );
        }
        for r in &self.relations {
            out += &format!("relation: {}\n", self.relation_text(r));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = JsonPresentation {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| JsonArrow {
                    name: a.name.clone(),
                    source: self.vertex_name(a.source).to_string(),
                    target: self.vertex_name(a.target).to_string(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| r.iter().map(|a| self.arrows[a.0].name.clone()).collect())
                .collect(),
        };
        serde_json::to_value(doc).expect("presentation serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: JsonPresentation = serde_json::from_value(value.clone())?;
        let vertices: Vec<&str> = doc.vertices.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str)> = doc
            .arrows
            .iter()
            .map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str()))
            .collect();
        let rels: Vec<Vec<&str>> = doc
            .relations
            .iter()
            .map(|r| r.iter().map(String::as_str).collect())
            .collect();
        let rel_refs: Vec<&[&str]> = rels.iter().map(Vec::as_slice).collect();
        Self::from_parts(&doc.name, &vertices, &arrows, &rel_refs)
    }

    /// Factors out the ideal generated by `kill`: those arrows disappear and
    /// every relation through one of them is dropped.
    pub fn quotient_by_arrows(&self, kill: &[&str]) -> Result<AlgebraPresentation> {
        let killed: BTreeSet<ArrowId> = kill
            .iter()
            .map(|n| self.arrow_id(n))
            .collect::<Result<_>>()?;
        let mut remap = BTreeMap::new();
        let mut arrows = Vec::new();
        for (i, a) in self.arrows.iter().enumerate() {
            if !killed.contains(&ArrowId(i)) {
                remap.insert(ArrowId(i), ArrowId(arrows.len()));
                arrows.push(a.clone());
            }
        }
        let relations = self
            .relations
            .iter()
            .filter(|r| r.iter().all(|a| !killed.contains(a)))
            .map(|r| r.iter().map(|a| remap[a]).collect())
            .collect();
        let mut q = AlgebraPresentation {
            name: if killed.is_empty() {
                self.name.clone()
            } else {
                format!("{}/({})", self.name, kill.join(","))
            },
            vertices: self.vertices.clone(),
            arrows,
            relations,
        };
        q.normalize();
        Ok(q)
    }

    pub fn validate(&self) -> Validation {
        validate_string_algebra(self)
    }

    /// Validates and wraps the presentation.
    pub fn into_string_algebra(self) -> Result<StringAlgebra> {
        StringAlgebra::new(self)
    }
}

/// One violated string-algebra axiom.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    TooManyIncoming { vertex: String, arrows: Vec<String> },
    TooManyOutgoing { vertex: String, arrows: Vec<String> },
    /// More than one arrow `β` with `βα` nonzero for this `α`.
    SeveralSuccessors { arrow: String, successors: Vec<String> },
    /// More than one arrow `α` with `βα` nonzero for this `β`.
    SeveralPredecessors { arrow: String, predecessors: Vec<String> },
    /// An oriented cycle of arrows none of whose factors is a relation.
    InfiniteDimensional { cycle: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooManyIncoming { vertex, arrows } => write!(
                f,
                "more than two ingoing arrows at vertex {vertex}: {}",
                arrows.join(", ")
            ),
            Violation::TooManyOutgoing { vertex, arrows } => write!(
                f,
                "more than two outgoing arrows at vertex {vertex}: {}",
                arrows.join(", ")
            ),
            Violation::SeveralSuccessors { arrow, successors } => write!(
                f,
                "more than one nonzero composition after arrow {arrow}: {}",
                successors.join(", ")
            ),
            Violation::SeveralPredecessors { arrow, predecessors } => write!(
                f,
                "more than one nonzero composition before arrow {arrow}: {}",
                predecessors.join(", ")
            ),
            Violation::InfiniteDimensional { cycle } => write!(
                f,
                "oriented cycle {} generates infinitely many nonzero paths",
                cycle.join(" ")
            ),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Validation {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Nonzero two-arrow paths `(second, first)`, i.e. `second·first ≠ 0`.
    pub nonzero_pairs: Vec<(String, String)>,
}

pub fn validate_string_algebra(p: &AlgebraPresentation) -> Validation {
    let mut violations = Vec::new();
    let names = |ids: &[ArrowId]| -> Vec<String> {
        ids.iter().map(|a| p.arrows[a.0].name.clone()).collect()
    };
    for (vi, vname) in p.vertices.iter().enumerate() {
        let incoming: Vec<ArrowId> = (0..p.arrows.len())
            .map(ArrowId)
            .filter(|a| p.arrows[a.0].target == VertexId(vi))
            .collect();
        let outgoing: Vec<ArrowId> = (0..p.arrows.len())
            .map(ArrowId)
            .filter(|a| p.arrows[a.0].source == VertexId(vi))
            .collect();
        if incoming.len() > 2 {
            violations.push(Violation::TooManyIncoming {
                vertex: vname.clone(),
                arrows: names(&incoming),
            });
        }
        if outgoing.len() > 2 {
            violations.push(Violation::TooManyOutgoing {
                vertex: vname.clone(),
                arrows: names(&outgoing),
            });
        }
    }
    let mut nonzero_pairs = Vec::new();
    for (ai, a) in p.arrows.iter().enumerate() {
        let first = ArrowId(ai);
        let succ: Vec<ArrowId> = (0..p.arrows.len())
            .map(ArrowId)
            .filter(|b| p.arrows[b.0].source == a.target && !p.is_zero_pair(*b, first))
            .collect();
        for b in &succ {
            nonzero_pairs.push((p.arrows[b.0].name.clone(), a.name.clone()));
        }
        if succ.len() > 1 {
            violations.push(Violation::SeveralSuccessors {
                arrow: a.name.clone(),
                successors: names(&succ),
            });
        }
        let second = first;
        let pred: Vec<ArrowId> = (0..p.arrows.len())
            .map(ArrowId)
            .filter(|b| p.arrows[b.0].target == a.source && !p.is_zero_pair(second, *b))
            .collect();
        if pred.len() > 1 {
            violations.push(Violation::SeveralPredecessors {
                arrow: a.name.clone(),
                predecessors: names(&pred),
            });
        }
    }
    if violations.is_empty() {
        if let Some(cycle) = nonzero_oriented_cycle(p) {
            violations.push(Violation::InfiniteDimensional {
                cycle: names(&cycle),
            });
        }
    }
    nonzero_pairs.sort();
    Validation {
        valid: violations.is_empty(),
        violations,
        nonzero_pairs,
    }
}

/// Looks for an arbitrarily long nonzero path. With at most one nonzero
/// successor per arrow (checked beforehand) the nonzero paths from a given
/// arrow form a single chain, so following it for long enough decides.
fn nonzero_oriented_cycle(p: &AlgebraPresentation) -> Option<Vec<ArrowId>> {
    let maxrel = p.relations.iter().map(Vec::len).max().unwrap_or(2);
    let bound = p.arrows.len() * maxrel + 2;
    for start in 0..p.arrows.len() {
        // path in application order: path[0] applied first
        let mut path = vec![ArrowId(start)];
        loop {
            let last = *path.last().unwrap();
            let next = (0..p.arrows.len()).map(ArrowId).find(|b| {
                if p.arrows[b.0].source != p.arrows[last.0].target {
                    return false;
                }
                let mut cand = path.clone();
                cand.push(*b);
                !path_contains_relation(p, &cand)
            });
            match next {
                Some(b) => {
                    path.push(b);
                    if path.len() > bound {
                        let tail: Vec<ArrowId> =
                            path[path.len() - p.arrows.len().max(1)..].iter().rev().copied().collect();
                        return Some(tail);
                    }
                }
                None => break,
            }
        }
    }
    None
}

/// `path` lists arrows in application order.
fn path_contains_relation(p: &AlgebraPresentation, path: &[ArrowId]) -> bool {
    let composed: Vec<ArrowId> = path.iter().rev().copied().collect();
    p.relations
        .iter()
        .any(|r| r.len() <= composed.len() && composed.windows(r.len()).any(|w| w == r.as_slice()))
}

/// A presentation that satisfies the string-algebra axioms. Immutable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringAlgebra {
    presentation: AlgebraPresentation,
    max_relation_len: usize,
}

impl Deref for StringAlgebra {
    type Target = AlgebraPresentation;
    fn deref(&self) -> &AlgebraPresentation {
        &self.presentation
    }
}

impl StringAlgebra {
    pub fn new(presentation: AlgebraPresentation) -> Result<Self> {
        let v = validate_string_algebra(&presentation);
        if !v.valid {
            let msgs: Vec<String> = v.violations.iter().map(|x| x.to_string()).collect();
            return Err(Error::NotStringAlgebra(msgs.join("; ")));
        }
        let max_relation_len = presentation.relations.iter().map(Vec::len).max().unwrap_or(0);
        Ok(StringAlgebra {
            presentation,
            max_relation_len,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(AlgebraPresentation::parse(text)?)
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn max_relation_len(&self) -> usize {
        self.max_relation_len
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// All letters, ordered by arrow name, direct before inverse.
    pub fn letters(&self) -> Vec<Letter> {
        let mut ids: Vec<ArrowId> = (0..self.arrows.len()).map(ArrowId).collect();
        ids.sort_by(|a, b| self.arrows[a.0].name.cmp(&self.arrows[b.0].name));
        ids.into_iter()
            .flat_map(|a| [Letter::direct(a), Letter::inverse(a)])
            .collect()
    }

    /// Vertex of the left node of a letter.
    pub fn letter_start(&self, l: Letter) -> VertexId {
        let a = &self.arrows[l.arrow.0];
        if l.inverse {
            a.source
        } else {
            a.target
        }
    }

    /// Vertex of the right node of a letter.
    pub fn letter_end(&self, l: Letter) -> VertexId {
        let a = &self.arrows[l.arrow.0];
        if l.inverse {
            a.target
        } else {
            a.source
        }
    }

    /// Ordering key for letters: arrow name, then direct before inverse.
    pub fn letter_key(&self, l: Letter) -> (&str, bool) {
        (self.arrows[l.arrow.0].name.as_str(), l.inverse)
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let n = &self.arrows[l.arrow.0].name;
        if l.inverse {
            format!("{n}^-1")
        } else {
            n.clone()
        }
    }

    /// Checks that `letters`, read from `anchor`, form a walk with no
    /// cancellation and no relation (or inverse relation) as a factor.
    /// On failure returns the offending position and a reason.
    pub fn check_walk(&self, anchor: VertexId, letters: &[Letter]) -> Result<(), (usize, String)> {
        let mut at = anchor;
        for (i, &l) in letters.iter().enumerate() {
            if self.letter_start(l) != at {
                return Err((
                    i,
                    format!(
                        "letter {} starts at vertex {}, walk is at vertex {}",
                        self.letter_name(l),
                        self.vertex_name(self.letter_start(l)),
                        self.vertex_name(at)
                    ),
                ));
            }
            if i > 0 && letters[i - 1] == l.inv() {
                return Err((i, format!("cancellation {} {}", self.letter_name(letters[i - 1]), self.letter_name(l))));
            }
            at = self.letter_end(l);
            if let Some(r) = self.relation_ending_at(letters, i) {
                return Err((i, format!("relation {} met", r)));
            }
        }
        Ok(())
    }

    /// A relation (or inverse relation) occurring as a factor that ends at
    /// position `i`.
    fn relation_ending_at(&self, letters: &[Letter], i: usize) -> Option<String> {
        for r in &self.relations {
            let k = r.len();
            if k > i + 1 {
                continue;
            }
            let window = &letters[i + 1 - k..=i];
            let direct = window
                .iter()
                .zip(r.iter())
                .all(|(l, a)| !l.inverse && l.arrow == *a);
            let inverse = window
                .iter()
                .zip(r.iter().rev())
                .all(|(l, a)| l.inverse && l.arrow == *a);
            if direct || inverse {
                let text = self.relation_text(r);
                return Some(if direct { text } else { format!("({text})^-1") });
            }
        }
        None
    }

    /// Can the valid walk `letters` (ending at `at`) be extended by `l`?
    pub fn extends(&self, at: VertexId, letters: &[Letter], l: Letter) -> bool {
        if self.letter_start(l) != at {
            return false;
        }
        if letters.last() == Some(&l.inv()) {
            return false;
        }
        let keep = self.max_relation_len.saturating_sub(1).min(letters.len());
        let mut window: Vec<Letter> = letters[letters.len() - keep..].to_vec();
        window.push(l);
        self.relation_ending_at(&window, window.len() - 1).is_none()
    }

    pub fn is_walk(&self, anchor: VertexId, letters: &[Letter]) -> bool {
        self.check_walk(anchor, letters).is_ok()
    }

    /// Is the letter sequence valid when read cyclically (so that it can be
    /// repeated indefinitely)?
    pub fn is_cyclic_walk(&self, letters: &[Letter]) -> bool {
        if letters.is_empty() {
            return false;
        }
        let reps = 2 + self.max_relation_len / letters.len() + 1;
        let rep: Vec<Letter> = letters.iter().copied().cycle().take(letters.len() * reps).collect();
        self.letter_end(*letters.last().unwrap()) == self.letter_start(letters[0])
            && self.is_walk(self.letter_start(letters[0]), &rep)
    }
}
