//! Graph maps between string modules.
//!
//! A basis of `Hom(M(u), M(v))` is indexed by pairs of occurrences of a
//! common word `c`: a factor of `u` that is a quotient of `M(u)` and a
//! factor of `v` (possibly read backwards) that is a submodule of `M(v)`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::module::{hom_dimension_oracle, string_module, FDModule, ModuleKind, Morphism, PointedElement};
use crate::presentation::StringAlgebra;
use crate::words::{letters_text, Letter, Word};

pub use crate::module::pointed_morphism_exists;

/// Occurrences of a common factor: nodes `u_start ..= u_start + len` of
/// `M(u)` go to nodes of `M(v)` starting at `v_start`, counted upwards, or
/// downwards when `reversed`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FactorTriple {
    pub u_start: usize,
    pub v_start: usize,
    pub len: usize,
    pub reversed: bool,
}

impl FactorTriple {
    /// The common word `c` as it occurs in `u`.
    pub fn common<'a>(&self, u: &'a Word) -> &'a [Letter] {
        &u.letters()[self.u_start..self.u_start + self.len]
    }

    /// Node of `M(v)` receiving node `u_start + k` of `M(u)`.
    pub fn image_node(&self, k: usize) -> usize {
        if self.reversed {
            self.v_start - k
        } else {
            self.v_start + k
        }
    }

    pub fn describe(&self, alg: &StringAlgebra, u: &Word) -> String {
        let c = if self.len == 0 {
            format!("1_{}", alg.vertex_name(node_vertex(alg, u, self.u_start)))
        } else {
            letters_text(alg, self.common(u))
        };
        format!(
            "c = {c} at u[{}..{}] -> v[{}]{}",
            self.u_start,
            self.u_start + self.len,
            self.v_start,
            if self.reversed { " reversed" } else { "" }
        )
    }
}

fn node_vertex(alg: &StringAlgebra, w: &Word, i: usize) -> crate::presentation::VertexId {
    if i == 0 {
        w.anchor()
    } else {
        alg.letter_end(w.letters()[i - 1])
    }
}

/// Nodes `i..=j` span a quotient: the letters just outside point away.
fn quotient_closed(w: &Word, i: usize, j: usize) -> bool {
    let l = w.letters();
    (i == 0 || l[i - 1].is_direct()) && (j == l.len() || l[j].inverse)
}

/// Nodes `i..=j` span a submodule: the letters just outside point in.
fn submodule_closed(w: &Word, i: usize, j: usize) -> bool {
    let l = w.letters();
    (i == 0 || l[i - 1].inverse) && (j == l.len() || l[j].is_direct())
}

/// All factor triples for `Hom(M(u), M(v))`, ordered by position then
/// orientation.
pub fn admissible_triples(alg: &StringAlgebra, u: &Word, v: &Word) -> Vec<FactorTriple> {
    let (lu, lv) = (u.letters(), v.letters());
    let mut out = Vec::new();
    for i in 0..=lu.len() {
        for j in i..=lu.len() {
            if !quotient_closed(u, i, j) {
                continue;
            }
            let c = &lu[i..j];
            let len = j - i;
            for s in 0..=lv.len() {
                // forward: v nodes s ..= s + len
                if s + len <= lv.len()
                    && lv[s..s + len] == *c
                    && node_vertex(alg, u, i) == node_vertex(alg, v, s)
                    && submodule_closed(v, s, s + len)
                {
                    out.push(FactorTriple {
                        u_start: i,
                        v_start: s,
                        len,
                        reversed: false,
                    });
                }
                // backward: v nodes s, s - 1, …, s - len carry c read as c⁻¹
                if len > 0
                    && s >= len
                    && c.iter().enumerate().all(|(k, &l)| lv[s - 1 - k] == l.inv())
                    && submodule_closed(v, s - len, s)
                {
                    out.push(FactorTriple {
                        u_start: i,
                        v_start: s,
                        len,
                        reversed: true,
                    });
                }
            }
        }
    }
    out
}

/// A graph map together with its matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap<F: Field> {
    pub triple: FactorTriple,
    pub morphism: Morphism<F>,
}

fn string_word<F: Field>(m: &FDModule<F>) -> Result<&Word> {
    match m.kind() {
        ModuleKind::String(w) => Ok(w),
        _ => Err(Error::Precondition("graph maps need string modules".into())),
    }
}

/// The morphism induced by a triple.
pub fn graph_map<F: Field>(mu: &FDModule<F>, mv: &FDModule<F>, t: &FactorTriple) -> GraphMap<F> {
    let mut maps: Vec<Matrix<F>> = mu
        .dims()
        .iter()
        .zip(mv.dims())
        .map(|(&du, &dv)| Matrix::zeros(dv, du))
        .collect();
    for k in 0..=t.len {
        let a = &mu.nodes()[t.u_start + k];
        let b = &mv.nodes()[t.image_node(k)];
        debug_assert_eq!(a.vertex, b.vertex);
        maps[a.vertex.0].set(b.offset, a.offset, F::one());
    }
    GraphMap {
        triple: t.clone(),
        morphism: Morphism { maps },
    }
}

/// Graph-map basis of `Hom(M(u), M(v))`.
pub fn hom_basis<F: Field>(mu: &FDModule<F>, mv: &FDModule<F>) -> Result<Vec<GraphMap<F>>> {
    if !mu.same_algebra(mv) {
        return Err(Error::AlgebraMismatch);
    }
    if mu.dim() == 0 || mv.dim() == 0 {
        return Ok(Vec::new());
    }
    let (u, v) = (string_word(mu)?, string_word(mv)?);
    Ok(admissible_triples(mu.algebra(), u, v)
        .iter()
        .map(|t| graph_map(mu, mv, t))
        .collect())
}

fn zero_morphism<F: Field>(mu: &FDModule<F>, mv: &FDModule<F>) -> Morphism<F> {
    Morphism {
        maps: mu.dims().iter().zip(mv.dims()).map(|(&du, &dv)| Matrix::zeros(dv, du)).collect(),
    }
}

/// A homomorphism of string modules sending `n` to `m`, found as a
/// combination of graph maps.
pub fn pointed_string_morphism<F: Field>(
    mu: &FDModule<F>,
    n: &PointedElement<F>,
    mv: &FDModule<F>,
    m: &PointedElement<F>,
) -> Result<Option<Morphism<F>>> {
    if n.vertex != m.vertex {
        return Err(Error::Precondition("pointed elements at different vertices".into()));
    }
    let basis = hom_basis(mu, mv)?;
    let images: Vec<Vec<F>> = basis.iter().map(|g| g.morphism.apply(n).coords).collect();
    if m.coords.is_empty() || images.is_empty() {
        return Ok(m.is_zero().then(|| zero_morphism(mu, mv)));
    }
    let a = Matrix::from_columns(m.coords.len(), &images);
    Ok(a.solve(&m.coords).map(|mu_coeffs| {
        let mut f = zero_morphism(mu, mv);
        for (g, c) in basis.iter().zip(mu_coeffs) {
            if c.is_zero() {
                continue;
            }
            for (acc, x) in f.maps.iter_mut().zip(&g.morphism.maps) {
                for r in 0..x.rows() {
                    for k in 0..x.cols() {
                        let e = x.get(r, k);
                        if !e.is_zero() {
                            let v = acc.get(r, k).clone() + c.clone() * e.clone();
                            acc.set(r, k, v);
                        }
                    }
                }
            }
        }
        f
    }))
}

/// Rank of a family of morphisms viewed as vectors.
pub fn morphism_rank<F: Field>(maps: &[Morphism<F>]) -> usize {
    let rows: Vec<Vec<F>> = maps
        .iter()
        .map(|f| f.maps.iter().flat_map(|m| m.to_rows().into_iter().flatten()).collect())
        .collect();
    match rows.first() {
        None => 0,
        Some(r) => Matrix::from_rows(rows.len(), r.len(), rows).rank(),
    }
}

/// Per-pair comparison of the graph-map count with the linear-algebra
/// oracle.
#[derive(Clone, Debug, Serialize)]
pub struct HomReport {
    pub u: String,
    pub v: String,
    pub triples: Vec<String>,
    pub count: usize,
    pub oracle_count: usize,
    pub all_commute: bool,
    pub independent: bool,
}

impl HomReport {
    pub fn consistent(&self) -> bool {
        self.count == self.oracle_count && self.all_commute && self.independent
    }
}

pub fn hom_report<F: Field>(alg: &Arc<StringAlgebra>, u: &Word, v: &Word) -> Result<HomReport> {
    let mu: FDModule<F> = string_module(alg, u);
    let mv: FDModule<F> = string_module(alg, v);
    let basis = hom_basis(&mu, &mv)?;
    let morphisms: Vec<Morphism<F>> = basis.iter().map(|g| g.morphism.clone()).collect();
    Ok(HomReport {
        u: u.to_text(alg),
        v: v.to_text(alg),
        triples: basis.iter().map(|g| g.triple.describe(alg, u)).collect(),
        count: basis.len(),
        oracle_count: hom_dimension_oracle(&mu, &mv)?,
        all_commute: morphisms.iter().all(|f| f.is_homomorphism(&mu, &mv)),
        independent: morphism_rank(&morphisms) == morphisms.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::Q;
    use crate::words::string_representatives;

    fn arc(src: &str) -> Arc<StringAlgebra> {
        Arc::new(StringAlgebra::parse(src).unwrap())
    }

    #[test]
    fn kronecker_triples() {
        let a = arc(corpus::KRONECKER);
        let ab = Word::parse(&a, None, "a b^-1").unwrap();
        let al = Word::parse(&a, None, "a").unwrap();
        assert_eq!(admissible_triples(&a, &ab, &al).len(), 1);
        assert!(admissible_triples(&a, &al, &ab).is_empty());
        let own = admissible_triples(&a, &ab, &ab);
        assert!(own.contains(&FactorTriple {
            u_start: 0,
            v_start: 0,
            len: 2,
            reversed: false
        }));
    }

    #[test]
    fn reversed_match_is_a_homomorphism() {
        let a = arc(corpus::KRONECKER);
        let w = Word::parse(&a, None, "a b^-1").unwrap();
        let r = Word::parse(&a, None, "b a^-1").unwrap();
        let rep = hom_report::<Q>(&a, &w, &r).unwrap();
        assert!(rep.consistent(), "{rep:?}");
        assert_eq!(rep.count, 1);
    }

    #[test]
    fn small_sweep_matches_oracle() {
        for src in [corpus::R1, corpus::LAMBDA2, corpus::KRONECKER, corpus::G23] {
            let a = arc(src);
            let words = string_representatives(&a, 3);
            for u in &words {
                for v in &words {
                    let rep = hom_report::<Q>(&a, u, v).unwrap();
                    assert!(rep.consistent(), "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn zero_target() {
        let a = arc(corpus::KRONECKER);
        let mu: FDModule<Q> = string_module(&a, &Word::parse(&a, None, "a").unwrap());
        let z = FDModule::<Q>::zero(a.clone());
        assert!(hom_basis(&mu, &z).unwrap().is_empty());
        assert_eq!(hom_dimension_oracle(&mu, &z).unwrap(), 0);
    }

    #[test]
    fn pointed_maps_agree_with_linear_solve() {
        let a = arc(corpus::R1);
        let words = string_representatives(&a, 3);
        for u in &words {
            let mu: FDModule<Q> = string_module(&a, u);
            for v in &words {
                let mv: FDModule<Q> = string_module(&a, v);
                for i in 0..mu.dim() {
                    for j in 0..mv.dim() {
                        let (n, m) = (mu.basis_element(i), mv.basis_element(j));
                        let fast = pointed_string_morphism(&mu, &n, &mv, &m).unwrap();
                        let slow = pointed_morphism_exists(&mu, &n, &mv, &m).unwrap();
                        assert_eq!(fast.is_some(), slow.is_some());
                        if let Some(f) = fast {
                            assert!(f.is_homomorphism(&mu, &mv));
                            assert_eq!(f.apply(&n), m);
                        }
                    }
                }
            }
        }
    }
}
