//! Combinatorics and finite-dimensional representation theory of string
//! algebras: presentations, words, bands and the bridge quiver, string and
//! band modules with divisibility formulas, graph maps, and the
//! descriptors of indecomposable pure-injective modules over domestic
//! string algebras.

pub mod bands;
pub mod corpus;
pub mod error;
pub mod field;
pub mod linalg;
pub mod homs;
pub mod module;
pub mod presentation;
pub mod ringel;
pub mod suites;
pub mod words;

pub use error::{Error, Result};
pub use field::{Field, FieldChoice, Fp, Q};
pub use presentation::{AlgebraPresentation, ArrowId, StringAlgebra, VertexId};
pub use words::{AnyWord, HPartition, Letter, OneSidedWord, Side, TwoSidedWord, Word};
pub use bands::{Band, BandSet, BridgeQuiver, Domesticity};
pub use module::{FDModule, Homogeneity, Morphism, PPWordFormula, PointedElement};
pub use homs::{admissible_triples, hom_basis, FactorTriple, GraphMap};
pub use ringel::{RingelDescriptor, Shape, Verdict, ZieglerOpen};
