//! The example algebras shipped in `corpus/`.

pub const KRONECKER: &str = include_str!("../../../corpus/kronecker.alg");
pub const R1: &str = include_str!("../../../corpus/r1.alg");
pub const G23: &str = include_str!("../../../corpus/g23.alg");
pub const LAMBDA2: &str = include_str!("../../../corpus/lambda2.alg");

/// `(name, source)` for every corpus algebra.
pub const ALL: [(&str, &str); 4] = [
    ("kronecker", KRONECKER),
    ("r1", R1),
    ("g23", G23),
    ("lambda2", LAMBDA2),
];

/// H-partition of R1 that puts `b` and `b^-1` in the class of sign +1.
pub const R1_B_FIRST: [(&str, i8); 4] = [("b", 1), ("b^-1", 1), ("a", -1), ("a^-1", -1)];

/// Biperiodic two-sided word over R1 with a contracting left end and an
/// expanding right end, anchored at a socle node.
pub const R1_BIPERIODIC: &str = "inf^(b a^-1) . b (a b^-1)^inf";
