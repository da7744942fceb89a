//! Exact coefficient fields.
//!
//! Everything downstream is generic over [`Field`]. Two implementations are
//! provided: the rationals [`Q`] (arbitrary precision) and the prime fields
//! [`Fp`]. No floating point is used anywhere in the crate.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// An exact, computable field.
pub trait Field:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + FromStr<Err = Error>
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;
    /// Short description used in reports, e.g. `Q` or `GF(7)`.
    fn name() -> String;
}

/// Arbitrary-precision rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Q {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse {
            line: 0,
            column: 0,
            message: format!("not a rational number: `{s}`"),
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Q(BigRational::new(n, d)))
            }
            None => Ok(Q(BigRational::from_integer(s.parse().map_err(|_| bad())?))),
        }
    }
}

macro_rules! forward_q_op {
    ($tr:ident, $f:ident) => {
        impl $tr for Q {
            type Output = Q;
            fn $f(self, rhs: Q) -> Q {
                Q(self.0.$f(rhs.0))
            }
        }
    };
}
forward_q_op!(Add, add);
forward_q_op!(Sub, sub);
forward_q_op!(Mul, mul);
forward_q_op!(Div, div);

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Field for Q {
    fn zero() -> Self {
        Q(BigRational::zero())
    }
    fn one() -> Self {
        Q(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }
    fn inverse(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Q(self.0.recip()))
        }
    }
    fn name() -> String {
        "Q".to_string()
    }
}

impl Q {
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

/// The prime field with `P` elements. `P` must be prime and below 2^32.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> FromStr for Fp<P> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse {
            line: 0,
            column: 0,
            message: format!("not an element of GF({P}): `{s}`"),
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let n: Fp<P> = n.parse()?;
                let d: Fp<P> = d.parse()?;
                let inv = d.inverse().ok_or_else(bad)?;
                Ok(n * inv)
            }
            None => {
                let v: i128 = s.parse().map_err(|_| bad())?;
                Ok(Fp(v.rem_euclid(P as i128) as u64))
            }
        }
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in prime field")
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn name() -> String {
        format!("GF({P})")
    }
}

/// Trial-division primality test, used to validate a requested modulus.
/// Primes with a compiled [`Fp`] instance available to runtime dispatch.
pub const SUPPORTED_PRIMES: [u64; 6] = [2, 3, 5, 7, 101, 32003];

/// A runtime choice of coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldChoice {
    #[default]
    Rationals,
    Prime(u64),
}

impl FromStr for FieldChoice {
    type Err = Error;

    /// `q` (or `Q`, `rationals`), or a prime such as `7` or `GF(7)`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if matches!(t, "q" | "Q" | "rationals") {
            return Ok(FieldChoice::Rationals);
        }
        let digits = t
            .strip_prefix("GF(")
            .or_else(|| t.strip_prefix("gf("))
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t);
        let bad = |message: String| Error::Parse {
            line: 0,
            column: 0,
            message,
        };
        let p: u64 = digits
            .parse()
            .map_err(|_| bad(format!("unknown field `{t}`; expected q or a prime")))?;
        if !is_prime(p) {
            return Err(bad(format!("{p} is not prime")));
        }
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(bad(format!("GF({p}) is not compiled in; supported primes: {SUPPORTED_PRIMES:?}")));
        }
        Ok(FieldChoice::Prime(p))
    }
}

impl Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rationals => write!(f, "Q"),
            FieldChoice::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_choice_parsing() {
        assert_eq!("q".parse::<FieldChoice>().unwrap(), FieldChoice::Rationals);
        assert_eq!("GF(7)".parse::<FieldChoice>().unwrap(), FieldChoice::Prime(7));
        assert_eq!("101".parse::<FieldChoice>().unwrap(), FieldChoice::Prime(101));
        assert!("9".parse::<FieldChoice>().is_err());
        assert!("11".parse::<FieldChoice>().is_err());
        assert_eq!(FieldChoice::Prime(3).to_string(), "GF(3)");
    }

    #[test]
    fn rational_roundtrip() {
        let q: Q = "-6/4".parse().unwrap();
        assert_eq!(q, Q::new(-3, 2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Q::from_i64(5).to_string(), "5");
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    fn prime_field_inverse() {
        type F7 = Fp<7>;
        for v in 1..7 {
            let x = F7::from_i64(v);
            assert_eq!(x * x.inverse().unwrap(), F7::one());
        }
        assert_eq!(F7::from_i64(-1), F7::from_i64(6));
        assert_eq!("3/2".parse::<F7>().unwrap(), F7::from_i64(5));
        assert!(F7::zero().inverse().is_none());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(65521) && !is_prime(1) && !is_prime(91));
    }
}
