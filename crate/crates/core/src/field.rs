//! Ground fields: prime fields GF(p) and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::FieldError;

/// Which ground field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    PrimeField { characteristic: u64 },
    Rationals,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p < 2 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= 1 << 32 {
            return Err(FieldError::TooLarge(p));
        }
        Ok(FieldSpec::PrimeField { characteristic: p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::PrimeField { characteristic } => *characteristic,
            FieldSpec::Rationals => 0,
        }
    }

    /// Parse `Q`/`q` or a prime.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        let p: u64 = inner
            .parse()
            .map_err(|_| FieldError::Unrecognized(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::PrimeField { characteristic } => write!(f, "GF({characteristic})"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact field arithmetic. Field values are cheap handles; elements carry no
/// reference to their field, so every operation goes through `&self`.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// `None` when the denominator vanishes in the field.
    #[allow(clippy::wrong_self_convention)]
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `acc += a * b`, skipping work when either factor vanishes.
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        if self.is_zero(a) || self.is_zero(b) {
            return;
        }
        *acc = self.add(acc, &self.mul(a, b));
    }

    /// Small integer in `[-3, 3]`; the same draws over every field keep seeded
    /// samples comparable across fields.
    fn sample_small<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.from_i64(rng.gen_range(-3..=3))
    }
}

/// GF(p) for a prime `p < 2^32`, elements stored as canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        FieldSpec::prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField { characteristic: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<u64> {
        let p = BigInt::from(self.p);
        let n = num.mod_floor(&p).to_u64()?;
        let d = den.mod_floor(&p).to_u64()?;
        let d_inv = self.inv(&d)?;
        Some(n * d_inv % self.p)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if (*a).is_multiple_of(self.p) {
            None
        } else {
            // Fermat: a^(p-2) = a^-1.
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul_add_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p;
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn mul_add_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if a.is_integer() && b.is_integer() && acc.is_integer() {
            let v = acc.numer() + a.numer() * b.numer();
            *acc = BigRational::from_integer(v);
        } else {
            *acc += a * b;
        }
    }
}

/// Render a rational the way the presentation grammar reads it back.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom().abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_inverse_round_trips() {
        let f = PrimeField::new(1009).unwrap();
        for a in 1..1009u64 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn rational_division_is_exact() {
        let q = Rationals;
        let a = q.from_ratio(&BigInt::from(7), &BigInt::from(3)).unwrap();
        let b = q.from_i64(-11);
        let quotient = q.mul(&a, &q.inv(&b).unwrap());
        assert_eq!(q.mul(&quotient, &b), a);
    }

    #[test]
    fn ratio_into_prime_field() {
        let f = PrimeField::new(5).unwrap();
        // 1/2 = 3 mod 5
        assert_eq!(f.from_ratio(&BigInt::from(1), &BigInt::from(2)), Some(3));
        assert_eq!(f.from_ratio(&BigInt::from(1), &BigInt::from(5)), None);
        assert_eq!(f.from_i64(-1), 4);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(FieldSpec::parse("q").unwrap(), FieldSpec::Rationals);
        assert_eq!(
            FieldSpec::parse("1009").unwrap(),
            FieldSpec::PrimeField { characteristic: 1009 }
        );
        assert_eq!(
            FieldSpec::parse("GF(7)").unwrap(),
            FieldSpec::PrimeField { characteristic: 7 }
        );
        assert!(FieldSpec::parse("1000").is_err());
        assert!(FieldSpec::parse("1").is_err());
    }
}
