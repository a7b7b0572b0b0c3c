//! Exact scalar fields: prime fields GF(p) with `p < 2^31` and the rationals.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Runtime description of a field: characteristic 0 means the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(rename = "char")]
    pub characteristic: u64,
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic != 0 && (characteristic >= 1 << 31 || !is_prime(characteristic)) {
            return Err(Error::InvalidField(format!(
                "characteristic {characteristic} is neither 0 nor a prime below 2^31"
            )));
        }
        Ok(FieldSpec { characteristic })
    }

    pub fn rationals() -> Self {
        FieldSpec { characteristic: 0 }
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "GF({p})"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Field arithmetic over an element type. Implementations are cheap to clone
/// and carry whatever runtime data they need (the prime, for GF(p)).
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero; callers only invert pivots.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_int(&self, v: &BigInt) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;
    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;
    fn from_json(&self, v: &serde_json::Value) -> Result<Self::Elem>;

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_int(&BigInt::from(v))
    }

    /// `row -= c * other`, starting at column `from`.
    fn axpy_neg(&self, row: &mut [Self::Elem], other: &[Self::Elem], c: &Self::Elem, from: usize) {
        for (x, y) in row[from..].iter_mut().zip(&other[from..]) {
            if !self.is_zero(y) {
                *x = self.sub(x, &self.mul(c, y));
            }
        }
    }

    fn scale(&self, row: &mut [Self::Elem], c: &Self::Elem, from: usize) {
        for x in &mut row[from..] {
            if !self.is_zero(x) {
                *x = self.mul(x, c);
            }
        }
    }
}

/// The prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidField(
                "characteristic 0 is not a prime field".into(),
            ));
        }
        FieldSpec::new(p)?;
        Ok(PrimeField { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce(&self, v: i128) -> u32 {
        v.rem_euclid(self.p as i128) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec {
            characteristic: self.p as u64,
        }
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero in GF({})", self.p);
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (*a as u64, self.p as u64 - 2, 1u64);
        let m = self.p as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }
    fn from_int(&self, v: &BigInt) -> u32 {
        let r = v % BigInt::from(self.p);
        self.reduce(r.to_i128().expect("reduced value fits"))
    }
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce(v as i128)
    }
    fn from_rational(&self, q: &Rational) -> Result<u32> {
        let den = self.from_int(q.denom());
        if den == 0 {
            return Err(Error::Domain(format!(
                "{} has a denominator divisible by {}",
                rational::to_text(q),
                self.p
            )));
        }
        Ok(self.mul(&self.from_int(q.numer()), &self.inv(&den)))
    }
    fn to_json(&self, a: &u32) -> serde_json::Value {
        serde_json::Value::from(*a)
    }
    fn from_json(&self, v: &serde_json::Value) -> Result<u32> {
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|i| self.from_i64(i))
                .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
            serde_json::Value::String(s) => self.from_rational(&rational::parse(s)?),
            other => Err(Error::Parse(format!("not a scalar: {other}"))),
        }
    }

    fn axpy_neg(&self, row: &mut [u32], other: &[u32], c: &u32, from: usize) {
        let m = self.p as u64;
        let negc = (m - *c as u64) % m;
        for (x, y) in row[from..].iter_mut().zip(&other[from..]) {
            if *y != 0 {
                *x = ((*x as u64 + negc * *y as u64) % m) as u32;
            }
        }
    }
}

/// The rational numbers, with arbitrary-precision entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::rationals()
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Rational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn from_int(&self, v: &BigInt) -> Rational {
        Rational::from_integer(v.clone())
    }
    fn from_rational(&self, q: &Rational) -> Result<Rational> {
        Ok(q.clone())
    }
    fn to_json(&self, a: &Rational) -> serde_json::Value {
        serde_json::Value::from(rational::to_text(a))
    }
    fn from_json(&self, v: &serde_json::Value) -> Result<Rational> {
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(rational::from_int)
                .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
            serde_json::Value::String(s) => rational::parse(s),
            other => Err(Error::Parse(format!("not a scalar: {other}"))),
        }
    }
}

/// Sign-free rendering for logs; not used in certificates.
pub fn describe<F: Field>(field: &F, a: &F::Elem) -> String {
    match field.to_json(a) {
        serde_json::Value::String(s) => s,
        v => v.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(FieldSpec::new(0).is_ok());
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(2_147_483_647).is_ok());
        assert!(matches!(FieldSpec::new(4), Err(Error::InvalidField(_))));
        assert!(matches!(FieldSpec::new(1), Err(Error::InvalidField(_))));
        assert!(PrimeField::new(0).is_err());
    }

    #[test]
    fn prime_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7u32 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
            assert_eq!(f.add(&a, &f.neg(&a)), 0);
        }
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.from_rational(&rational::ratio(1, 2)).unwrap(), 4);
        assert!(f.from_rational(&rational::ratio(1, 7)).is_err());
        let big = PrimeField::new(2_147_483_647).unwrap();
        let x = 2_147_483_646u32;
        assert_eq!(big.mul(&x, &x), 1);
    }

    #[test]
    fn json_scalars() {
        let q = Rationals;
        assert_eq!(
            q.from_json(&serde_json::json!("3/6")).unwrap(),
            rational::ratio(1, 2)
        );
        assert_eq!(q.to_json(&rational::ratio(2, 1)), serde_json::json!("2/1"));
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.from_json(&serde_json::json!(5)).unwrap(), 2);
        assert_eq!(f.from_json(&serde_json::json!("1/2")).unwrap(), 2);
    }
}
