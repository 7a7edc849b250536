//! Exact scalar arithmetic: arbitrary-precision rationals and prime-field residues.
//!
//! A [`Field`] names the coefficient field of a computation; a [`Scalar`] is an
//! element of one. Arithmetic between scalars of different fields is a
//! programming error and panics, mirroring how shape mismatches are treated in
//! numeric libraries. Fallible construction (primality of `p`, invertibility of
//! denominators in GF(p)) goes through `Result`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field: the rationals or GF(p) for a prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds GF(p), validating that `p` is prime.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime_u64(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod { value: 0, modulus: p },
        }
    }

    pub fn one(self) -> Scalar {
        self.integer(1)
    }

    pub fn integer(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => {
                let r = (n as i128).rem_euclid(p as i128) as u64;
                Scalar::Mod { value: r, modulus: p }
            }
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let r = n.mod_floor(&m);
                Scalar::Mod { value: r.to_u64().expect("residue fits in u64"), modulus: p }
            }
        }
    }

    /// num/den as a field element. In GF(p) the denominator is inverted mod p;
    /// a denominator divisible by p is rejected.
    pub fn ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::Document("zero denominator".into()));
        }
        match self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(_) => {
                let d = self.from_bigint(den);
                if d.is_zero() {
                    return Err(Error::Document(format!(
                        "denominator {den} is zero in {self}"
                    )));
                }
                Ok(self.from_bigint(num).mul(&d.inv()))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF {p}"),
        }
    }
}

/// An element of a [`Field`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                assert_eq!(p, q, "mixed moduli");
                Scalar::Mod { value: ((*a as u128 + *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => panic!("mixed scalar fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => {
                let v = if *value == 0 { 0 } else { modulus - value };
                Scalar::Mod { value: v, modulus: *modulus }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                assert_eq!(p, q, "mixed moduli");
                Scalar::Mod { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => panic!("mixed scalar fields"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Rat(a.recip())
            }
            Scalar::Mod { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                Scalar::Mod { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Total order used for deterministic output (factor lists, basis sorting).
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Mod { value: a, .. }, Scalar::Mod { value: b, .. }) => a.cmp(b),
            _ => panic!("mixed scalar fields"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

/// True when the rational scalar is negative; prime-field residues are never
/// printed with a sign.
pub(crate) fn is_negative(s: &Scalar) -> bool {
    match s {
        Scalar::Rat(r) => r.is_negative(),
        Scalar::Mod { .. } => false,
    }
}

pub(crate) fn abs(s: &Scalar) -> Scalar {
    match s {
        Scalar::Rat(r) => Scalar::Rat(r.abs()),
        Scalar::Mod { .. } => s.clone(),
    }
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set below is exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
