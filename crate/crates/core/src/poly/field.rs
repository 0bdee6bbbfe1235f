//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The coefficient field a computation runs over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum FieldKind {
    /// The rationals.
    Rational,
    /// The prime field with the given modulus.
    Prime(u64),
}

impl FieldKind {
    pub fn validated(self) -> Result<Self, Error> {
        match self {
            FieldKind::Rational => Ok(self),
            FieldKind::Prime(p) if is_prime_u64(p) => Ok(self),
            FieldKind::Prime(p) => Err(Error::NotPrime(p)),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "QQ"),
            FieldKind::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "QQ" {
            return Ok(FieldKind::Rational);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime modulus `{rest}`")))?;
            return FieldKind::Prime(p).validated();
        }
        Err(Error::Parse(format!(
            "unknown field `{s}` (expected QQ or Fp:<prime>)"
        )))
    }
}

/// Deterministic Miller–Rabin, exhaustive for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An element of the active coefficient field.
///
/// Prime-field elements carry their modulus so that values stay
/// self-contained; mixing moduli (or a rational with a prime-field value)
/// is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Coeff {
    Rat(BigRational),
    Fp { p: u64, val: u64 },
}

impl Coeff {
    pub fn zero(field: FieldKind) -> Self {
        match field {
            FieldKind::Rational => Coeff::Rat(BigRational::zero()),
            FieldKind::Prime(p) => Coeff::Fp { p, val: 0 },
        }
    }

    pub fn one(field: FieldKind) -> Self {
        match field {
            FieldKind::Rational => Coeff::Rat(BigRational::one()),
            FieldKind::Prime(p) => Coeff::Fp { p, val: 1 },
        }
    }

    pub fn from_i64(v: i64, field: FieldKind) -> Self {
        match field {
            FieldKind::Rational => Coeff::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldKind::Prime(p) => {
                let val = v.rem_euclid(p as i64) as u64;
                Coeff::Fp { p, val }
            }
        }
    }

    /// Builds `num/den` in the given field. Fails when `den` is zero in it.
    pub fn from_ratio(num: i64, den: i64, field: FieldKind) -> Result<Self, Error> {
        let d = Coeff::from_i64(den, field);
        if d.is_zero() {
            return Err(Error::Parse(format!(
                "denominator {den} is zero in {field}"
            )));
        }
        Ok(Coeff::from_i64(num, field).div(&d))
    }

    pub fn field(&self) -> FieldKind {
        match self {
            Coeff::Rat(_) => FieldKind::Rational,
            Coeff::Fp { p, .. } => FieldKind::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_one(),
            Coeff::Fp { val, .. } => *val == 1,
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a + b),
            (Coeff::Fp { p, val: a }, Coeff::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "coefficient field mismatch");
                Coeff::Fp {
                    p: *p,
                    val: ((*a as u128 + *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("coefficient field mismatch"),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rat(a) => Coeff::Rat(-a),
            Coeff::Fp { p, val } => Coeff::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            (Coeff::Fp { p, val: a }, Coeff::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "coefficient field mismatch");
                Coeff::Fp {
                    p: *p,
                    val: mul_mod(*a, *b, *p),
                }
            }
            _ => panic!("coefficient field mismatch"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Coeff {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Coeff::Rat(a) => Coeff::Rat(a.recip()),
            Coeff::Fp { p, val } => Coeff::Fp {
                p: *p,
                val: pow_mod(*val, p - 2, *p),
            },
        }
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        self.mul(&other.inv())
    }

    /// True for rationals strictly below zero (used only for display).
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_negative(),
            Coeff::Fp { .. } => false,
        }
    }

    /// Absolute value in the rational case, identity otherwise.
    pub fn abs(&self) -> Coeff {
        match self {
            Coeff::Rat(r) => Coeff::Rat(r.abs()),
            c => c.clone(),
        }
    }

    /// Total order used for deterministic tie-breaking, not field structure.
    pub fn cmp_total(&self, other: &Coeff) -> Ordering {
        match (self, other) {
            (Coeff::Rat(a), Coeff::Rat(b)) => a.cmp(b),
            (Coeff::Fp { val: a, .. }, Coeff::Fp { val: b, .. }) => a.cmp(b),
            _ => panic!("coefficient field mismatch"),
        }
    }

    /// Approximate magnitude as a float (feature extraction only).
    pub fn magnitude(&self) -> f64 {
        match self {
            Coeff::Rat(r) => r.to_f64().map(f64::abs).unwrap_or(f64::MAX),
            Coeff::Fp { val, .. } => *val as f64,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Coeff::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}
