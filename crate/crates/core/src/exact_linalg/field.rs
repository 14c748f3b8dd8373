//! Exact scalar fields: the rationals and prime fields `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a matrix set.
///
/// `Prime` values can only be built through [`FieldSpec::prime`], which
/// checks primality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct FieldSpec(Kind);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rational,
    Prime(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FieldRepr {
    Rational,
    Prime { p: u64 },
}

impl TryFrom<FieldRepr> for FieldSpec {
    type Error = Error;

    fn try_from(repr: FieldRepr) -> Result<Self> {
        match repr {
            FieldRepr::Rational => Ok(FieldSpec::rational()),
            FieldRepr::Prime { p } => FieldSpec::prime(p),
        }
    }
}

impl From<FieldSpec> for FieldRepr {
    fn from(field: FieldSpec) -> Self {
        match field.0 {
            Kind::Rational => FieldRepr::Rational,
            Kind::Prime(p) => FieldRepr::Prime { p },
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rational => write!(f, "Q"),
            Kind::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl FieldSpec {
    pub const fn rational() -> Self {
        FieldSpec(Kind::Rational)
    }

    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec(Kind::Prime(p)))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// The modulus for prime fields, `None` for the rationals.
    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::Rational => None,
            Kind::Prime(p) => Some(p),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.0, Kind::Rational)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, value: i64) -> Scalar {
        match self.0 {
            Kind::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(value))),
            Kind::Prime(p) => Scalar::Residue {
                value: (value as i128).rem_euclid(p as i128) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(&self, value: &BigInt) -> Scalar {
        match self.0 {
            Kind::Rational => Scalar::Rational(BigRational::from_integer(value.clone())),
            Kind::Prime(p) => {
                let r = value.mod_floor(&BigInt::from(p));
                Scalar::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    p,
                }
            }
        }
    }

    /// Parses `"a"` or `"a/b"` with optional leading minus sign. Over a
    /// prime field a fraction means `a * b^-1`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = |reason: &str| Error::InvalidScalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = text.trim();
        let (num, den) = match trimmed.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (trimmed, None),
        };
        let parse_int = |s: &str| -> Result<BigInt> {
            let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("not an integer"));
            }
            s.parse::<BigInt>().map_err(|_| bad("not an integer"))
        };
        let num = parse_int(num)?;
        let Some(den) = den else {
            return Ok(self.from_bigint(&num));
        };
        let den = parse_int(den)?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        match self.0 {
            Kind::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            Kind::Prime(_) => {
                let d = self.from_bigint(&den);
                let inv = d
                    .inv()
                    .ok_or_else(|| bad("denominator vanishes modulo p"))?;
                Ok(&self.from_bigint(&num) * &inv)
            }
        }
    }

    /// Whether `s` is an element of this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self.0, s) {
            (Kind::Rational, Scalar::Rational(_)) => true,
            (Kind::Prime(p), Scalar::Residue { p: q, .. }) => p == *q,
            _ => false,
        }
    }
}

/// An exact field element. Rationals are kept in lowest terms with a
/// positive denominator; residues are kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::rational(),
            Scalar::Residue { p, .. } => FieldSpec(Kind::Prime(*p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: pow_mod(*value, *p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

/// Serialized as its display string: `"a"`, `"a/b"` or a residue.
impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                Scalar::Residue {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                Scalar::Residue {
                    value: ((*a as u128 + *p as u128 - *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                Scalar::Residue {
                    value: mul_mod(*a, *b, *p),
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

impl Scalar {
    /// `self + a * b`, the inner step of every elimination loop.
    pub fn mul_add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (
                Scalar::Residue { value: s, p },
                Scalar::Residue { value: x, .. },
                Scalar::Residue { value: y, .. },
            ) => Scalar::Residue {
                value: ((*s as u128 + *x as u128 * *y as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => self + &(a * b),
        }
    }

    /// Numerator and denominator of a rational value.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
