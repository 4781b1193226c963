//! Numeric plumbing shared by every module.
//!
//! Payoffs are generic over [`Scalar`]: exact [`Rational`] for closed-form
//! fixtures, `f64` for quadrature-backed games. Strict comparisons go through
//! [`exceeds`], which subtracts the scalar's declared tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub type Rational = BigRational;

/// Tolerance applied to float payoff comparisons.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Slack for strict comparisons; zero for exact arithmetic.
    fn tolerance() -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_finite(&self) -> bool;
    fn abs(&self) -> Self;
    /// JSON form: `"p/q"` strings for rationals, numbers for floats.
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self>;
    fn is_exact() -> bool;
}

impl Scalar for Rational {
    fn tolerance() -> Self {
        Zero::zero()
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(invalid(format!("expected a rational, found {other}"))),
        }
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        FLOAT_TOLERANCE
    }
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| invalid(format!("number {n} is not representable"))),
            serde_json::Value::String(s) => Ok(Scalar::to_f64(&parse_rational(s)?)),
            other => Err(invalid(format!("expected a number, found {other}"))),
        }
    }
    fn is_exact() -> bool {
        false
    }
}

/// `a - b > tolerance`.
pub fn exceeds<P: Scalar>(a: &P, b: &P) -> bool {
    a.clone() - b.clone() > P::tolerance()
}

/// `a - b >= -tolerance`.
pub fn at_least<P: Scalar>(a: &P, b: &P) -> bool {
    a.clone() - b.clone() >= -P::tolerance()
}

pub fn min_of<P: Scalar>(a: P, b: P) -> P {
    if b < a {
        b
    } else {
        a
    }
}

pub fn max_of<P: Scalar>(a: P, b: P) -> P {
    if b > a {
        b
    } else {
        a
    }
}

pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.05"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || invalid(format!("cannot parse {s:?} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad());
    }
    let n = BigInt::from_str(&digits).map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Always `"p/q"`, including integers (`"1/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Odd multiples of `2^-level` in (0, 1): points that avoid every dyadic
/// breakpoint of coarser level.
pub fn dyadic_midpoints(level: u32) -> Vec<Rational> {
    let den = 1i64 << level;
    (0..den / 2).map(|k| q(2 * k + 1, den)).collect()
}

pub(crate) mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        <Rational as Scalar>::from_json(&v).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_q_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter()
            .map(|x| <Rational as Scalar>::from_json(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod serde_q_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        v.map(|x| <Rational as Scalar>::from_json(&x).map_err(serde::de::Error::custom))
            .transpose()
    }
}
