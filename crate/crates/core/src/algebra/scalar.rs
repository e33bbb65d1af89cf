//! Scalar field abstraction over exact rationals and `f64`.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::ParseScalarError;

/// Exact arbitrary-precision rational number, always kept in lowest terms
/// with a positive denominator.
pub type Rational = BigRational;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Rational,
    F64,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::F64 => "f64",
        }
    }
}

impl Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(Mode::Rational),
            "f64" => Ok(Mode::F64),
            other => Err(format!("unknown mode `{other}` (expected `rational` or `f64`)")),
        }
    }
}

/// A field element usable as a matrix entry.
///
/// The mode is a property of the type, so a single computation can never mix
/// rational and floating-point entries.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn from_integer(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self;

    fn abs(&self) -> Self;

    fn to_f64(&self) -> f64;

    /// Parse a textual literal: `"p/q"` or `"n"` for both modes, plus any
    /// decimal float syntax in `f64` mode.
    fn parse_literal(s: &str) -> Result<Self, ParseScalarError>;

    /// Read a JSON value (string literal or number).
    fn from_json(v: &Value) -> Result<Self, ParseScalarError>;

    /// Lossless JSON encoding: rationals as strings, floats as numbers.
    fn to_json(&self) -> Value;

    /// Lossless textual encoding, inverse of [`Scalar::parse_literal`].
    fn to_literal(&self) -> String;

    /// Fixed-point rendering with `digits` fractional digits.
    fn to_decimal(&self, digits: usize) -> String;

    /// Convert from an exact rational (rounding in `f64` mode).
    fn from_rational(r: &Rational) -> Self;

    /// `self += c * x`.
    fn add_int_multiple(&mut self, c: &BigInt, x: &Self) {
        if !x.is_zero() {
            let sum = std::mem::replace(self, Self::zero()) + Self::from_integer(c) * x.clone();
            *self = sum;
        }
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

fn parse_rational_str(s: &str) -> Result<Rational, ParseScalarError> {
    let t = s.trim();
    let bad = || ParseScalarError::Malformed(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |x: &str| -> Result<BigInt, ParseScalarError> {
        let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        x.parse::<BigInt>().map_err(|_| bad())
    };
    let n = parse_int(num)?;
    let d = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ParseScalarError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_integer(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_literal(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational_str(s)
    }

    fn from_json(v: &Value) -> Result<Self, ParseScalarError> {
        match v {
            Value::String(s) => parse_rational_str(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(<Self as Scalar>::from_i64(i))
                } else if let Some(u) = n.as_u64() {
                    Ok(Rational::from_integer(BigInt::from(u)))
                } else {
                    Err(ParseScalarError::InexactNumber(n.to_string()))
                }
            }
            other => Err(ParseScalarError::WrongType(json_kind(other))),
        }
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn to_literal(&self) -> String {
        self.to_string()
    }

    fn to_decimal(&self, digits: usize) -> String {
        rational_to_decimal(self, digits)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn add_int_multiple(&mut self, c: &BigInt, x: &Self) {
        if x.is_zero() {
            return;
        }
        // Integer operands skip the gcd normalisation entirely.
        if self.is_integer() && x.is_integer() {
            let sum = std::mem::replace(self, Rational::zero()).to_integer() + c * x.numer();
            *self = Rational::from_integer(sum);
        } else {
            let sum = std::mem::replace(self, Rational::zero()) + Rational::new(c * x.numer(), x.denom().clone());
            *self = sum;
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::F64;

    fn from_integer(n: &BigInt) -> Self {
        ToPrimitive::to_f64(n).unwrap_or(f64::NAN)
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_literal(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        if t.contains('/') {
            return parse_rational_str(t).map(|r| Scalar::to_f64(&r));
        }
        let x: f64 = t
            .parse()
            .map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(ParseScalarError::NonFinite(s.to_string()))
        }
    }

    fn from_json(v: &Value) -> Result<Self, ParseScalarError> {
        match v {
            Value::String(s) => Self::parse_literal(s),
            Value::Number(n) => n
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ParseScalarError::NonFinite(n.to_string())),
            other => Err(ParseScalarError::WrongType(json_kind(other))),
        }
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn to_literal(&self) -> String {
        // `{:?}` is the shortest representation that parses back bit-exactly.
        format!("{self:?}")
    }

    fn to_decimal(&self, digits: usize) -> String {
        format!("{self:.digits$}")
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }
}

/// Exact conversion of a finite `f64` into a rational.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    num_traits::FromPrimitive::from_f64(x)
}

pub(crate) fn json_kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// Render a rational as a decimal rounded half away from zero to `digits`
/// fractional digits.
pub fn rational_to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let mag = Signed::abs(&scaled);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let rounded = (mag + half).floor().to_integer();
    let int_part = &rounded / &scale;
    let frac_part = &rounded % &scale;
    let sign = if neg && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}
