//! Exact objective values.
//!
//! Every instance this library accepts has integer or exact-decimal
//! coefficients, so all function values are exact rationals and every
//! comparison made by the solvers (in particular the strict descent test
//! `f(x + s + t) < f(x)`) is decided without tolerance.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::ValueParseError;

/// An exact rational number with 128-bit numerator and denominator.
///
/// Desk-scale instances keep coordinates at |x(i)| <= 10^9, so even a
/// quadratic term with 10^9-scale weight and center stays far inside i128.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(Ratio<i128>);

impl Value {
    pub const ZERO: Value = Value(Ratio::new_raw(0, 1));
    pub const ONE: Value = Value(Ratio::new_raw(1, 1));

    pub fn from_int(n: i64) -> Self {
        Value(Ratio::from_integer(n as i128))
    }

    pub fn new(numer: i128, denom: i128) -> Self {
        Value(Ratio::new(numer, denom))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Value(self.0.abs())
    }

    /// Renders the value exactly: as a plain integer, as a terminating
    /// decimal when the denominator is of the form 2^a * 5^b, and as
    /// `numer/denom` otherwise. `parse` accepts all three forms.
    pub fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            return write!(f, "{}", self.0.numer());
        }
        if let Some(s) = decimal_form(&self.0) {
            return write!(f, "{s}");
        }
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Terminating decimal expansion, if one exists.
fn decimal_form(r: &Ratio<i128>) -> Option<String> {
    let mut d = *r.denom();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return None;
    }
    let digits = twos.max(fives);
    // scale numerator so the denominator becomes 10^digits
    let scale = 2i128.checked_pow(digits - twos)? * 5i128.checked_pow(digits - fives)?;
    let scaled = r.numer().checked_mul(scale)?;
    let ten = 10i128.checked_pow(digits)?;
    let sign = if scaled < 0 { "-" } else { "" };
    let mag = scaled.unsigned_abs();
    let int_part = mag / ten.unsigned_abs();
    let frac_part = mag % ten.unsigned_abs();
    Some(format!(
        "{sign}{int_part}.{frac:0>width$}",
        frac = frac_part,
        width = digits as usize
    ))
}

impl FromStr for Value {
    type Err = ValueParseError;

    /// Parses `"3"`, `"-2.5"`, or `"7/4"` exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ValueParseError {
            input: s.to_string(),
        };
        if let Some((n, d)) = s.split_once('/') {
            let numer: i128 = n.trim().parse().map_err(|_| bad())?;
            let denom: i128 = d.trim().parse().map_err(|_| bad())?;
            if denom == 0 {
                return Err(bad());
            }
            return Ok(Value(Ratio::new(numer, denom)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int_part.trim_start().starts_with('-');
            let int: i128 = if int_part == "-" || int_part.is_empty() {
                0
            } else {
                int_part.parse().map_err(|_| bad())?
            };
            let frac: i128 = frac_part.parse().map_err(|_| bad())?;
            let denom = 10i128.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
            let magnitude = int.unsigned_abs() as i128 * denom + frac;
            let numer = if negative { -magnitude } else { magnitude };
            return Ok(Value(Ratio::new(numer, denom)));
        }
        let n: i128 = s.parse().map_err(|_| bad())?;
        Ok(Value(Ratio::from_integer(n)))
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::from_int(n)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        Value(self.0 + rhs.0)
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        Value(self.0 - rhs.0)
    }
}

impl Mul for Value {
    type Output = Value;
    fn mul(self, rhs: Value) -> Value {
        Value(self.0 * rhs.0)
    }
}

impl Div for Value {
    type Output = Value;
    fn div(self, rhs: Value) -> Value {
        Value(self.0 / rhs.0)
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |a, b| a + b)
    }
}

impl Zero for Value {
    fn zero() -> Self {
        Value::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}
