//! Exact rational helpers and values that are exact only some of the time.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational.
pub type Q = BigRational;

pub fn int(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

pub fn uint(value: u64) -> Q {
    Q::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Renders as `p/q`, always with an explicit denominator.
pub fn render(value: &Q) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with `digits` significant digits.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

/// Field operations shared by exact rationals and floats, so a bound can be
/// written once and evaluated in whichever arithmetic its inputs allow.
pub trait Real: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> {
    fn from_int(value: i64) -> Self;
}

impl Real for Q {
    fn from_int(value: i64) -> Self {
        int(value)
    }
}

impl Real for f64 {
    fn from_int(value: i64) -> Self {
        value as f64
    }
}

/// A real number carried exactly when it is rational and as a float otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct MaybeExact {
    exact: Option<Q>,
    approx: f64,
}

/// Relative slack used only when a comparison has to fall back to floats.
const FLOAT_SLACK: f64 = 1e-12;

impl MaybeExact {
    pub fn exact(value: Q) -> Self {
        let approx = to_f64(&value);
        Self {
            exact: Some(value),
            approx,
        }
    }

    pub fn irrational(approx: f64) -> Self {
        Self { exact: None, approx }
    }

    pub fn as_exact(&self) -> Option<&Q> {
        self.exact.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.exact.is_some()
    }

    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    /// Applies the same formula in exact and float arithmetic.
    pub fn map(&self, exact: impl Fn(Q) -> Q, approx: impl Fn(f64) -> f64) -> Self {
        match &self.exact {
            Some(q) => Self::exact(exact(q.clone())),
            None => Self::irrational(approx(self.approx)),
        }
    }

    /// `p/q` for rationals, 12 significant digits otherwise.
    pub fn render(&self) -> String {
        match &self.exact {
            Some(q) => render(q),
            None => format_significant(self.approx, 12),
        }
    }

    /// Compares a rational against this value; exact whenever possible.
    pub fn compare(&self, value: &Q) -> Ordering {
        match &self.exact {
            Some(q) => value.cmp(q),
            None => {
                let v = to_f64(value);
                let slack = FLOAT_SLACK * self.approx.abs().max(1.0);
                if (v - self.approx).abs() <= slack {
                    Ordering::Equal
                } else if v < self.approx {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// `value <= self`.
    pub fn admits_below(&self, value: &Q) -> bool {
        self.compare(value) != Ordering::Greater
    }

    /// `value >= self`.
    pub fn admits_above(&self, value: &Q) -> bool {
        self.compare(value) != Ordering::Less
    }
}

impl fmt::Display for MaybeExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Sum of a slice of rationals.
pub fn sum<'a>(values: impl IntoIterator<Item = &'a Q>) -> Q {
    values.into_iter().fold(Q::zero(), |acc, v| acc + v)
}

pub fn abs(value: &Q) -> Q {
    value.abs()
}

pub fn one() -> Q {
    Q::one()
}
