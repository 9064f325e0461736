//! Exact-or-float scalars.
//!
//! Every coordinate, inner product and determinant in the crate is a [`Num`].
//! Exact values are arbitrary precision rationals kept in lowest terms; float
//! values are `f64` compared with a process-wide tolerance ε using
//! `|a - b| <= ε * max(1, |a|, |b|)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GwlError, Result};

/// Default float tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current float tolerance ε.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Sets the float tolerance ε. Must be positive and finite.
pub fn set_tolerance(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(GwlError::InvalidParameter(format!(
            "tolerance must be positive, got {eps}"
        )));
    }
    TOLERANCE_BITS.store(eps.to_bits(), AtomicOrdering::Relaxed);
    Ok(())
}

/// Numeric mode of a graph or object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Exact,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::Exact => f.write_str("exact"),
            NumericMode::Float => f.write_str("float"),
        }
    }
}

/// A scalar in either exact rational or float mode.
///
/// Mixing modes in arithmetic coerces the result to float. `PartialEq` is
/// exact in exact mode and tolerance-based otherwise.
#[derive(Clone, Debug)]
pub enum Num {
    Exact(BigRational),
    Float(f64),
}

impl Num {
    pub fn zero(mode: NumericMode) -> Num {
        match mode {
            NumericMode::Exact => Num::Exact(BigRational::zero()),
            NumericMode::Float => Num::Float(0.0),
        }
    }

    pub fn one(mode: NumericMode) -> Num {
        match mode {
            NumericMode::Exact => Num::Exact(BigRational::one()),
            NumericMode::Float => Num::Float(1.0),
        }
    }

    pub fn int(v: i64) -> Num {
        Num::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact `p/q`. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Num {
        Num::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn float(v: f64) -> Num {
        Num::Float(v)
    }

    /// An integer in the requested mode.
    pub fn from_i64(v: i64, mode: NumericMode) -> Num {
        match mode {
            NumericMode::Exact => Num::int(v),
            NumericMode::Float => Num::Float(v as f64),
        }
    }

    pub fn mode(&self) -> NumericMode {
        match self {
            Num::Exact(_) => NumericMode::Exact,
            Num::Float(_) => NumericMode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Num::Float(f) => *f,
        }
    }

    pub fn to_float(&self) -> Num {
        Num::Float(self.to_f64())
    }

    pub fn in_mode(&self, mode: NumericMode) -> Num {
        match (self, mode) {
            (Num::Float(_), NumericMode::Float) | (Num::Exact(_), NumericMode::Exact) => {
                self.clone()
            }
            (Num::Exact(_), NumericMode::Float) => self.to_float(),
            (Num::Float(f), NumericMode::Exact) => Num::Exact(
                BigRational::from_float(*f).unwrap_or_else(BigRational::zero),
            ),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Num::Exact(r) => Some(r),
            Num::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Num::Exact(r) => r.is_zero(),
            Num::Float(f) => f.abs() <= tolerance(),
        }
    }

    /// Zero test relative to a magnitude `scale` (used for products such as
    /// determinants, whose rounding grows with the size of the factors).
    pub fn is_zero_rel(&self, scale: f64) -> bool {
        match self {
            Num::Exact(r) => r.is_zero(),
            Num::Float(f) => f.abs() <= tolerance() * scale.abs().max(1.0),
        }
    }

    /// Sign as -1, 0, +1 (0 within tolerance in float mode).
    pub fn signum(&self) -> i8 {
        self.signum_rel(1.0)
    }

    pub fn signum_rel(&self, scale: f64) -> i8 {
        if self.is_zero_rel(scale) {
            return 0;
        }
        match self {
            Num::Exact(r) => {
                if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Num::Float(f) => {
                if *f > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Num {
        match self {
            Num::Exact(r) => Num::Exact(r.abs()),
            Num::Float(f) => Num::Float(f.abs()),
        }
    }

    pub fn square(&self) -> Num {
        self * self
    }

    /// Tolerance-aware comparison: `Equal` whenever the values compare equal
    /// under the numeric policy.
    pub fn cmp_tol(&self, other: &Num) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.total_cmp(other)
        }
    }

    /// A total order used for sorting. Exact values order exactly; floats by
    /// `f64::total_cmp`.
    pub fn total_cmp(&self, other: &Num) -> Ordering {
        match (self, other) {
            (Num::Exact(a), Num::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    /// True when two floats are equal but closer than `10ε` relative to
    /// being unequal, i.e. their separation is fragile.
    pub fn near_boundary(&self, other: &Num) -> bool {
        match (self, other) {
            (Num::Exact(_), Num::Exact(_)) => false,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                let scale = a.abs().max(b.abs()).max(1.0);
                let diff = (a - b).abs();
                diff > tolerance() * scale && diff <= 10.0 * tolerance() * scale
            }
        }
    }

    /// Renders exact values as `p/q` (or `p`) and floats as decimals.
    pub fn to_token(&self) -> String {
        match self {
            Num::Exact(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Num::Float(f) => format!("{f}"),
        }
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Num) -> bool {
        match (self, other) {
            (Num::Exact(a), Num::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                (a - b).abs() <= tolerance() * a.abs().max(b.abs()).max(1.0)
            }
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_token())
    }
}

impl FromStr for Num {
    type Err = GwlError;

    /// Parses `p/q` or an integer as exact, anything else as a float.
    fn from_str(s: &str) -> Result<Num> {
        let s = s.trim();
        let bad = || GwlError::InvalidParameter(format!("not a number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(GwlError::InvalidParameter(format!("zero denominator in {s:?}")));
            }
            return Ok(Num::Exact(BigRational::new(p, q)));
        }
        if let Ok(i) = BigInt::from_str(s) {
            return Ok(Num::Exact(BigRational::from_integer(i)));
        }
        s.parse::<f64>().map(Num::Float).map_err(|_| bad())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Num> for &Num {
            type Output = Num;
            fn $method(self, rhs: &Num) -> Num {
                match (self, rhs) {
                    (Num::Exact(a), Num::Exact(b)) => Num::Exact(a $op b),
                    _ => Num::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait<Num> for Num {
            type Output = Num;
            fn $method(self, rhs: Num) -> Num {
                match (self, rhs) {
                    (Num::Exact(a), Num::Exact(b)) => Num::Exact(a $op b),
                    (a, b) => Num::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl $trait<&Num> for Num {
            type Output = Num;
            fn $method(self, rhs: &Num) -> Num {
                &self $op rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<&Num> for &Num {
    type Output = Num;
    /// Exact division by zero panics, mirroring integer division.
    fn div(self, rhs: &Num) -> Num {
        match (self, rhs) {
            (Num::Exact(a), Num::Exact(b)) => Num::Exact(a / b),
            _ => Num::Float(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl Div<Num> for Num {
    type Output = Num;
    fn div(self, rhs: Num) -> Num {
        &self / &rhs
    }
}

impl Neg for &Num {
    type Output = Num;
    fn neg(self) -> Num {
        match self {
            Num::Exact(a) => Num::Exact(-a),
            Num::Float(f) => Num::Float(-f),
        }
    }
}

impl Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        -&self
    }
}

impl Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Num::Exact(_) => s.serialize_str(&self.to_token()),
            Num::Float(f) => s.serialize_f64(*f),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Num, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Float(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Float(f) => Ok(Num::Float(f)),
        }
    }
}
