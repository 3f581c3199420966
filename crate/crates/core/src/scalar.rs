//! Numeric back ends for moment evaluation.
//!
//! Two fields are supported: exact arbitrary-precision rationals and `f64`.
//! Exact arithmetic is the default for every verification path; floats are
//! opt-in and summed with Neumaier's compensated scheme.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{MomentError, Result};

/// Relative tolerance for treating a float covariance as symmetric.
pub const FLOAT_SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Arithmetic needed to evaluate a moment polynomial.
pub trait MomentField: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    /// Running sum used when folding terms.
    type Sum: TermSum<Self>;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_biguint(value: &BigUint) -> Self;
    fn from_i64(value: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;

    /// Merges a mirrored pair of covariance entries, or `None` when they are
    /// too far apart to be considered symmetric.
    fn symmetric_merge(upper: &Self, lower: &Self) -> Option<Self>;

    /// Integer power with `0^0 = 1`.
    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// An order-dependent accumulator over field values.
pub trait TermSum<T>: Default + Send {
    fn add(&mut self, value: T);
    fn merge(&mut self, other: Self);
    fn total(self) -> T;
}

impl MomentField for BigRational {
    type Sum = ExactSum;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_biguint(value: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(value.clone()))
    }
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn symmetric_merge(upper: &Self, lower: &Self) -> Option<Self> {
        (upper == lower).then(|| upper.clone())
    }
}

impl MomentField for f64 {
    type Sum = CompensatedSum;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_biguint(value: &BigUint) -> Self {
        value.to_f64().unwrap_or(f64::INFINITY)
    }
    fn from_i64(value: i64) -> Self {
        value as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn symmetric_merge(upper: &Self, lower: &Self) -> Option<Self> {
        let scale = upper.abs().max(lower.abs());
        if (upper - lower).abs() <= FLOAT_SYMMETRY_TOLERANCE * scale {
            Some(0.5 * (upper + lower))
        } else {
            None
        }
    }
    fn pow(&self, exp: u32) -> Self {
        match i32::try_from(exp) {
            Ok(e) => self.powi(e),
            Err(_) => self.powf(exp as f64),
        }
    }
}

/// Plain exact running sum.
#[derive(Debug, Clone, Default)]
pub struct ExactSum(BigRational);

impl TermSum<BigRational> for ExactSum {
    fn add(&mut self, value: BigRational) {
        self.0 += value;
    }
    fn merge(&mut self, other: Self) {
        self.0 += other.0;
    }
    fn total(self) -> BigRational {
        self.0
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl TermSum<f64> for CompensatedSum {
    #[inline]
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: Self) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    fn total(self) -> f64 {
        self.value()
    }
}

/// Evaluation mode selected per call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumericMode {
    #[default]
    Exact,
    Float,
}

impl FromStr for NumericMode {
    type Err = MomentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(NumericMode::Exact),
            "float" => Ok(NumericMode::Float),
            other => Err(MomentError::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

/// A moment value in either numeric mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> NumericMode {
        match self {
            Scalar::Exact(_) => NumericMode::Exact,
            Scalar::Float(_) => NumericMode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => rational_to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }
}

/// Exact values print as `p/q` (or `p` when integral); floats use the
/// shortest round-tripping decimal form.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Scale both sides down when numerator or denominator overflow.
        let (n, d) = (q.numer(), q.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `p/q`, a plain integer, or a decimal literal such as `-1.25e-3`
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || MomentError::Parse(format!("cannot parse '{text}' as a rational"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(MomentError::Parse(format!("zero denominator in '{text}'")));
        }
        return Ok(BigRational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(at) => {
            let exp: i64 = s[at + 1..].parse().map_err(|_| bad())?;
            (&s[..at], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    Ok(value)
}
