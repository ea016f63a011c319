//! Numeric modes.
//!
//! Set computations run over exact rationals; sampling, QRE and data analysis
//! run over `f64` with a scale-aware tie tolerance. Everything that needs to
//! work in both modes is generic over [`Scalar`].

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers.
pub type Q = BigRational;

/// Tie tolerance for float mode.
pub const EPS_TIE: f64 = 1e-9;

/// Float tie test: `|a-b| <= eps * max(1, |a|, |b|)`.
pub fn float_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS_TIE * 1f64.max(a.abs()).max(b.abs())
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// True for exact rational arithmetic.
    const EXACT: bool;

    fn from_q(q: &Q) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Pick the matching representation of a value known in both modes.
    fn from_pair(q: &Q, f: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Comparison that reports `Equal` for ties (exact in rational mode).
    fn cmp_tie(&self, other: &Self) -> Ordering;

    fn sign(&self) -> Ordering {
        self.cmp_tie(&Self::zero())
    }

    fn is_zero_tie(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn abs_val(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_q(q: &Q) -> Self {
        q_to_f64(q)
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_pair(_: &Q, f: f64) -> Self {
        f
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn cmp_tie(&self, other: &Self) -> Ordering {
        if float_tie(*self, *other) {
            Ordering::Equal
        } else if self < other {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl Scalar for Q {
    const EXACT: bool = true;
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn from_pair(q: &Q, _: f64) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        q_to_f64(self)
    }
    fn cmp_tie(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

fn q_to_f64(q: &Q) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator/denominator: scale down before dividing
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// `n/d` as an exact rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exact rational value of a finite float.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// Render a rational as `"num/den"` (or `"num"` for integers).
pub fn q_to_string(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parse `"num/den"`, `"num"` or a finite decimal like `"2.5"` into an exact rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

/// Sum of a slice of scalars.
pub fn sum<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |acc, x| acc + x.clone())
}

/// Dot product.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}
