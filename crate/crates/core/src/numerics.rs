//! Scalar fields used throughout the crate.
//!
//! [`Rational`] is the exact carrier for every identity check, [`Dual`] adds an
//! infinitesimal part for exact first derivatives, and [`Float`] is the
//! quarantined double-precision path used only where square roots appear.
//! There are no conversions between `Rational` and `Float` besides the
//! explicit [`Rational::to_f64`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rug::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Field element contract shared by the exact, dual and float scalars.
///
/// Arithmetic is by value; the `&Self` right-hand side variants exist so that
/// big-integer heavy code can avoid one clone per operation.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;

    /// True when the element cannot be used as a divisor.
    ///
    /// For [`Dual`] this inspects the value part only.
    fn is_zero(&self) -> bool;

    fn inv(&self) -> Result<Self>;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * &rhs.inv()?)
    }

    /// Equality used when comparing recomputed quantities: exact for the exact
    /// scalars, relative tolerance [`Float::MATCH_TOL`] on the float path.
    fn matches(&self, other: &Self) -> bool {
        self.matches_at_scale(other, 1.0)
    }

    /// Like [`Scalar::matches`], with the float tolerance taken relative to at
    /// least `scale` (the size of the terms that produced the values).
    fn matches_at_scale(&self, other: &Self, _scale: f64) -> bool {
        self == other
    }

    /// Approximate absolute value, for tolerance bookkeeping only.
    fn magnitude(&self) -> f64;

    fn square(&self) -> Self {
        self.clone() * self
    }
}

/// Exact rational number in canonical form (positive denominator, reduced),
/// backed by GMP.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(rug::Rational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(rug::Rational::from((numer, denom))))
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(rug::Rational::from(v))
    }

    pub fn from_big(numer: Integer, denom: Integer) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(rug::Rational::from((numer, denom))))
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    /// Larger of the numerator and denominator bit lengths.
    pub fn bits(&self) -> u64 {
        u64::from(self.numer().significant_bits().max(self.denom().significant_bits()))
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.clone().abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Numerator and denominator as integers.
    pub fn to_fraction(&self) -> (Int, Int) {
        (Int(self.numer().clone()), Int(self.denom().clone()))
    }

    pub fn from_ints(numer: &Int, denom: &Int) -> Result<Self> {
        Rational::from_big(numer.0.clone(), denom.0.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(rug::Rational::from(&self.0 / &rhs.0)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<Integer>()
                .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::from_big(parse(n)?, parse(d)?),
            None => Ok(Rational(rug::Rational::from(parse(s)?))),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $inner:ty, $tr:ident, $method:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $ty(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                $ty(self.0.$method(&rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b $ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: &'b $ty) -> $ty {
                $ty(<$inner>::from((&self.0).$method(&rhs.0)))
            }
        }
    };
}

forward_binop!(Rational, rug::Rational, Add, add);
forward_binop!(Rational, rug::Rational, Sub, sub);
forward_binop!(Rational, rug::Rational, Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational(rug::Rational::new())
    }

    fn one() -> Self {
        Rational(rug::Rational::from(1))
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn inv(&self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.clone().recip()))
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        self.checked_div(rhs)
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

/// Arbitrary-precision integer, used for fraction-free products.
///
/// Only `±1` are invertible; any other division fails.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Int(pub Integer);

impl Int {
    pub fn lcm(&self, other: &Int) -> Int {
        Int(Integer::from(self.0.lcm_ref(&other.0)))
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

forward_binop!(Int, Integer, Add, add);
forward_binop!(Int, Integer, Sub, sub);
forward_binop!(Int, Integer, Mul, mul);

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        Int(-self.0)
    }
}

impl Scalar for Int {
    fn zero() -> Self {
        Int(Integer::new())
    }

    fn one() -> Self {
        Int(Integer::from(1))
    }

    fn from_i64(v: i64) -> Self {
        Int(Integer::from(v))
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn inv(&self) -> Result<Self> {
        match self.0.to_i8() {
            Some(1) | Some(-1) => Ok(self.clone()),
            Some(0) => Err(Error::DivisionByZero),
            _ => Err(Error::Unsupported(format!("{} is not a unit in ℤ", self.0))),
        }
    }

    fn magnitude(&self) -> f64 {
        self.0.to_f64().abs()
    }
}

/// `value + derivative·δ` with `δ² = 0`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Dual<T> {
    pub value: T,
    pub derivative: T,
}

/// Dual numbers over the exact rationals.
pub type DualScalar = Dual<Rational>;

impl<T: Scalar> Dual<T> {
    pub fn new(value: T, derivative: T) -> Self {
        Dual { value, derivative }
    }

    /// A constant (zero derivative).
    pub fn constant(value: T) -> Self {
        Dual { value, derivative: T::zero() }
    }
}

/// Lifts `x` to `x + seed·δ`.
pub fn dual_lift(x: Rational, seed: Rational) -> DualScalar {
    Dual::new(x, seed)
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.value + rhs.value, self.derivative + rhs.derivative)
    }
}

impl<'a, T: Scalar> Add<&'a Dual<T>> for Dual<T> {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        Dual::new(self.value + &rhs.value, self.derivative + &rhs.derivative)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.value - rhs.value, self.derivative - rhs.derivative)
    }
}

impl<'a, T: Scalar> Sub<&'a Dual<T>> for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: &'a Self) -> Self {
        Dual::new(self.value - &rhs.value, self.derivative - &rhs.derivative)
    }
}

impl<'a, T: Scalar> Mul<&'a Dual<T>> for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        let derivative = self.value.clone() * &rhs.derivative + self.derivative * &rhs.value;
        Dual::new(self.value * &rhs.value, derivative)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.value, -self.derivative)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }

    fn one() -> Self {
        Dual::constant(T::one())
    }

    fn from_i64(v: i64) -> Self {
        Dual::constant(T::from_i64(v))
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn inv(&self) -> Result<Self> {
        let r = self.value.inv()?;
        let derivative = -(self.derivative.clone() * &r * &r);
        Ok(Dual::new(r, derivative))
    }

    fn matches_at_scale(&self, other: &Self, scale: f64) -> bool {
        self.value.matches_at_scale(&other.value, scale) && self.derivative.matches_at_scale(&other.derivative, scale)
    }

    fn magnitude(&self) -> f64 {
        self.value.magnitude()
    }
}

/// Double-precision scalar for the ε-deformed families.
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug, Default)]
pub struct Float(pub f64);

impl Float {
    /// Relative tolerance used by [`Scalar::matches`] on the float path.
    pub const MATCH_TOL: f64 = 1e-7;

    pub fn sqrt(self) -> Result<Float> {
        if self.0 < 0.0 {
            return Err(Error::NegativeRadicand(self.0));
        }
        Ok(Float(self.0.sqrt()))
    }

    pub fn abs(self) -> Float {
        Float(self.0.abs())
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

macro_rules! float_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for Float {
            type Output = Float;
            fn $method(self, rhs: Float) -> Float {
                Float(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Float> for Float {
            type Output = Float;
            fn $method(self, rhs: &'a Float) -> Float {
                Float(self.0 $op rhs.0)
            }
        }
    };
}

float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    fn zero() -> Self {
        Float(0.0)
    }

    fn one() -> Self {
        Float(1.0)
    }

    fn from_i64(v: i64) -> Self {
        Float(v as f64)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }

    fn inv(&self) -> Result<Self> {
        if self.0 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Float(1.0 / self.0))
    }

    fn matches_at_scale(&self, other: &Self, scale: f64) -> bool {
        let scale = self.0.abs().max(other.0.abs()).max(scale).max(1.0);
        (self.0 - other.0).abs() <= Self::MATCH_TOL * scale
    }

    fn magnitude(&self) -> f64 {
        self.0.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn small_fraction_addition() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
    }

    #[test]
    fn canonical_form() {
        let r = q(2, 4);
        assert_eq!(r, q(1, 2));
        assert_eq!(r.to_string(), "1/2");
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!(q(4, 2).to_string(), "2");
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(q(3, 7).checked_div(&Rational::zero()), Err(Error::DivisionByZero)));
        assert!(matches!(Rational::new(1, 0), Err(Error::DivisionByZero)));
        assert!(matches!(Rational::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn parse_and_serialize() {
        let r: Rational = "-6/4".parse().unwrap();
        assert_eq!(r, q(-3, 2));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_integer(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        let json = serde_json::to_string(&q(5, -10)).unwrap();
        assert_eq!(json, "\"-1/2\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q(-1, 2));
    }

    #[test]
    fn dual_square() {
        let x = dual_lift(Rational::from_integer(3), Rational::one());
        let sq = x.clone() * &x;
        assert_eq!(sq.value, Rational::from_integer(9));
        assert_eq!(sq.derivative, Rational::from_integer(6));
    }

    #[test]
    fn dual_constant_seed() {
        let x = dual_lift(q(5, 3), Rational::zero());
        let f = (x.clone() * &x + DualScalar::one()).inv().unwrap() * &x;
        assert_eq!(f.derivative, Rational::zero());
    }

    #[test]
    fn dual_quotient_rule() {
        // f(x) = 1/(1+x) at x = 1: value 1/2, derivative -1/(1+x)^2 = -1/4
        let x = dual_lift(Rational::one(), Rational::one());
        let f = (DualScalar::one() + x).inv().unwrap();
        assert_eq!(f.value, q(1, 2));
        assert_eq!(f.derivative, q(-1, 4));
    }

    #[test]
    fn dual_division_requires_nonzero_value() {
        let d = Dual::new(Rational::zero(), Rational::one());
        assert!(d.inv().is_err());
    }

    #[test]
    fn float_matches_is_relative() {
        assert!(Float(1e9).matches(&Float(1e9 + 1.0)));
        assert!(!Float(1.0).matches(&Float(1.001)));
        assert!(Float(-1.0).sqrt().is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!((a.clone() + &b) + &c, a.clone() + &(b.clone() + &c));
            prop_assert_eq!((a.clone() * &b) * &c, a.clone() * &(b.clone() * &c));
            prop_assert_eq!(a.clone() * &(b.clone() + &c), a.clone() * &b + a.clone() * &c);
            prop_assert_eq!(a.clone() - &a, Rational::zero());
            if !b.is_zero() {
                prop_assert_eq!(a.div(&b).unwrap() * &b, a.clone());
            }
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }

        #[test]
        fn dual_matches_symbolic_derivative(x in arb_rational()) {
            // f(x) = (x^3 - 2x) / (x^2 + 1), f' = (x^4 + 5x^2 - 2) / (x^2 + 1)^2
            let one = Rational::one();
            let two = Rational::from_integer(2);
            let d = dual_lift(x.clone(), one.clone());
            let num = d.clone() * &d * &d - Dual::constant(two.clone()) * &d;
            let den = d.clone() * &d + DualScalar::one();
            let f = num.div(&den).unwrap();
            let x2 = x.clone() * &x;
            let expected = (x2.clone() * &x2 + Rational::from_integer(5) * &x2 - two)
                .div(&((x2.clone() + &one) * &(x2 + &one)))
                .unwrap();
            prop_assert_eq!(f.derivative, expected);
        }
    }
}
