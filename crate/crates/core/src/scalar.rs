//! Coefficient fields.
//!
//! Everything downstream is generic over [`Scalar`]: exact [`Rational`]s for the
//! identity checks, [`BigFloat`] when a parameter such as `s = xi^(1/m)` is
//! irrational, and [`Jet`] for exact first derivatives.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu::base::{Abs, SquareRoot};
use dashu::float::round::mode::HalfEven;
use dashu::float::FBig;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;

use crate::error::{Error, Result};

/// A field element usable as polynomial / matrix coefficient.
///
/// Constants are built from a context (`Ctx`) so that floating values carry
/// their working precision from the start.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    type Ctx: Clone + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rational(r: &Rational, ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    /// True for fields with exact arithmetic, where residuals must vanish identically.
    fn is_exact() -> bool;
    /// Size of the value for residual reporting. For jets this is the larger of both parts.
    fn magnitude(&self) -> f64;
    /// `(numerator, denominator)` strings for the JSON polynomial schema.
    fn json_parts(&self) -> (String, String);

    /// Residual threshold appropriate to the working precision: zero for exact
    /// fields, `2^-(bits/2)` for floating ones.
    fn tolerance(&self) -> f64 {
        0.0
    }

    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self {
        Self::from_rational(&Rational::from(n), ctx)
    }

    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx())
    }

    fn one_like(&self) -> Self {
        Self::one(&self.ctx())
    }

    fn inv(&self) -> Self {
        self.one_like() / self
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn pow_i(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.one_like();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }
}

/// Ordered scalars with transcendental functions (numeric mode only).
pub trait Real: Scalar + PartialOrd {
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn precision_bits(&self) -> usize;
    fn to_f64(&self) -> f64 {
        self.magnitude() * if self < &self.zero_like() { -1.0 } else { 1.0 }
    }
}

macro_rules! forward_binops {
    ($ty:ident) => {
        forward_binops!(@op $ty, Add, add);
        forward_binops!(@op $ty, Sub, sub);
        forward_binops!(@op $ty, Mul, mul);
        forward_binops!(@op $ty, Div, div);
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(-self.0)
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(-self.0.clone())
            }
        }
    };
    (@op $ty:ident, $tr:ident, $m:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                $ty($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty {
                $ty($tr::$m(self.0, &rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b $ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, rhs: &'b $ty) -> $ty {
                $ty($tr::$m(&self.0, &rhs.0))
            }
        }
    };
}

/// Exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(RBig);

forward_binops!(Rational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational(RBig::from_parts_signed(IBig::from(num), IBig::from(den)))
    }

    pub fn from_parts(num: IBig, den: IBig) -> Result<Rational> {
        if den == IBig::ZERO {
            return Err(Error::Argument("zero denominator".into()));
        }
        Ok(Rational(RBig::from_parts_signed(num, den)))
    }

    pub fn numerator(&self) -> &IBig {
        self.0.numerator()
    }

    pub fn denominator(&self) -> &UBig {
        self.0.denominator()
    }

    pub fn inner(&self) -> &RBig {
        &self.0
    }

    pub fn is_negative(&self) -> bool {
        self.0.numerator() < &IBig::ZERO
    }

    pub fn is_positive(&self) -> bool {
        self.0.numerator() > &IBig::ZERO
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.clone().abs())
    }

    /// Square root if this is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let num = UBig::try_from(self.0.numerator().clone()).ok()?;
        let den = self.0.denominator().clone();
        let rn = num.sqrt();
        let rd = den.sqrt();
        if &rn * &rn == num && &rd * &rd == den {
            Some(Rational(RBig::from_parts(IBig::from(rn), rd)))
        } else {
            None
        }
    }

    pub fn to_bigfloat(&self, precision: usize) -> BigFloat {
        BigFloat(self.0.to_float::<HalfEven, 2>(precision).value())
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational(RBig::from(n))
    }
}

impl Default for Rational {
    fn default() -> Rational {
        Rational(RBig::ZERO)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denominator() == &UBig::ONE {
            write!(f, "{}", self.0.numerator())
        } else {
            write!(f, "{}/{}", self.0.numerator(), self.0.denominator())
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

    /// Accepts `n`, `n/d` and plain decimals such as `0.25`.
    fn from_str(s: &str) -> Result<Rational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n = IBig::from_str(n.trim()).map_err(|_| bad())?;
            let d = IBig::from_str(d.trim()).map_err(|_| bad())?;
            return Rational::from_parts(n, d).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.trim_start().starts_with('-');
            let whole = if int.is_empty() || int == "-" {
                IBig::ZERO
            } else {
                IBig::from_str(int).map_err(|_| bad())?
            };
            let scale = IBig::from(10u8).pow(frac.len());
            let frac_val = if frac.is_empty() { IBig::ZERO } else { IBig::from_str(frac).map_err(|_| bad())? };
            let mag = whole.clone().abs() * &scale + frac_val;
            let num = if negative { -mag } else { mag };
            return Rational::from_parts(num, scale).map_err(|_| bad());
        }
        let n = IBig::from_str(s).map_err(|_| bad())?;
        Ok(Rational(RBig::from(n)))
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Scalar for Rational {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero(_: &()) -> Rational {
        Rational(RBig::ZERO)
    }

    fn one(_: &()) -> Rational {
        Rational(RBig::ONE)
    }

    fn from_rational(r: &Rational, _: &()) -> Rational {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_exact() -> bool {
        true
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn json_parts(&self) -> (String, String) {
        (self.0.numerator().to_string(), self.0.denominator().to_string())
    }
}

type Fb = FBig<HalfEven, 2>;

/// Binary floating point number with an explicit working precision in bits.
///
/// Binary operations run at the larger precision of their operands, so
/// precision never drops below what the inputs carried.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigFloat(Fb);

forward_binops!(BigFloat);

impl BigFloat {
    pub fn with_precision(value: f64, precision: usize) -> BigFloat {
        let v = Fb::try_from(value).expect("finite f64");
        BigFloat(v.with_precision(precision).value())
    }

    pub fn from_rational(r: &Rational, precision: usize) -> BigFloat {
        r.to_bigfloat(precision)
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    pub fn inner(&self) -> &Fb {
        &self.0
    }

    /// `self^(p/q)` for positive `self`.
    pub fn powf(&self, exponent: &BigFloat) -> BigFloat {
        (exponent.clone() * self.ln()).exp()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let d = self.0.to_decimal().value();
        let d = d.with_precision(digits).value();
        d.to_string()
    }
}

/// Serde helper: 40 significant decimal digits.
pub fn ser_bigfloat<S: serde::Serializer>(v: &BigFloat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_decimal_string(40))
}

pub fn ser_bigfloat_vec<S: serde::Serializer>(v: &[BigFloat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_decimal_string(40)))
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision() as f64) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal_string(digits.max(1)))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0.to_f64().value())
    }
}

impl Scalar for BigFloat {
    type Ctx = usize;

    fn ctx(&self) -> usize {
        self.precision()
    }

    fn zero(precision: &usize) -> BigFloat {
        BigFloat(Fb::ZERO.with_precision(*precision).value())
    }

    fn one(precision: &usize) -> BigFloat {
        BigFloat(Fb::ONE.with_precision(*precision).value())
    }

    fn from_rational(r: &Rational, precision: &usize) -> BigFloat {
        r.to_bigfloat(*precision)
    }

    fn is_zero(&self) -> bool {
        self.0 == Fb::ZERO
    }

    fn is_exact() -> bool {
        false
    }

    fn magnitude(&self) -> f64 {
        self.0.to_f64().value().abs()
    }

    fn json_parts(&self) -> (String, String) {
        (self.to_string(), "1".into())
    }

    fn tolerance(&self) -> f64 {
        2f64.powi(-((self.precision() / 2) as i32))
    }
}

impl Real for BigFloat {
    // dashu reports exact results such as exp(0) with unlimited precision
    fn ln(&self) -> BigFloat {
        BigFloat(self.0.ln().with_precision(self.precision()).value())
    }

    fn exp(&self) -> BigFloat {
        BigFloat(self.0.exp().with_precision(self.precision()).value())
    }

    fn sqrt(&self) -> BigFloat {
        BigFloat(self.0.sqrt())
    }

    fn abs(&self) -> BigFloat {
        BigFloat(self.0.clone().abs())
    }

    fn precision_bits(&self) -> usize {
        self.precision()
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
}

/// First-order jet `value + deriv * eps` with `eps^2 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<F> {
    pub value: F,
    pub deriv: F,
}

impl<F: Scalar> Jet<F> {
    pub fn constant(value: F) -> Jet<F> {
        let deriv = value.zero_like();
        Jet { value, deriv }
    }

    /// The independent variable at `value`.
    pub fn variable(value: F) -> Jet<F> {
        let deriv = value.one_like();
        Jet { value, deriv }
    }
}

impl<F: Scalar> Add for Jet<F> {
    type Output = Jet<F>;
    fn add(self, rhs: Jet<F>) -> Jet<F> {
        Jet { value: self.value + rhs.value, deriv: self.deriv + rhs.deriv }
    }
}

impl<'a, F: Scalar> Add<&'a Jet<F>> for Jet<F> {
    type Output = Jet<F>;
    fn add(self, rhs: &'a Jet<F>) -> Jet<F> {
        Jet { value: self.value + &rhs.value, deriv: self.deriv + &rhs.deriv }
    }
}

impl<F: Scalar> Sub for Jet<F> {
    type Output = Jet<F>;
    fn sub(self, rhs: Jet<F>) -> Jet<F> {
        Jet { value: self.value - rhs.value, deriv: self.deriv - rhs.deriv }
    }
}

impl<'a, F: Scalar> Sub<&'a Jet<F>> for Jet<F> {
    type Output = Jet<F>;
    fn sub(self, rhs: &'a Jet<F>) -> Jet<F> {
        Jet { value: self.value - &rhs.value, deriv: self.deriv - &rhs.deriv }
    }
}

impl<'a, F: Scalar> Mul<&'a Jet<F>> for Jet<F> {
    type Output = Jet<F>;
    fn mul(self, rhs: &'a Jet<F>) -> Jet<F> {
        let deriv = self.deriv * &rhs.value + self.value.clone() * &rhs.deriv;
        Jet { value: self.value * &rhs.value, deriv }
    }
}

impl<F: Scalar> Mul for Jet<F> {
    type Output = Jet<F>;
    fn mul(self, rhs: Jet<F>) -> Jet<F> {
        self * &rhs
    }
}

impl<'a, F: Scalar> Div<&'a Jet<F>> for Jet<F> {
    type Output = Jet<F>;
    fn div(self, rhs: &'a Jet<F>) -> Jet<F> {
        let value = self.value.clone() / &rhs.value;
        let deriv = (self.deriv - value.clone() * &rhs.deriv) / &rhs.value;
        Jet { value, deriv }
    }
}

impl<F: Scalar> Div for Jet<F> {
    type Output = Jet<F>;
    fn div(self, rhs: Jet<F>) -> Jet<F> {
        self / &rhs
    }
}

impl<F: Scalar> Neg for Jet<F> {
    type Output = Jet<F>;
    fn neg(self) -> Jet<F> {
        Jet { value: -self.value, deriv: -self.deriv }
    }
}

impl<F: Scalar> Scalar for Jet<F> {
    type Ctx = F::Ctx;

    fn ctx(&self) -> F::Ctx {
        self.value.ctx()
    }

    fn zero(ctx: &F::Ctx) -> Jet<F> {
        Jet { value: F::zero(ctx), deriv: F::zero(ctx) }
    }

    fn one(ctx: &F::Ctx) -> Jet<F> {
        Jet { value: F::one(ctx), deriv: F::zero(ctx) }
    }

    fn from_rational(r: &Rational, ctx: &F::Ctx) -> Jet<F> {
        Jet { value: F::from_rational(r, ctx), deriv: F::zero(ctx) }
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }

    fn is_exact() -> bool {
        F::is_exact()
    }

    fn magnitude(&self) -> f64 {
        self.value.magnitude().max(self.deriv.magnitude())
    }

    fn json_parts(&self) -> (String, String) {
        self.value.json_parts()
    }

    fn tolerance(&self) -> f64 {
        self.value.tolerance()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rationals_are_reduced() {
        let r = q(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(q(0, 5), Rational::zero(&()));
        assert_eq!(q(0, 5).json_parts(), ("0".to_string(), "1".to_string()));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), q(3, 4));
        assert_eq!("-7".parse::<Rational>().unwrap(), q(-7, 1));
        assert_eq!("0.25".parse::<Rational>().unwrap(), q(1, 4));
        assert_eq!("-1.5".parse::<Rational>().unwrap(), q(-3, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q(16, 81).sqrt_exact(), Some(q(4, 9)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-4, 1).sqrt_exact(), None);
    }

    #[test]
    fn integer_powers() {
        assert_eq!(q(2, 3).pow_i(3), q(8, 27));
        assert_eq!(q(2, 3).pow_i(-2), q(9, 4));
        assert_eq!(q(5, 7).pow_i(0), q(1, 1));
    }

    #[test]
    fn bigfloat_keeps_precision() {
        let a = BigFloat::from_rational(&q(1, 3), 256);
        let b = BigFloat::from_rational(&q(2, 7), 128);
        let c = a.clone() * &b;
        assert_eq!(c.precision(), 256);
        let back = (c / &b - a).magnitude();
        assert!(back < 1e-70);
    }

    #[test]
    fn bigfloat_transcendentals() {
        let x = BigFloat::from_rational(&q(3, 2), 256);
        let roundtrip = (x.ln().exp() - &x).magnitude();
        assert!(roundtrip < 1e-70);
        let two = BigFloat::from_rational(&q(2, 1), 256);
        assert!((two.sqrt().square() - two).magnitude() < 1e-70);
    }

    #[test]
    fn jet_rules() {
        // d/dx (x^2 + 1)/x at x = 2 is 1 - 1/x^2 = 3/4
        let x = Jet::variable(q(2, 1));
        let one = Jet::constant(q(1, 1));
        let f = (x.clone() * &x + one) / &x;
        assert_eq!(f.value, q(5, 2));
        assert_eq!(f.deriv, q(3, 4));
    }
}
