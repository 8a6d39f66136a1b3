//! Coefficient fields.
//!
//! Everything above this module is written against [`Scalar`], so the same
//! polynomial, Gröbner and linear-algebra code runs over the exact rationals
//! (the contract for every public result), over word-size prime fields (cheap
//! rank probes) and over `f64`/`f32` (numerical sanity checks only).

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};
use rug::Integer;

/// A commutative field usable as polynomial coefficient.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Send
    + Sync
    + 'static
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Whether equality tests are exact (false for floating point).
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Image of a rational number, `None` when the denominator is not
    /// invertible (e.g. divisible by the characteristic).
    fn from_rational(q: &Rational) -> Option<Self>;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn div_ref(&self, other: &Self) -> Self {
        self.mul_ref(&other.inv())
    }

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a.mul_ref(b);
    }

    /// `self -= a * b`
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a.mul_ref(b);
    }

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Treat as zero after arithmetic; exact fields use `is_zero`.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Size proxy used by pivoting heuristics (bit length for rationals).
    fn weight(&self) -> u64 {
        0
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational(rug::Rational);

impl Rational {
    pub fn new(num: impl Into<Integer>, den: impl Into<Integer>) -> Self {
        let den = den.into();
        assert!(den != 0, "zero denominator");
        Rational(rug::Rational::from((num.into(), den)))
    }

    pub fn from_integer(v: impl Into<Integer>) -> Self {
        Rational(rug::Rational::from(v.into()))
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn into_parts(self) -> (Integer, Integer) {
        self.0.into_numer_denom()
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Ordering::Less
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.clone().abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn as_rug(&self) -> &rug::Rational {
        &self.0
    }

    pub fn from_rug(q: rug::Rational) -> Self {
        Rational(q)
    }

    /// Total bit size of numerator and denominator.
    pub fn bits(&self) -> u64 {
        u64::from(self.0.numer().significant_bits()) + u64::from(self.0.denom().significant_bits())
    }
}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.numer().hash(state);
        self.0.denom().hash(state);
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Error for malformed rational literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = Integer::from_str(n.trim()).map_err(|_| err())?;
                let d = Integer::from_str(d.trim()).map_err(|_| err())?;
                if d == 0 {
                    return Err(err());
                }
                Ok(Rational::new(n, d))
            }
            None => Ok(Rational::from_integer(Integer::from_str(s).map_err(|_| err())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(rug::Rational::from(v))
    }
}

impl From<Integer> for Rational {
    fn from(v: Integer) -> Self {
        Rational(rug::Rational::from(v))
    }
}

impl From<(i64, i64)> for Rational {
    fn from((n, d): (i64, i64)) -> Self {
        Rational::new(n, d)
    }
}

macro_rules! rational_binop {
    ($tr:ident, $f:ident, $tra:ident, $fa:ident, $op:tt) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $f(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $f(self, rhs: &'a Rational) -> Rational {
                Rational(rug::Rational::from(&self.0 $op &rhs.0))
            }
        }
        impl $tra for Rational {
            fn $fa(&mut self, rhs: Rational) {
                self.0 = std::mem::take(&mut self.0) $op rhs.0;
            }
        }
    };
}

rational_binop!(Add, add, AddAssign, add_assign, +);
rational_binop!(Sub, sub, SubAssign, sub_assign, -);
rational_binop!(Mul, mul, MulAssign, mul_assign, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(rug::Rational::from(&self.0 / &rhs.0))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(rug::Rational::new())
    }
    fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(rug::Rational::from(1))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Rational(self.0.clone().recip())
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        self.0 += rug::Rational::from(&a.0 * &b.0);
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        self.0 -= rug::Rational::from(&a.0 * &b.0);
    }

    fn weight(&self) -> u64 {
        self.bits()
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// Element of the prime field with `P` elements (`P < 2^63`, prime).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

/// The largest prime below 2^62; default modulus for modular probes.
pub const PRIME_62: u64 = 4_611_686_018_427_387_847;

pub type Fp62 = Fp<PRIME_62>;

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn mulmod(a: u64, b: u64) -> u64 {
        ((u128::from(a) * u128::from(b)) % u128::from(P)) as u64
    }

    pub fn from_integer(v: &Integer) -> Self {
        let m = Integer::from(P);
        let red = Integer::from(v % &m);
        let red = if red < 0 { red + &m } else { red };
        Fp(red.to_u64().expect("reduced value fits"))
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(Self::mulmod(self.0, rhs.0))
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Fp((i128::from(v).rem_euclid(i128::from(P))) as u64)
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        let d = Self::from_integer(q.denom());
        if d.is_zero() {
            return None;
        }
        Some(Self::from_integer(q.numer()) / d)
    }

    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in F_p");
        self.pow_u64(P - 2)
    }

    fn add_ref(&self, other: &Self) -> Self {
        *self + *other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        *self - *other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }
}

impl<const P: u64> Fp<P> {
    pub fn pow_u64(self, mut e: u64) -> Self {
        let mut acc = Self::one();
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Floating point
// ---------------------------------------------------------------------------

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_rational(q: &Rational) -> Option<Self> {
                Some(q.to_f64() as $t)
            }

            fn inv(&self) -> Self {
                1.0 / *self
            }

            fn add_ref(&self, other: &Self) -> Self {
                self + other
            }

            fn sub_ref(&self, other: &Self) -> Self {
                self - other
            }

            fn mul_ref(&self, other: &Self) -> Self {
                self * other
            }

            fn is_negligible(&self) -> bool {
                self.abs() < $tol
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-4);
