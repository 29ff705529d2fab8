//! Exact scalars: arbitrary-precision rationals and the quadratic extension
//! a + b√d over them.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arithmetic needed by the generic linear algebra and exterior algebra code.
///
/// Method names avoid `add`/`mul` so they never collide with `std::ops`.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn recip(&self) -> Option<Self>;
    fn from_rat(r: &Rat) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rat {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    pub fn pow(&self, e: i32) -> Rat {
        Rat(num_traits::Pow::pow(&self.0, e))
    }

    /// The rational square root when it exists.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Rat::new(rn, rd))
        } else {
            None
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Rat {
        Rat(r)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
            Some((a, b)) => {
                let n: BigInt = a.trim().parse().map_err(|_| bad())?;
                let d: BigInt = b.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Rat(BigRational::new(n, d)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Rat> for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Scalar for Rat {
    fn zero() -> Rat {
        Rat::zero()
    }
    fn one() -> Rat {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn plus(&self, rhs: &Rat) -> Rat {
        self + rhs
    }
    fn minus(&self, rhs: &Rat) -> Rat {
        self - rhs
    }
    fn times(&self, rhs: &Rat) -> Rat {
        self * rhs
    }
    fn negated(&self) -> Rat {
        -self
    }
    fn recip(&self) -> Option<Rat> {
        Rat::recip(self)
    }
    fn from_rat(r: &Rat) -> Rat {
        r.clone()
    }
}

/// a + b√d. Whenever b = 0 the radicand is stored as 0, so pure rationals
/// compare equal regardless of which field they came from.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadRatFields")]
pub struct QuadRat {
    pub a: Rat,
    pub b: Rat,
    pub d: Rat,
}

#[derive(Deserialize)]
struct QuadRatFields {
    a: Rat,
    b: Rat,
    d: Rat,
}

impl TryFrom<QuadRatFields> for QuadRat {
    type Error = Error;

    fn try_from(f: QuadRatFields) -> Result<QuadRat> {
        QuadRat::new(f.a, f.b, f.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadRat {
    /// Builds a + b√d, folding √d into a when d is a rational square.
    pub fn new(a: Rat, b: Rat, d: Rat) -> Result<QuadRat> {
        if b.is_zero() {
            return Ok(QuadRat::rational(a));
        }
        if d.is_zero() {
            return Err(Error::Invalid("radicand 0 with nonzero b".into()));
        }
        if let Some(r) = d.sqrt_exact() {
            return Ok(QuadRat::rational(a + b * r));
        }
        Ok(QuadRat { a, b, d })
    }

    pub fn rational(a: Rat) -> QuadRat {
        QuadRat {
            a,
            b: Rat::zero(),
            d: Rat::zero(),
        }
    }

    /// √d itself; rational when d is a perfect square.
    pub fn sqrt_of(d: &Rat) -> Result<QuadRat> {
        QuadRat::new(Rat::zero(), Rat::one(), d.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> QuadRat {
        QuadRat {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// a² − b²d, an element of ℚ.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    fn common_d(&self, other: &QuadRat) -> Result<Rat> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(Rat::zero()),
            (false, true) => Ok(self.d.clone()),
            (true, false) => Ok(other.d.clone()),
            (false, false) if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::RadicandMismatch(self.d.to_string(), other.d.to_string())),
        }
    }

    fn normalized(a: Rat, b: Rat, d: Rat) -> QuadRat {
        if b.is_zero() {
            QuadRat::rational(a)
        } else {
            QuadRat { a, b, d }
        }
    }

    pub fn try_add(&self, o: &QuadRat) -> Result<QuadRat> {
        let d = self.common_d(o)?;
        Ok(Self::normalized(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn try_sub(&self, o: &QuadRat) -> Result<QuadRat> {
        let d = self.common_d(o)?;
        Ok(Self::normalized(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn try_mul(&self, o: &QuadRat) -> Result<QuadRat> {
        let d = self.common_d(o)?;
        let a = &self.a * &o.a + &self.b * &o.b * &d;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::normalized(a, b, d))
    }

    pub fn try_div(&self, o: &QuadRat) -> Result<QuadRat> {
        self.common_d(o)?;
        let n = o.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.try_mul(&o.conj())?;
        let inv = Rat::one() / n;
        Ok(Self::normalized(&num.a * &inv, &num.b * &inv, num.d))
    }
}

/// Field arithmetic in ℚ(√d).
pub fn quad_arith(x: &QuadRat, y: &QuadRat, op: QuadOp) -> Result<QuadRat> {
    match op {
        QuadOp::Add => x.try_add(y),
        QuadOp::Sub => x.try_sub(y),
        QuadOp::Mul => x.try_mul(y),
        QuadOp::Div => x.try_div(y),
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Mixing radicands inside one computation is a logic error, so the trait
// methods panic where the fallible ones return Err.
impl Scalar for QuadRat {
    fn zero() -> QuadRat {
        QuadRat::rational(Rat::zero())
    }
    fn one() -> QuadRat {
        QuadRat::rational(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn plus(&self, rhs: &QuadRat) -> QuadRat {
        self.try_add(rhs).expect("radicand mismatch")
    }
    fn minus(&self, rhs: &QuadRat) -> QuadRat {
        self.try_sub(rhs).expect("radicand mismatch")
    }
    fn times(&self, rhs: &QuadRat) -> QuadRat {
        self.try_mul(rhs).expect("radicand mismatch")
    }
    fn negated(&self) -> QuadRat {
        Self::normalized(-&self.a, -&self.b, self.d.clone())
    }
    fn recip(&self) -> Option<QuadRat> {
        QuadRat::one_q().try_div(self).ok()
    }
    fn from_rat(r: &Rat) -> QuadRat {
        QuadRat::rational(r.clone())
    }
}

impl QuadRat {
    fn one_q() -> QuadRat {
        QuadRat::rational(Rat::one())
    }
}
