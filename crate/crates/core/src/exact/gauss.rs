//! Gaussian integers `a + bi` with arbitrary-precision parts.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An element of `Z[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re² + im²`, multiplicative.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        Self {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    /// Quotient `self / other` when it lies in `Z[i]`, `None` otherwise.
    pub fn checked_div(&self, other: &GaussInt) -> Option<GaussInt> {
        if other.is_zero() {
            return None;
        }
        let n = other.norm();
        let num = self * &other.conj();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussInt { re: qr, im: qi })
        } else {
            None
        }
    }

    /// Quotient that is known to be exact. Panics otherwise.
    pub fn div_exact(&self, other: &GaussInt) -> GaussInt {
        self.checked_div(other)
            .unwrap_or_else(|| panic!("inexact Gaussian division {self} / {other}"))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl From<i64> for GaussInt {
    fn from(v: i64) -> Self {
        Self::new(v, 0)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for &GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: GaussInt) -> GaussInt {
        &self + &rhs
    }
}

impl AddAssign<&GaussInt> for GaussInt {
    fn add_assign(&mut self, rhs: &GaussInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: GaussInt) -> GaussInt {
        &self - &rhs
    }
}

impl Mul for &GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: GaussInt) -> GaussInt {
        &self * &rhs
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        -&self
    }
}

impl Zero for GaussInt {
    fn zero() -> Self {
        GaussInt::zero()
    }
    fn is_zero(&self) -> bool {
        GaussInt::is_zero(self)
    }
}

impl One for GaussInt {
    fn one() -> Self {
        GaussInt::one()
    }
}
