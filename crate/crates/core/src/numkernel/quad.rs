use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact element `a + b·√3` of the field Q(√3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRational {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadRational {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadRational { a, b }
    }

    pub fn from_int(a: i64) -> Self {
        QuadRational {
            a: BigRational::from_integer(a.into()),
            b: BigRational::zero(),
        }
    }

    /// `a_num/a_den + (b_num/b_den)·√3`. Panics on a zero denominator.
    pub fn from_parts(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        QuadRational {
            a: BigRational::new(a_num.into(), a_den.into()),
            b: BigRational::new(b_num.into(), b_den.into()),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Field norm `a² - 3b²`; zero only for zero.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(3)) * &self.b * &self.b
    }

    pub fn conjugate(&self) -> Self {
        QuadRational {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3f64.sqrt()
    }

    pub fn checked_div(&self, rhs: &QuadRational) -> Option<QuadRational> {
        if rhs.is_zero() {
            return None;
        }
        let norm = rhs.norm();
        let num = self * &rhs.conjugate();
        Some(QuadRational {
            a: num.a / &norm,
            b: num.b / &norm,
        })
    }

    /// Reduced integer parts `(a_num, a_den, b_num, b_den)` if they fit in i64.
    pub fn to_i64_parts(&self) -> Option<(i64, i64, i64, i64)> {
        Some((
            self.a.numer().to_i64()?,
            self.a.denom().to_i64()?,
            self.b.numer().to_i64()?,
            self.b.denom().to_i64()?,
        ))
    }

    pub fn is_negative(&self) -> bool {
        // sign of a + b√3 without leaving the field: compare a² and 3b²
        match (self.a.is_negative(), self.b.is_negative()) {
            (true, true) => true,
            (false, false) => false,
            (a_neg, _) => {
                let a_sq = &self.a * &self.a;
                let three_b_sq = BigRational::from_integer(BigInt::from(3)) * &self.b * &self.b;
                if a_neg {
                    a_sq > three_b_sq
                } else {
                    a_sq < three_b_sq
                }
            }
        }
    }
}

impl Default for QuadRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√3", self.b)
        } else {
            write!(f, "{} + {}√3", self.a, self.b)
        }
    }
}

impl<'a> Add<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn add(self, rhs: &QuadRational) -> QuadRational {
        QuadRational {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn sub(self, rhs: &QuadRational) -> QuadRational {
        QuadRational {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn mul(self, rhs: &QuadRational) -> QuadRational {
        let three = BigRational::from_integer(BigInt::from(3));
        QuadRational {
            a: &self.a * &rhs.a + three * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl<'a> Div<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn div(self, rhs: &QuadRational) -> QuadRational {
        self.checked_div(rhs).expect("division by zero in Q(√3)")
    }
}

impl Neg for QuadRational {
    type Output = QuadRational;
    fn neg(self) -> QuadRational {
        QuadRational {
            a: -self.a,
            b: -self.b,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for QuadRational {
            type Output = QuadRational;
            fn $method(self, rhs: QuadRational) -> QuadRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<i64> for QuadRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl One for QuadRational {
    fn one() -> Self {
        QuadRational::one()
    }
}

impl Zero for QuadRational {
    fn zero() -> Self {
        QuadRational::zero()
    }
    fn is_zero(&self) -> bool {
        QuadRational::is_zero(self)
    }
}
