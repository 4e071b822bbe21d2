//! Scalar arithmetic used by the spectral routines. `f64` is the default;
//! [`Extended`] is a double-double (about 31 significant digits) for
//! re-checking near collisions.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    /// Default relative convergence tolerance for power iteration.
    const TOLERANCE: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const TOLERANCE: f64 = 1e-13;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Extended {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Extended {
    let s = a + b;
    let bb = s - a;
    let lo = (a - (s - bb)) + (b - bb);
    Extended { hi: s, lo }
}

// requires |a| >= |b|
#[inline]
fn quick_two_sum(a: f64, b: f64) -> Extended {
    let s = a + b;
    Extended {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Extended {
    let p = a * b;
    Extended {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Extended {
    pub const fn new(x: f64) -> Self {
        Extended { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn mul_f64(self, b: f64) -> Self {
        let p = two_prod(self.hi, b);
        quick_two_sum(p.hi, p.lo + self.lo * b)
    }
}

impl Add for Extended {
    type Output = Extended;
    #[inline]
    fn add(self, rhs: Extended) -> Extended {
        let s = two_sum(self.hi, rhs.hi);
        let t = two_sum(self.lo, rhs.lo);
        let s = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s.hi, s.lo + t.lo)
    }
}

impl AddAssign for Extended {
    #[inline]
    fn add_assign(&mut self, rhs: Extended) {
        *self = *self + rhs;
    }
}

impl Neg for Extended {
    type Output = Extended;
    #[inline]
    fn neg(self) -> Extended {
        Extended {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Extended {
    type Output = Extended;
    #[inline]
    fn sub(self, rhs: Extended) -> Extended {
        self + (-rhs)
    }
}

impl Mul for Extended {
    type Output = Extended;
    #[inline]
    fn mul(self, rhs: Extended) -> Extended {
        let p = two_prod(self.hi, rhs.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * rhs.lo + self.lo * rhs.hi))
    }
}

impl Div for Extended {
    type Output = Extended;
    fn div(self, rhs: Extended) -> Extended {
        // Three rounds of long division on the leading word.
        let q1 = self.hi / rhs.hi;
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        quick_two_sum(q1, q2) + Extended::new(q3)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Extended) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Real for Extended {
    const TOLERANCE: f64 = 1e-26;

    #[inline]
    fn from_f64(x: f64) -> Self {
        Extended::new(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Extended::new(0.0);
        }
        // One Newton step from the double-precision root.
        let s = self.hi.sqrt();
        let sq = two_prod(s, s);
        let residual = ((self.hi - sq.hi) - sq.lo + self.lo) / (2.0 * s);
        quick_two_sum(s, residual)
    }
    #[inline]
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
}
