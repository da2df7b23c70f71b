//! Scalar rings the lattice arithmetic is generic over.
//!
//! Per-vector quantities are ratios of two values of an integral binary
//! quadratic form, so the arithmetic only needs ring operations plus a way to
//! round a ratio into the fundamental window. Floating types give the fast
//! path; `i128` (with a common denominator folded into the form) and
//! `Ratio<i128>` give exact results.

use std::fmt::Debug;
use std::ops::Neg;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

pub trait Scalar: Num + Copy + PartialOrd + Neg<Output = Self> + Debug + Send + Sync {
    /// True when ring operations never round.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn to_f64(self) -> f64;

    /// The integer `k` with `num/den - k` in `(-1/2, 1/2]`. `den` must be positive.
    fn window_shift(num: Self, den: Self) -> i64;

    fn checked_mul(self, rhs: Self) -> Option<Self>;

    fn checked_add(self, rhs: Self) -> Option<Self>;

    fn checked_sub(self, rhs: Self) -> Option<Self> {
        self.checked_add(-rhs)
    }

    /// `lhs <= rhs`, with a relative slack of a few ulps for rounding types.
    fn le_within_rounding(lhs: Self, rhs: Self) -> bool;
}

macro_rules! float_scalar {
    ($t:ty, $slack:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            #[inline]
            fn from_i64(v: i64) -> Self {
                v as $t
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn window_shift(num: Self, den: Self) -> i64 {
                let r = num / den;
                let mut k = (r - 0.5).ceil();
                // rounding in r - 0.5 can land one step off near the edges
                if r - k > 0.5 {
                    k += 1.0;
                } else if r - k <= -0.5 {
                    k -= 1.0;
                }
                k as i64
            }

            #[inline]
            fn checked_mul(self, rhs: Self) -> Option<Self> {
                let p = self * rhs;
                p.is_finite().then_some(p)
            }

            #[inline]
            fn checked_add(self, rhs: Self) -> Option<Self> {
                let p = self + rhs;
                p.is_finite().then_some(p)
            }

            #[inline]
            fn le_within_rounding(lhs: Self, rhs: Self) -> bool {
                lhs <= rhs + $slack * lhs.abs().max(rhs.abs()).max(<$t>::MIN_POSITIVE)
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-5);

impl Scalar for i128 {
    const EXACT: bool = true;

    #[inline]
    fn from_i64(v: i64) -> Self {
        v as i128
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }

    #[inline]
    fn window_shift(num: Self, den: Self) -> i64 {
        // ceil((2 num - den) / (2 den))
        let top = 2 * num - den;
        let bottom = 2 * den;
        -Integer::div_floor(&(-top), &bottom) as i64
    }

    #[inline]
    fn checked_mul(self, rhs: Self) -> Option<Self> {
        i128::checked_mul(self, rhs)
    }

    #[inline]
    fn checked_add(self, rhs: Self) -> Option<Self> {
        i128::checked_add(self, rhs)
    }

    #[inline]
    fn le_within_rounding(lhs: Self, rhs: Self) -> bool {
        lhs <= rhs
    }
}

impl Scalar for Ratio<i128> {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn window_shift(num: Self, den: Self) -> i64 {
        let half = Ratio::new(1, 2);
        let k = (num / den - half).ceil().to_integer();
        k as i64
    }

    fn checked_mul(self, rhs: Self) -> Option<Self> {
        num_traits::CheckedMul::checked_mul(&self, &rhs)
    }

    fn checked_add(self, rhs: Self) -> Option<Self> {
        num_traits::CheckedAdd::checked_add(&self, &rhs)
    }

    fn le_within_rounding(lhs: Self, rhs: Self) -> bool {
        lhs <= rhs
    }
}
