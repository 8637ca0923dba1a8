//! Edge-weight scalars.
//!
//! Every graph in the crate is generic over its weight type. Integer and
//! rational weights are exact; floating-point weights are accepted but
//! shortest-path equality tests on them are only as good as the rounding.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

/// A non-negative edge weight.
pub trait Weight:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Whether sums of this type are exact, so distance equality is meaningful.
    const EXACT: bool;

    /// Exact rational value of this weight.
    fn to_rational(&self) -> BigRational;

    fn to_f64(&self) -> f64;
}

/// Total order on weights; incomparable values (NaN) compare equal.
#[inline]
pub fn cmp_weight<W: Weight>(a: &W, b: &W) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

macro_rules! int_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            const EXACT: bool = true;
            fn to_rational(&self) -> BigRational {
                BigRational::from_integer(BigInt::from(*self))
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}

int_weight!(u32, u64, i64);

macro_rules! float_weight {
    ($($t:ty),*) => {$(
        impl Weight for $t {
            const EXACT: bool = false;
            fn to_rational(&self) -> BigRational {
                BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}

float_weight!(f32, f64);

impl Weight for Ratio<i64> {
    const EXACT: bool = true;
    fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Weight for BigRational {
    const EXACT: bool = true;
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Number of times `log2` must be applied to `k` before the value drops to
/// at most one.
pub fn log_star(k: usize) -> u32 {
    let mut x = k as f64;
    let mut steps = 0;
    while x > 1.0 {
        x = x.log2();
        steps += 1;
    }
    steps
}
