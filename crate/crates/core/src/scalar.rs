//! Scalar abstraction shared by the analytic routines.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the closed-form and series routines are generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 literal representable in target float")
}

#[inline]
pub fn from_usize<T: Real>(v: usize) -> T {
    T::from_usize(v).expect("integer representable in target float")
}

#[inline]
pub fn to_f64<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// `1/k!`, accumulated as a product of reciprocals so large `k` underflows to zero
/// instead of overflowing.
pub fn inv_factorial<T: Real>(k: usize) -> T {
    let mut acc = T::one();
    for i in 2..=k {
        acc = acc / from_usize::<T>(i);
    }
    acc
}

pub fn factorial<T: Real>(k: usize) -> T {
    let mut acc = T::one();
    for i in 2..=k {
        acc = acc * from_usize::<T>(i);
    }
    acc
}
