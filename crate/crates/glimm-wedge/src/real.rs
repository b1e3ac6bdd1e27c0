//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the solver is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working precision.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in working precision")
}

/// Lossy conversion used for error payloads and reports.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `(exp(e * ln_x) - 1) / e`, continuous at `e = 0` where it equals `ln_x`.
#[inline]
pub fn powm1_over<T: Real>(ln_x: T, e: T) -> T {
    if e.abs() < lit(1e-10) {
        ln_x
    } else {
        (e * ln_x).exp_m1() / e
    }
}
