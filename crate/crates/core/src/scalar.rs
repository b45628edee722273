//! Scalar abstraction shared by the linear-algebra and measure code.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the simulator can run on (`f32` or `f64`).
pub trait Real: RealField + Copy + FloatConst + FromPrimitive + ToPrimitive {
    /// Absolute tolerance for unitarity, idempotence and physicality checks.
    const TOLERANCE: f64;

    /// Converts an `f64` constant into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn tol() -> Self {
        Self::lit(Self::TOLERANCE)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn deg_to_rad(deg: Self) -> Self {
        deg * Self::PI() / Self::lit(180.0)
    }
}

impl Real for f64 {
    const TOLERANCE: f64 = 1e-9;
}

impl Real for f32 {
    const TOLERANCE: f64 = 1e-4;
}

pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub(crate) fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

pub(crate) fn modulus<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}
