//! Scalar abstraction.
//!
//! All geometry is generic over [`Real`]; the harness pins `f64`. Special
//! functions are evaluated in `f64` (statrs) and converted, which is lossless
//! for `f64` and the usual compromise for `f32`.

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

pub trait Real:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 does not fit in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar does not fit in f64")
    }

    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize does not fit in scalar type")
    }

    #[inline]
    fn pi() -> Self {
        Self::of(std::f64::consts::PI)
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Γ(x), x > 0.
pub fn gamma<R: Real>(x: R) -> R {
    R::of(statrs::function::gamma::gamma(x.as_f64()))
}

/// Volume ω_d of the unit ball in R^d.
pub fn unit_ball_volume<R: Real>(d: usize) -> R {
    let d = d as f64;
    R::of(std::f64::consts::PI.powf(d / 2.0) / statrs::function::gamma::gamma(1.0 + d / 2.0))
}

/// Surface area of S^{d-1} in R^d, i.e. d·ω_d.
pub fn unit_sphere_area<R: Real>(d: usize) -> R {
    R::of_usize(d) * unit_ball_volume::<R>(d)
}

/// Inverse standard normal CDF, clamped away from {0, 1}.
pub fn inv_std_normal<R: Real>(u: R) -> R {
    use statrs::distribution::ContinuousCDF;
    let n = statrs::distribution::Normal::new(0.0, 1.0).expect("standard normal");
    let u = u.as_f64().clamp(1e-15, 1.0 - 1e-15);
    R::of(n.inverse_cdf(u))
}
