//! Interpolation, differentiation and time-stepping primitives.

pub mod fd;
pub mod mls;
pub mod rk4;

pub use fd::{fd4_derivative, fd4_derivative_into};
pub use mls::{mls_interpolate, mls_invocations, reset_mls_invocations, Stencil};
pub use rk4::{rk4_step, Rk4};

use num_complex::Complex64;
use std::ops::{Add, Mul};

/// Values that can be combined linearly with real weights.
pub trait Field: Copy + Add<Output = Self> + Mul<f64, Output = Self> + Send + Sync {
    fn zero() -> Self;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}
