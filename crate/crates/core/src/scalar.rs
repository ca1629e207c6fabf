//! Scalar abstraction for the numeric kernels.
//!
//! Everything in this crate is generic over a real scalar type. `f64` is the
//! default used by the concrete type aliases at the crate root; `f32` works
//! too, at correspondingly looser tolerances.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64` (or anything float-like that
/// implements the num-traits stack).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// Convert an `f64` constant into the working scalar type.
#[inline]
pub(crate) fn real<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// Validation tolerance for identities that hold exactly in real arithmetic
/// (norms, unitarity, Hermiticity). 1e-10 for `f64`, scaled up for coarser
/// scalar types.
#[inline]
pub(crate) fn validation_tol<S: Scalar>() -> S {
    let floor: S = real(1e-10);
    let eps_based = S::epsilon() * real(100.0);
    if eps_based > floor {
        eps_based
    } else {
        floor
    }
}
