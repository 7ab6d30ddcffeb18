//! Scalar abstractions: a floating-point scalar for chart geometry and a
//! plain commutative ring for the polynomial layer (Hamiltonian displays,
//! Jacobians), which also accepts exact rational types.

use num_traits::{Float, FromPrimitive, One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Send + Sync + 'static {}
impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Send + Sync + 'static {}

/// Shorthand for embedding an `f64` literal into a generic scalar.
#[inline]
pub fn lit<S: Scalar>(v: f64) -> S {
    S::from_f64(v).expect("literal not representable in scalar type")
}

/// Commutative ring with 1. Implemented by both floats and exact rationals,
/// so polynomial evaluations can run in either.
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + FromPrimitive
    + Debug
{
    #[inline]
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer not representable in ring")
    }
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + FromPrimitive
        + Debug
{
}
