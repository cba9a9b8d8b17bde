//! Scalar abstraction for the algebraic core.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real field the Fock algebra is generic over: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; every value used by the library is representable.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    /// Conversion of a count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Sum
        + Send
        + Sync
        + 'static
{
}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

pub(crate) fn cz<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    C::new(re, T::zero())
}

/// `sum_i conj(a_i) b_i`.
pub(crate) fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(cz(), |acc, (x, y)| acc + x.conj() * y)
}

pub(crate) fn norm_sqr<T: Real>(a: &[C<T>]) -> T {
    a.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr())
}

/// Euclidean distance between coefficient arrays of equal length.
pub(crate) fn dist<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + (x - y).norm_sqr())
        .sqrt()
}
