use num_traits::{FromPrimitive, One, Zero};
use std::ops::{Div, Neg, Sub};

/// Coefficient scalar for truncated series: exact rationals for the symbolic
/// modules, complex floats for numeric parallel transport.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + FromPrimitive
{
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    /// 1/k as a scalar; k >= 1.
    fn inv_integer(k: usize) -> Self {
        Self::one() / Self::from_usize(k).expect("integer does not embed into scalar")
    }
}

impl Coeff for crate::Rat {}
impl Coeff for num_complex::Complex64 {}
impl Coeff for f64 {}
impl Coeff for f32 {}
