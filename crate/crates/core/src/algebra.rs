//! Minimal ring/field vocabulary shared by the matrix and linear-algebra code.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

/// A ring carrying a derivation.
pub trait Differential: Ring {
    fn derive(&self) -> Self;
}

#[cfg(test)]
pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

#[cfg(test)]
pub(crate) fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
