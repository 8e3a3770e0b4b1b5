//! Coefficient traits shared by the polynomial, series and linear-algebra
//! layers.

use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A commutative ring with exact equality.
pub trait Ring: Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> {}

impl<T> Ring for T where T: Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> {}

/// A ring in which every non-zero element is invertible.
pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = Self> {}

/// An integral domain with exact (Euclidean) division, as needed by
/// fraction-free elimination.
pub trait EuclideanRing: Ring + Integer + Signed {}

impl<T> EuclideanRing for T where T: Ring + Integer + Signed {}
