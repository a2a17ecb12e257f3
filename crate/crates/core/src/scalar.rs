//! Coefficient types.
//!
//! Every ring in this crate is generic over a coefficient field. The
//! intended instantiation is [`Q`](crate::Q), arbitrary-precision rationals,
//! which is what makes relation coefficients bit-exact. Machine rationals and
//! floats also satisfy [`Scalar`] and are handy for quick experiments, but
//! zero-detection on floats is only as good as the rounding.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// A coefficient field.
pub trait Scalar:
    Num + Clone + Neg<Output = Self> + Debug + Display + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;

    /// `n choose k` as a field element.
    fn binomial(n: u32, k: u32) -> Self {
        if k > n {
            return Self::zero();
        }
        let k = k.min(n - k);
        let mut acc = Self::one();
        for i in 0..k {
            acc = acc * Self::from_int(i64::from(n - i)) / Self::from_int(i64::from(i + 1));
        }
        acc
    }

    fn pow_u32(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<T> Scalar for T
where
    T: Num + Clone + Neg<Output = T> + FromPrimitive + Debug + Display + Send + Sync + 'static,
{
    fn from_int(n: i64) -> Self {
        T::from_i64(n).expect("integer is representable in the scalar type")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn binomials() {
        assert_eq!(Q::binomial(5, 2), Q::from_int(10));
        assert_eq!(Q::binomial(5, 0), Q::from_int(1));
        assert_eq!(Q::binomial(3, 4), Q::from_int(0));
        assert_eq!(f64::binomial(6, 3), 20.0);
    }
}
