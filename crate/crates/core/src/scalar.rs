//! Exact coefficient fields.
//!
//! Every structure in the crate is generic over [`Scalar`]. The trait is only
//! implemented for exact rational types: singularity is an exact statement and
//! a floating-point zero test would be meaningless here.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed};

/// An exact field used for structure constants, weights and PBW coefficients.
pub trait Scalar:
    Signed + Clone + Eq + Ord + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self;

    /// `num / den`. Panics if `den == 0`.
    fn from_frac(num: i64, den: i64) -> Self;

    /// Integer value, if this is an integer that fits in an `i64`.
    fn to_int(&self) -> Option<i64>;

    /// `self^exp` by repeated squaring.
    fn powu(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Rendering as `p/q` (or `p` for integers).
    fn render(&self) -> String {
        self.to_string()
    }

    fn parse_rational(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + num_traits::ToPrimitive
        + Send
        + Sync
        + 'static,
{
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(T::from_i64(n).expect("integer out of range for scalar"))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Ratio::new(
            T::from_i64(num).expect("integer out of range for scalar"),
            T::from_i64(den).expect("integer out of range for scalar"),
        )
    }

    fn to_int(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}
