use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive};

use super::LiaError;

/// Exact integer type for coefficients and bounds. Machine types report
/// overflow instead of wrapping.
pub trait Scalar:
    Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Clone
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn to_big(&self) -> BigInt;
    fn from_big(b: &BigInt) -> Option<Self>;
}

impl Scalar for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
}

impl Scalar for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
}

impl Scalar for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

pub(crate) fn add<T: Scalar>(a: &T, b: &T) -> Result<T, LiaError> {
    a.checked_add(b).ok_or(LiaError::Overflow)
}

pub(crate) fn sub<T: Scalar>(a: &T, b: &T) -> Result<T, LiaError> {
    a.checked_sub(b).ok_or(LiaError::Overflow)
}

pub(crate) fn mul<T: Scalar>(a: &T, b: &T) -> Result<T, LiaError> {
    a.checked_mul(b).ok_or(LiaError::Overflow)
}

pub(crate) fn from_big<T: Scalar>(b: &BigInt) -> Result<T, LiaError> {
    T::from_big(b).ok_or(LiaError::Overflow)
}
