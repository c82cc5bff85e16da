pub mod cdcl;
pub mod cli;
pub mod lia;
pub mod logic;
mod parse_error;
pub mod resolution;
pub mod scl;

pub use parse_error::ParseError;

use num_bigint::BigInt;

pub type LinIneq = lia::LinIneq<i64>;
pub type LiaSystem = lia::LiaSystem<i64>;
pub type Bound = lia::Bound<i64>;
pub type LinIneqI128 = lia::LinIneq<i128>;
pub type LiaSystemI128 = lia::LiaSystem<i128>;
pub type BoundI128 = lia::Bound<i128>;
pub type LinIneqBig = lia::LinIneq<BigInt>;
pub type LiaSystemBig = lia::LiaSystem<BigInt>;
pub type BoundBig = lia::Bound<BigInt>;
