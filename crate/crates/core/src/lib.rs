//! Exact arithmetic for truncated Riordan groups.
//!
//! The crate builds Riordan matrices `(d, h)` over the rationals, constructs
//! and recognises involutions, writes unit-diagonal matrices as single
//! commutators, and factors every element of the group generated by
//! involutions into at most four involutions. Every identity is checked with
//! exact rational arithmetic.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod affine;
pub mod decompose;
pub mod fps;
pub mod gfparse;
pub mod involution;
pub mod riordan;

pub use fps::{frac, int, Rational, Series, SeriesError};
pub use riordan::{FgPair, RiordanError, RiordanMatrix};
