//! Exact symbolic computation for birational representations of threefold
//! scrolls.
//!
//! The crate is organised in four layers:
//!
//! * [`field`], [`monomial`], [`poly`]: exact scalars (arbitrary-precision
//!   rationals and validated prime fields), monomials with pluggable orders,
//!   and sparse multivariate polynomial arithmetic;
//! * [`ideal`], [`hilbert`]: Buchberger-based Groebner machinery with the
//!   ideal toolbox built on it (elimination, colon, intersection, saturation,
//!   Hilbert series and the derived dimension/degree/genus data);
//! * [`birat`]: projective varieties, rational maps, and the geometric
//!   operations used to assemble and invert the scroll maps;
//! * [`scrolls`]: the construction pipelines for the Bordiga and Palatini
//!   scrolls, the linear systems of monoids representing them, and the
//!   verification reports.
//!
//! Everything is `no_std` + `alloc`; IO, timing and caching are injected by
//! the companion CLI crate.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod birat;
pub mod dense;
pub mod error;
pub mod field;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod report;
pub mod rng;
pub mod scrolls;
pub mod univar;

pub use error::{Error, Result};
