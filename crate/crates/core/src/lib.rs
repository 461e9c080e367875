//! Exact L-functions of twisted exponential sums over finite fields, their
//! q-adic Newton polygons, and the combinatorics predicting them.

pub mod char_sums;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod local;
pub mod polygon;
pub mod strat;

pub use error::{Error, Result};
