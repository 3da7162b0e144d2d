//! Minimum-size k-arc-connected spanning subgraph toolkit.
//!
//! The pipeline: solve the cut-covering LP to an optimal extreme point
//! ([`lpacss`]), write the point as convex combinations of in- and
//! out-k-arborescence sets ([`arb`]), then sample or derandomize a pair and
//! return the union ([`round`]); the union is always k-arc-connected and on
//! unit-cost instances its size is within `min{7/4, 1 + 1/k}` of the LP
//! value. The [`gap`] module builds a recursive instance family on which the
//! LP relaxation is provably loose and evaluates it exactly.
//!
//! All arithmetic is exact rational ([`rational::Rat`]); reports serialize
//! rationals as `"num/den"` strings.

pub mod arb;
mod error;
pub mod flow;
pub mod gap;
pub mod graph;
pub mod lpacss;
pub mod rational;
pub mod round;
pub mod simplex;

pub use error::{Error, Result};
