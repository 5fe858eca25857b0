//! Zero-dimensional cobordisms for bijective combinatorics.
//!
//! Finite sets of canonical [`Element`]s, matchings between them, the escape
//! algorithm that cancels a common summand, signed sets with cobordisms
//! between them, and the principles built on top: subtraction with overlap,
//! the Garsia–Milne involution principle and the Cantor–Schröder–Bernstein
//! construction.

pub mod cli;
pub mod dsl;
pub mod elements;
pub mod error;
pub mod euler;
pub mod nset;
pub mod oracle;
pub mod principles;
pub mod subtraction;
pub mod zset;

pub use elements::{Element, FiniteSet};
pub use error::{Error, Result};
pub use nset::Matching;
pub use subtraction::{cancel, escape_trace, Trace};
pub use zset::{ChainSum, Cobordism, SignedSet};
