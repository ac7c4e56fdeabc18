//! Coset leader graphs of binary linear codes and their coarse Ricci curvature.
//!
//! The crate builds the Cayley graph of `F_2^n / C^perp` generated by the unit
//! vectors, computes exact Ollivier curvature of that graph with rational
//! optimal transport, extracts the combinatorial parameters of locally
//! correctable and locally testable codes, and checks diameter and dimension
//! bounds against the measured values.

pub mod bounds;
pub mod construct;
pub mod error;
pub mod f2;
pub mod graph;
pub mod local;
pub mod report;
pub mod transport;
pub mod zoo;

pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVector};
pub use zoo::LinearCode;
