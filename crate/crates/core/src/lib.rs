//! Generalized Davenport-Schinzel sequences: block sequences avoiding
//! alternations and formations, interval chains and their stabbing numbers,
//! explicit extremal constructions, and exact brute-force oracles.

pub mod ackermann;
pub mod chains;
pub mod constructions;
pub mod error;
pub mod oracle;
pub mod seq;
pub mod text;
pub mod transforms;

pub use chains::{ExtremalValue, IntervalChain, StabTuple};
pub use error::{Error, Result};
pub use seq::{Block, Letter, Sequence};
