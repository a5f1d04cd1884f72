//! Entropy-constrained PEG construction of LDPC codes whose short cycles, and
//! therefore small stopping sets, concentrate on few variable nodes, with the
//! sampling and failure-probability analysis for data-availability attacks.

pub mod cli;
pub mod cycles;
pub mod ecpeg;
mod error;
pub mod failure;
pub mod io;
pub mod peg;
pub mod rng;
pub mod sampling;
pub mod stopsets;
pub mod tanner;

pub use error::{Error, Result};
pub use tanner::{Girth, TannerGraph, VnSet};
