//! Finite symmetric sets presented extensionally: EZ-decompositions,
//! reduction graphs, degenerate cycle filling and skeletal levels.

#![allow(clippy::needless_range_loop)]

pub mod cycles;
pub mod error;
pub mod ez;
pub mod finset;
pub mod levels;
pub mod propagraph;
pub mod symset;

pub use error::{Error, Result};
