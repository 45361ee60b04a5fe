//! Exact construction of a compact set built from a Cantor-gap grid, and a
//! certified numeric separation between the Hausdorff content of its
//! complement in the unit square and the continuous analytic capacity of the
//! Cantor square sitting on its boundary.

pub mod capacity;
pub mod certificate;
pub mod cli;
pub mod content;
pub mod enclosure;
pub mod error;
pub mod geometry;
pub mod rational;
pub mod render;
pub mod selector;

pub use enclosure::{Enclosure, EnclosureJson, Precision};
pub use error::{Error, Result};
pub use rational::Rational;
