//! Enumeration and singularity analysis of small-step walks confined to the
//! quarter plane.

pub mod asymptotics;
pub mod bvp;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod kernel;
pub mod poly;
pub mod quad;
pub mod singular;
pub mod stepset;

pub use error::{Error, Result};
pub use stepset::{DriftData, Sign, StepSet, SymmetryTransform};
