//! Equilibria, linear stability and mass-space maps of the planar equilateral
//! restricted four-body problem.

pub mod equilibria;
pub mod error;
pub mod integrator;
pub mod io;
pub mod model;
pub mod scan;
pub mod stability;

pub use error::{ErfbpError, Result};
