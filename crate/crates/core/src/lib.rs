//! Numerical one-dimensional polynomial dynamics.
//!
//! The crate is `no_std` and needs only `alloc`. Everything here is pure
//! computation: polynomial iteration, root finding, periodic orbits, local
//! linearizing coordinates, empirical approximations of the equilibrium
//! measure and the hyperbolic geometry of the unit disc. File formats, the
//! command line and thread-level parallelism live in the `cdyn` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod discmaps;
pub mod error;
pub mod linearize;
pub mod measure;
pub mod orbits;
pub mod poly;
pub mod roots;
pub mod sampling;
pub mod series;

pub use error::{Error, Result};
pub use poly::{AffineMap, Complex, Polynomial, SpherePoint};
pub use roots::RootSet;
pub use series::PowerSeries;
