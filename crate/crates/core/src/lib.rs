//! Numerical toolkit for the dynamical time operator `T = α·r/c + βτ₀` of the
//! free (and minimally coupled) Dirac particle.
//!
//! Internally ħ = c = 1. States are four-component spinor fields on a uniform
//! momentum grid; positions act spectrally through the conjugate grid.

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod operators;
pub mod packets;
pub mod dynamics;
pub mod units;
mod par;

pub use error::{Error, Result};
pub use par::configure_threads_from_env;
