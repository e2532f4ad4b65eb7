//! Coherent states built on pFq series: special functions, Fock
//! representations, photon statistics, resolution-of-unity weights, phase
//! distributions and analytic representations.

pub mod cli;
pub mod error;
pub mod family;
pub mod ladder;
pub mod phase;
pub mod photstat;
pub mod repr;
pub mod weights;
pub mod quad;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
