//! Simulation of quantum dynamics under modified rules: final-state projection,
//! a deformed Born rule, cloning, and postselection onto generic states, together
//! with the classical channel and search-complexity bookkeeping that relates them.

pub mod born;
pub mod channels;
mod error;
pub mod fsp;
pub mod genpost;
pub mod nonlinear;
pub mod qcore;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
