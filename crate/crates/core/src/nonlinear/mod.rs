//! Cloning, general nonlinear state maps, and the ambiguity of termwise rules.

mod ambiguity;
mod clone;
mod magnify;

pub use ambiguity::{ambiguity, naive_collapse, schmidt_ambiguity_demo, Ambiguity};
pub use clone::{
    clone, clone_search, clone_signal, clone_signal_channel, cnot_clone_gadget, cnot_clone_map, rho_eps,
    CloneSearchOutcome, CloneSignalTrials, CLONE_SEARCH_SAMPLES, CLONE_SEARCH_THRESHOLD,
};
pub use magnify::{
    estimate_magnification, nonlinear_amplify, Amplification, Magnification, NonlinearMap, PROBE_LENGTH,
};
