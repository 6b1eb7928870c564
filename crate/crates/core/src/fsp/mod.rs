//! Final-state projection: evolution by a fixed invertible but non-unitary matrix
//! followed by renormalization, and what it implies for signaling and search.

mod amplify;
mod hybrid;
mod map;
mod signal;

pub use amplify::{fsp_search, separate_states, FspSearchOutcome, Separation, SEPARATION_CAP};
pub use hybrid::{
    eta, grover_program, hybrid_quantities, run_trace, speedup_capacity_bound, speedup_epsilon, AlgorithmTrace,
    HybridQuantities, Instruction,
};
pub use map::{apply_map, NonUnitaryMap};
pub use signal::{condition_bound_from_tvd, fsp_capacity_bound, search_cost_from_capacity, signal_channel, Direction};
