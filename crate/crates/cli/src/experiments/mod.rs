//! The experiment registry.

mod born;
mod clone;
mod fsp;
mod misc;

use crate::error::Result;
use crate::params::{ParamSpec, Params};
use crate::table::Value;
use qxsim_core::rng::trial_rng;
use rand::Rng;

pub(crate) type Table = (Vec<String>, Vec<Vec<Value>>);

/// Independent master seed for one part of an experiment.
pub(crate) fn sub_seed(seed: u64, tag: u64) -> u64 {
    trial_rng(seed, u64::MAX - tag).random()
}

/// A registered experiment.
#[derive(Debug, Clone, Copy)]
pub struct Experiment {
    pub name: &'static str,
    /// Where the reproduced result lives in the source material.
    pub anchor: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    run: fn(&Params, u64) -> Result<Table>,
}

impl Experiment {
    pub(crate) fn execute(&self, params: &Params, seed: u64) -> Result<Table> {
        (self.run)(params, seed)
    }
}

static REGISTRY: &[Experiment] = &[
    Experiment {
        name: "fsp-capacity",
        anchor: "Thm A.1",
        summary: "signaling capacity of a non-unitary map versus the 3/(8 ln 2) delta^2 bound",
        params: fsp::CAPACITY_PARAMS,
        run: fsp::capacity,
    },
    Experiment {
        name: "fsp-search",
        anchor: "Appendix A.4",
        summary: "single-query search by repeated non-unitary state separation",
        params: fsp::SEARCH_PARAMS,
        run: fsp::search,
    },
    Experiment {
        name: "bbbv",
        anchor: "Appendix A.3",
        summary: "hybrid-argument sums C_k, D_k, R_k for Grover search",
        params: fsp::BBBV_PARAMS,
        run: fsp::bbbv,
    },
    Experiment {
        name: "born-gadget",
        anchor: "Appendix B, Thm bornimpliesNP / bornimpliesFTL",
        summary: "postselection, teleportation signaling and search under a deformed Born rule",
        params: born::GADGET_PARAMS,
        run: born::gadget,
    },
    Experiment {
        name: "born-bounds",
        anchor: "Appendix B, Cor. groverconstant / Thm signalingimpliesborn",
        summary: "lower bounds on the Born-rule deviation from search and signaling",
        params: born::BOUNDS_PARAMS,
        run: born::bounds,
    },
    Experiment {
        name: "clone-search",
        anchor: "Appendix C, Thm clonesearch",
        summary: "single-query search by iterating the clone-CNOT map",
        params: clone::SEARCH_PARAMS,
        run: clone::search,
    },
    Experiment {
        name: "clone-signal",
        anchor: "Appendix C, superluminal signaling using cloning",
        summary: "all-equal statistics of k measured clones",
        params: clone::SIGNAL_PARAMS,
        run: clone::signal,
    },
    Experiment {
        name: "haar-overlap",
        anchor: "Appendix D",
        summary: "mean squared overlap of a Haar state with its partner, and the postselection gadget",
        params: misc::OVERLAP_PARAMS,
        run: misc::overlap,
    },
    Experiment {
        name: "nlamp",
        anchor: "Appendix E, Thm magtheorem",
        summary: "magnification estimate and separation amplification of a nonlinear map",
        params: misc::AMPLIFY_PARAMS,
        run: misc::amplify,
    },
    Experiment {
        name: "channel-grid",
        anchor: "Appendix A.1 / A.5",
        summary: "closed-form versus numerically optimized binary channel capacity",
        params: misc::GRID_PARAMS,
        run: misc::grid,
    },
    Experiment {
        name: "ambiguity",
        anchor: "Appendix F",
        summary: "a termwise collapse rule applied to two decompositions of one state",
        params: misc::AMBIGUITY_PARAMS,
        run: misc::ambiguity_demo,
    },
];

/// Every registered experiment, in a fixed order.
pub fn list_experiments() -> &'static [Experiment] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}
