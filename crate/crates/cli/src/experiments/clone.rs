use super::{sub_seed, Table};
use crate::error::Result;
use crate::params::{ParamKind, ParamSpec, Params};
use crate::table::{row, TableBuilder};
use qxsim_core::channels::capacity_closed_form;
use qxsim_core::nonlinear::{clone_search, clone_signal};
use qxsim_core::rng::{par_trials, trial_rng};
use qxsim_core::search::SearchInstance;
use rand::Rng;

pub(super) const SEARCH_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "ns",
        kind: ParamKind::Ints { min: 1, max: 24 },
        default: "8,12,16,20",
        help: "index qubit counts",
    },
    ParamSpec {
        name: "trials",
        kind: ParamKind::Int { min: 1, max: 1_000_000 },
        default: "1000",
        help: "runs per n; odd runs have one marked item",
    },
];

pub(super) fn search(p: &Params, seed: u64) -> Result<Table> {
    let mut t = TableBuilder::new(&[
        "n",
        "trials",
        "correct",
        "success_rate",
        "max_iterations",
        "iteration_bound",
        "max_queries",
    ]);
    for &n in p.ints("ns") {
        let n = n as usize;
        let runs = par_trials(sub_seed(seed, n as u64), p.usize("trials"), |tr, rng| -> qxsim_core::Result<_> {
            let marked = (tr % 2 == 1).then(|| rng.random_range(0..1u64 << n));
            let mut inst = SearchInstance::new(n, marked)?;
            let out = clone_search(&mut inst, rng)?;
            Ok((out.decision.solutions() == inst.solutions(), out.iterations, out.queries))
        })
        .into_iter()
        .collect::<qxsim_core::Result<Vec<_>>>()?;
        let correct = runs.iter().filter(|r| r.0).count();
        let max_it = runs.iter().map(|r| r.1).max().unwrap_or(0);
        let max_q = runs.iter().map(|r| r.2).max().unwrap_or(0);
        t.push(row![n, runs.len(), correct, correct as f64 / runs.len() as f64, max_it, n + 6, max_q]);
    }
    Ok(t.finish())
}

pub(super) const SIGNAL_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "ks",
        kind: ParamKind::Ints { min: 1, max: 60 },
        default: "1,3,5,8",
        help: "measured copies (original plus clones)",
    },
    ParamSpec {
        name: "trials",
        kind: ParamKind::Int { min: 1, max: 10_000_000 },
        default: "10000",
        help: "shots per branch",
    },
];

pub(super) fn signal(p: &Params, seed: u64) -> Result<Table> {
    let mut t = TableBuilder::new(&[
        "k",
        "trials",
        "exact_eps0",
        "unmeasured_all_equal",
        "measured_all_equal",
        "sigma",
        "z",
        "capacity",
    ]);
    for &k in p.ints("ks") {
        let out = clone_signal(k as u32, p.usize("trials"), &mut trial_rng(sub_seed(seed, k), 0))?;
        let e = out.exact.eps0;
        let sigma = (e * (1.0 - e) / out.trials as f64).sqrt();
        let dev = out.unmeasured_all_equal - e;
        let z = if sigma > 0.0 {
            dev / sigma
        } else if dev == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(dev)
        };
        t.push(row![
            k,
            out.trials,
            e,
            out.unmeasured_all_equal,
            out.measured_all_equal,
            sigma,
            z,
            capacity_closed_form(out.exact)
        ]);
    }
    Ok(t.finish())
}
