use super::{sub_seed, Table};
use crate::error::Result;
use crate::params::{ParamKind, ParamSpec, Params};
use crate::table::{row, TableBuilder};
use qxsim_core::channels::{capacity_closed_form, capacity_optimized};
use qxsim_core::fsp::{
    eta, fsp_capacity_bound, fsp_search, grover_program, hybrid_quantities, run_trace, signal_channel,
    speedup_capacity_bound, speedup_epsilon, Direction, NonUnitaryMap,
};
use qxsim_core::rng::par_trials;
use qxsim_core::search::SearchInstance;
use rand::Rng;

pub(super) const CAPACITY_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "kappas",
        kind: ParamKind::Floats { min: 1.0, max: 1e6 },
        default: "1.001,1.01,1.05,1.1,1.2",
        help: "condition numbers of M = diag(1, kappa)",
    },
    ParamSpec {
        name: "direction",
        kind: ParamKind::Choice(&["bob-to-alice", "alice-to-bob"]),
        default: "bob-to-alice",
        help: "which party applies the map",
    },
];

pub(super) fn capacity(p: &Params, _seed: u64) -> Result<Table> {
    let direction = match p.choice("direction") {
        "alice-to-bob" => Direction::AliceToBob,
        _ => Direction::BobToAlice,
    };
    let mut t = TableBuilder::new(&[
        "kappa",
        "delta",
        "eps0",
        "eps1",
        "capacity",
        "capacity_optimized",
        "bound_3_8ln2",
        "ratio",
        "bound_holds",
    ]);
    for &kappa in p.floats("kappas") {
        let m = NonUnitaryMap::diagonal(&[1.0, kappa])?;
        let ch = signal_channel(&m, direction)?;
        let cap = capacity_closed_form(ch);
        let bound = fsp_capacity_bound(m.delta());
        t.push(row![kappa, m.delta(), ch.eps0, ch.eps1, cap, capacity_optimized(ch), bound, cap / bound, cap >= bound]);
    }
    Ok(t.finish())
}

pub(super) const SEARCH_PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "n", kind: ParamKind::Int { min: 1, max: 30 }, default: "16", help: "index qubits" },
    ParamSpec {
        name: "kappa",
        kind: ParamKind::Float { min: 1.001, max: 1e6 },
        default: "1.1",
        help: "condition number of the map",
    },
    ParamSpec {
        name: "trials",
        kind: ParamKind::Int { min: 1, max: 100_000 },
        default: "100",
        help: "runs; odd runs have one marked item",
    },
];

pub(super) fn search(p: &Params, seed: u64) -> Result<Table> {
    let n = p.usize("n");
    let m = NonUnitaryMap::diagonal(&[1.0, p.float("kappa")])?;
    let runs = par_trials(sub_seed(seed, 0), p.usize("trials"), |t, rng| -> qxsim_core::Result<_> {
        let marked = (t % 2 == 1).then(|| rng.random_range(0..1u64 << n));
        let mut inst = SearchInstance::new(n, marked)?;
        let out = fsp_search(&mut inst, &m, rng)?;
        Ok((inst.solutions(), out))
    });
    let mut t = TableBuilder::new(&[
        "trial",
        "solutions",
        "decision",
        "correct",
        "map_applications",
        "queries",
        "discrimination",
    ]);
    for (i, run) in runs.into_iter().enumerate() {
        let (s, out) = run?;
        let d = out.decision.solutions();
        t.push(row![i, s, d, d == s, out.map_applications, out.queries, out.discrimination]);
    }
    Ok(t.finish())
}

pub(super) const BBBV_PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "n_items", kind: ParamKind::Int { min: 2, max: 64 }, default: "16", help: "search space size" },
    ParamSpec { name: "queries", kind: ParamKind::Int { min: 1, max: 32 }, default: "3", help: "Grover iterations" },
];

pub(super) fn bbbv(p: &Params, _seed: u64) -> Result<Table> {
    let (n, q) = (p.usize("n_items"), p.usize("queries"));
    let (init, steps) = grover_program(n, q)?;
    let trace = run_trace(&init, &steps)?;
    let h = hybrid_quantities(&trace)?;
    let success_min = trace.success_probabilities().into_iter().fold(f64::INFINITY, f64::min);
    let eps = speedup_epsilon(q, n as u64);
    let cap = speedup_capacity_bound(q, n as u64);
    let mut t = TableBuilder::new(&[
        "k",
        "c_k",
        "d_k",
        "r_k",
        "four_k2",
        "d_within_four_k2",
        "success_min",
        "eta_n",
        "b",
        "payoff_holds",
        "c_recurrence_holds",
        "speedup_epsilon",
        "capacity_bound",
    ]);
    for k in 0..=q {
        let four_k2 = 4.0 * (k * k) as f64;
        t.push(row![
            k,
            h.c[k],
            h.d[k],
            h.r[k],
            four_k2,
            h.d[k] <= four_k2 * (1.0 + 1e-9),
            success_min,
            eta() * n as f64,
            h.b,
            h.payoff_holds,
            h.c_recurrence_holds,
            eps,
            cap,
        ]);
    }
    Ok(t.finish())
}
