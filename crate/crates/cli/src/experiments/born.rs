use super::{sub_seed, Table};
use crate::error::{CliError, Result};
use crate::params::{ParamKind, ParamSpec, Params};
use crate::table::{row, TableBuilder};
use qxsim_core::born::{
    born_search, delta_bound_from_search, delta_bound_from_signaling, search_ancillas, signaling_tvd,
    simulate_postselect, teleport_signal, BornModel, WeightedBranch, WeightedBranches,
};
use qxsim_core::qcore::{haar_state, haar_unitary, C64};
use qxsim_core::rng::{par_trials, trial_rng};
use qxsim_core::search::SearchInstance;
use rand::Rng;

pub(super) const GADGET_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "deltas",
        kind: ParamKind::Floats { min: -1.99, max: 16.0 },
        default: "1,0.5,0.25",
        help: "Born-rule exponent deviations (nonzero)",
    },
    ParamSpec {
        name: "n",
        kind: ParamKind::Int { min: 1, max: 40 },
        default: "8",
        help: "teleportation leakage target 2^-n",
    },
    ParamSpec {
        name: "inputs",
        kind: ParamKind::Int { min: 1, max: 100_000 },
        default: "100",
        help: "random teleported states",
    },
    ParamSpec {
        name: "search_n",
        kind: ParamKind::Int { min: 1, max: 30 },
        default: "10",
        help: "index qubits for search",
    },
    ParamSpec {
        name: "trials",
        kind: ParamKind::Int { min: 1, max: 100_000 },
        default: "100",
        help: "search runs per delta",
    },
];

fn search_branches(n: usize) -> qxsim_core::Result<WeightedBranches> {
    let amp = C64::new(2f64.powf(-(n as f64) / 2.0), 0.0);
    WeightedBranches::new(vec![
        WeightedBranch { label: 0, amplitude: amp, multiplicity: ((1u64 << n) - 1) as f64 },
        WeightedBranch { label: 1, amplitude: amp, multiplicity: 1.0 },
    ])
}

pub(super) fn gadget(p: &Params, seed: u64) -> Result<Table> {
    let (n, search_n) = (p.int("n") as u32, p.usize("search_n"));
    let mut t = TableBuilder::new(&[
        "delta",
        "teleport_ancillas",
        "teleport_min_fidelity",
        "teleport_fidelity_floor",
        "teleport_max_leakage",
        "search_ancillas",
        "postselect_leakage",
        "closed_form_leakage",
        "leakage_abs_diff",
        "search_success_rate",
        "search_max_queries",
    ]);
    for (i, &delta) in nonzero_deltas(p)?.iter().enumerate() {
        let model = BornModel::new(delta)?;
        let tag = 2 * i as u64;
        let teleports = par_trials(sub_seed(seed, tag), p.usize("inputs"), |_, rng| -> qxsim_core::Result<_> {
            teleport_signal(model, n, &haar_state(1, rng)?)
        })
        .into_iter()
        .collect::<qxsim_core::Result<Vec<_>>>()?;
        let min_fid = teleports.iter().map(|o| o.fidelity).fold(f64::INFINITY, f64::min);
        let max_leak = teleports.iter().map(|o| o.leakage).fold(0.0, f64::max);
        let ancillas = teleports.iter().map(|o| o.ancillas).max().unwrap_or(0);

        let k = search_ancillas(search_n, delta);
        let post = simulate_postselect(&search_branches(search_n)?, model, k, 1)?;
        let w = model.weight(2f64.powf(-(search_n as f64) / 2.0));
        let (w_other, w_keep, s) = (((1u64 << search_n) - 1) as f64 * w, w, (-(k as f64) * delta.abs() / 2.0).exp2());
        let closed = w_other * s / (w_keep + w_other * s);

        let runs = par_trials(sub_seed(seed, tag + 1), p.usize("trials"), |tr, rng| -> qxsim_core::Result<_> {
            let marked = (tr % 2 == 1).then(|| rng.random_range(0..1u64 << search_n));
            let mut inst = SearchInstance::new(search_n, marked)?;
            let out = born_search(&mut inst, model, rng)?;
            Ok((out.decision.solutions() == inst.solutions(), out.queries))
        })
        .into_iter()
        .collect::<qxsim_core::Result<Vec<_>>>()?;
        let rate = runs.iter().filter(|r| r.0).count() as f64 / runs.len() as f64;
        let max_q = runs.iter().map(|r| r.1).max().unwrap_or(0);
        t.push(row![
            delta,
            ancillas,
            min_fid,
            1.0 - 2f64.powi(-(n as i32)),
            max_leak,
            k,
            post.leakage,
            closed,
            (post.leakage - closed).abs(),
            rate,
            max_q,
        ]);
    }
    Ok(t.finish())
}

fn nonzero_deltas(p: &Params) -> Result<&[f64]> {
    let d = p.floats("deltas");
    if d.contains(&0.0) {
        return Err(CliError::bad_param("deltas", "delta = 0 is the standard rule; nothing to simulate"));
    }
    Ok(d)
}

pub(super) const BOUNDS_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "ms",
        kind: ParamKind::Ints { min: 1, max: 1_000_000 },
        default: "1,2,3,4,5,6,7,8",
        help: "qubit counts m",
    },
    ParamSpec {
        name: "queries",
        kind: ParamKind::Int { min: 1, max: 1_000_000 },
        default: "1",
        help: "Q; the search size is N = (24 Q)^2",
    },
    ParamSpec {
        name: "epsilon",
        kind: ParamKind::Float { min: 1e-300, max: 1.0 },
        default: "0.5",
        help: "signal bias",
    },
    ParamSpec { name: "n", kind: ParamKind::Int { min: 1, max: 1_000_000 }, default: "10", help: "signaling qubits" },
    ParamSpec {
        name: "delta",
        kind: ParamKind::Float { min: -1.99, max: 16.0 },
        default: "0.1",
        help: "deviation for the simulated signal",
    },
    ParamSpec {
        name: "states",
        kind: ParamKind::Int { min: 1, max: 100_000 },
        default: "200",
        help: "random 4-qubit states for the simulated signal",
    },
];

pub(super) fn bounds(p: &Params, seed: u64) -> Result<Table> {
    let mut t = TableBuilder::new(&["quantity", "m", "n", "value", "check", "holds"]);
    let q = p.int("queries");
    let n_items = (24 * q).pow(2);
    for &m in p.ints("ms") {
        let v = delta_bound_from_search(q, n_items, m);
        let scaled = v * (12 * m) as f64;
        t.push(row!["search_bound", m, n_items, v, scaled, scaled == 1.0]);
    }
    let (eps, n) = (p.float("epsilon"), p.usize("n"));
    let v = delta_bound_from_signaling(eps, n)?;
    t.push(row!["signaling_bound", 0u64, n, v, v * n as f64 / eps, v == eps / n as f64]);

    let delta = p.float("delta");
    let model = BornModel::new(delta)?;
    let mut rng = trial_rng(sub_seed(seed, 0), 0);
    let mut worst: f64 = 0.0;
    for _ in 0..p.usize("states") {
        let s = haar_state(4, &mut rng)?;
        let u = haar_unitary(4, &mut rng);
        worst = worst.max(signaling_tvd(model, &s, &[0, 1], &u)?);
    }
    let implied = if worst > 0.0 { delta_bound_from_signaling(worst.min(1.0), 4)? } else { 0.0 };
    t.push(row!["signaling_consistency", 0u64, 4u64, worst, implied, implied <= delta.abs()]);
    Ok(t.finish())
}
