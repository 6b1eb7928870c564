use super::{sub_seed, Table};
use crate::error::Result;
use crate::params::{ParamKind, ParamSpec, Params};
use crate::table::{row, TableBuilder};
use qxsim_core::channels::{capacity_closed_form, capacity_optimized, BinaryChannel};
use qxsim_core::fsp::NonUnitaryMap;
use qxsim_core::genpost::{gadget_postselect_zero, haar_rms_overlap, GadgetMode, GenericPostselector};
use qxsim_core::nonlinear::{
    ambiguity, estimate_magnification, nonlinear_amplify, schmidt_ambiguity_demo, NonlinearMap,
};
use qxsim_core::qcore::{haar_state, PureState};
use qxsim_core::rng::{par_trials, trial_rng};
use rayon::prelude::*;

pub(super) const OVERLAP_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "n",
        kind: ParamKind::Int { min: 1, max: 10 },
        default: "4",
        help: "qubits of the postselection target",
    },
    ParamSpec {
        name: "samples",
        kind: ParamKind::Int { min: 2, max: 10_000_000 },
        default: "10000",
        help: "Haar samples",
    },
    ParamSpec {
        name: "mode",
        kind: ParamKind::Choice(&["sigma-x", "zi"]),
        default: "sigma-x",
        help: "partner operator",
    },
    ParamSpec {
        name: "gadget_samples",
        kind: ParamKind::Int { min: 0, max: 100_000 },
        default: "100",
        help: "gadget runs compared against the direct overlap (n <= 6)",
    },
];

pub(super) fn overlap(p: &Params, seed: u64) -> Result<Table> {
    let n = p.usize("n");
    let mode = match p.choice("mode") {
        "zi" => GadgetMode::ZI,
        _ => GadgetMode::SigmaX,
    };
    let e = haar_rms_overlap(n, p.usize("samples"), mode, &mut trial_rng(sub_seed(seed, 0), 0))?;
    let gadget_runs = if n <= qxsim_core::genpost::MAX_POSTSELECT_QUBITS { p.usize("gadget_samples") } else { 0 };
    let plus = PureState::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2])?;
    let deviations = par_trials(sub_seed(seed, 1), gadget_runs, |_, rng| -> qxsim_core::Result<f64> {
        let g = GenericPostselector::from_haar(n, rng)?;
        let direct = match mode {
            GadgetMode::SigmaX => g.psi().inner(&g.psi().apply_local(&[0], &qxsim_core::qcore::gates::pauli_x())?),
            GadgetMode::ZI => g.psi().inner(&g.psi().apply_local(&[0], &qxsim_core::qcore::gates::pauli_z())?),
        }
        .norm();
        Ok((gadget_postselect_zero(&g, &plus, 0, mode)?.leak_amplitude - direct).abs())
    })
    .into_iter()
    .collect::<qxsim_core::Result<Vec<f64>>>()?;
    let max_dev = deviations.into_iter().fold(0.0, f64::max);
    let mut t = TableBuilder::new(&[
        "n",
        "samples",
        "mode",
        "mc",
        "exact",
        "std_error",
        "z",
        "rms",
        "inv_sqrt_n_plus_1",
        "mean_abs",
        "gadget_samples",
        "gadget_max_deviation",
    ]);
    let big_n = (1u64 << n) as f64;
    t.push(row![
        n,
        e.samples,
        p.choice("mode"),
        e.mc,
        e.exact,
        e.std_error,
        e.z,
        e.mc.sqrt(),
        1.0 / (big_n + 1.0).sqrt(),
        e.mean_abs,
        gadget_runs,
        max_dev,
    ]);
    Ok(t.finish())
}

pub(super) const AMPLIFY_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "kappas",
        kind: ParamKind::Floats { min: 1.0, max: 1e3 },
        default: "1.1,1.5,2,2.25",
        help: "S is the normalized action of diag(1, kappa)",
    },
    ParamSpec {
        name: "initial",
        kind: ParamKind::Float { min: 1e-15, max: 1.5 },
        default: "9.5367431640625e-7",
        help: "starting angle between the two states",
    },
    ParamSpec {
        name: "target",
        kind: ParamKind::Float { min: 1e-12, max: 0.999 },
        default: "0.3",
        help: "trace distance to reach",
    },
    ParamSpec {
        name: "samples",
        kind: ParamKind::Int { min: 1, max: 1_000_000 },
        default: "1000",
        help: "random probes for the magnification search",
    },
];

pub(super) fn amplify(p: &Params, seed: u64) -> Result<Table> {
    let (initial, target) = (p.float("initial"), p.float("target"));
    let target_angle = target.asin();
    let a = PureState::from_real(&[1.0, 0.0])?;
    let b = PureState::from_real(&[initial.cos(), initial.sin()])?;
    let mut t = TableBuilder::new(&[
        "kappa",
        "magnification",
        "relative_error",
        "iterations",
        "iteration_bound",
        "initial_angle",
        "final_trace_distance",
    ]);
    for (i, &kappa) in p.floats("kappas").iter().enumerate() {
        let map = NonlinearMap::from_nonunitary(NonUnitaryMap::diagonal(&[1.0, kappa])?);
        let seg = estimate_magnification(&map, p.usize("samples"), &mut trial_rng(sub_seed(seed, i as u64), 0))?;
        let out = nonlinear_amplify(&map, &seg, &a, &b, target_angle)?;
        let bound = ((target_angle / initial).ln() / seg.ratio.ln()).ceil().max(0.0) as usize + 10;
        t.push(row![
            kappa,
            seg.ratio,
            (seg.ratio - kappa).abs() / kappa,
            out.iterations,
            bound,
            initial,
            out.a.trace_distance(&out.b),
        ]);
    }
    Ok(t.finish())
}

pub(super) const GRID_PARAMS: &[ParamSpec] = &[ParamSpec {
    name: "grid",
    kind: ParamKind::Int { min: 1, max: 999 },
    default: "99",
    help: "points per axis, eps = i / (grid + 1)",
}];

pub(super) fn grid(p: &Params, _seed: u64) -> Result<Table> {
    let g = p.usize("grid");
    let step = 1.0 / (g + 1) as f64;
    let cells: Vec<(f64, f64)> =
        (1..=g).flat_map(|i| (1..=g).map(move |j| (i as f64 * step, j as f64 * step))).collect();
    let rows = cells
        .par_iter()
        .map(|&(e0, e1)| -> qxsim_core::Result<_> {
            let ch = BinaryChannel::new(e0, e1)?;
            let (cf, opt) = (capacity_closed_form(ch), capacity_optimized(ch));
            Ok(row![e0, e1, cf, opt, (cf - opt).abs()])
        })
        .collect::<qxsim_core::Result<Vec<_>>>()?;
    let mut t = TableBuilder::new(&["eps0", "eps1", "closed_form", "optimized", "abs_diff"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t.finish())
}

pub(super) const AMBIGUITY_PARAMS: &[ParamSpec] = &[];

pub(super) fn ambiguity_demo(_p: &Params, seed: u64) -> Result<Table> {
    let mut rng = trial_rng(sub_seed(seed, 0), 0);
    let product = haar_state(1, &mut rng)?.tensor(&haar_state(1, &mut rng)?)?;
    let cases = [("epr", schmidt_ambiguity_demo()?), ("product", ambiguity(&product)?)];
    let mut t = TableBuilder::new(&[
        "input", "reading", "a00_re", "a00_im", "a01_re", "a01_im", "a10_re", "a10_im", "a11_re", "a11_im", "distance",
    ]);
    for (input, amb) in cases {
        for (reading, s) in [("computational", &amb.computational), ("hadamard", &amb.hadamard)] {
            let a = |i: usize| s.amp(i);
            t.push(row![
                input,
                reading,
                a(0).re,
                a(0).im,
                a(1).re,
                a(1).im,
                a(2).re,
                a(2).im,
                a(3).re,
                a(3).im,
                amb.distance,
            ]);
        }
    }
    Ok(t.finish())
}
