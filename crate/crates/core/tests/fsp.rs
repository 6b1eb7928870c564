use qxsim_core::channels::capacity_closed_form;
use qxsim_core::fsp::{
    apply_map, condition_bound_from_tvd, eta, fsp_capacity_bound, fsp_search, grover_program, hybrid_quantities,
    run_trace, search_cost_from_capacity, separate_states, signal_channel, speedup_epsilon, Direction, NonUnitaryMap,
};
use qxsim_core::qcore::{haar_state, haar_unitary, PureState};
use qxsim_core::rng::trial_rng;
use qxsim_core::search::SearchInstance;
use std::f64::consts::LN_2;

#[test]
fn receiver_bias_is_the_squared_singular_value_share() {
    let mut rng = trial_rng(100, 0);
    for d in 2..=5 {
        let u = haar_unitary(d, &mut rng);
        let v = haar_unitary(d, &mut rng);
        let s: Vec<f64> = (0..d).map(|i| 1.0 + 0.3 * i as f64).collect();
        let diag = qxsim_core::qcore::CMatrix::from_diagonal(&qxsim_core::qcore::CVector::from_iterator(
            d,
            s.iter().map(|&x| qxsim_core::qcore::C64::new(x, 0.0)),
        ));
        let m = NonUnitaryMap::new(&u * diag * v.adjoint()).unwrap();
        let ch = signal_channel(&m, Direction::BobToAlice).unwrap();
        let (lo, hi) = (s[0], s[d - 1]);
        assert!((ch.eps0 - 0.5).abs() < 1e-12);
        assert!((ch.eps1 - lo * lo / (lo * lo + hi * hi)).abs() < 1e-12);
    }
}

#[test]
fn capacity_coefficient_near_unitarity() {
    // eps1 = 1/(1 + kappa^2) = 1/2 - delta/2 + O(delta^2), so C = delta^2 / (8 ln 2) + O(delta^3).
    for delta in [1e-4, 1e-3] {
        let m = NonUnitaryMap::diagonal(&[1.0, 1.0 + delta]).unwrap();
        let c = capacity_closed_form(signal_channel(&m, Direction::BobToAlice).unwrap());
        let ratio = c / (delta * delta / (8.0 * LN_2));
        assert!((ratio - 1.0).abs() < 0.01, "delta={delta}: {ratio}");
        assert!((fsp_capacity_bound(delta) / (delta * delta / (8.0 * LN_2)) - 3.0).abs() < 1e-12);
    }
}

#[test]
fn unitary_maps_cannot_signal() {
    let mut rng = trial_rng(101, 0);
    let m = NonUnitaryMap::new(haar_unitary(3, &mut rng)).unwrap();
    for dir in [Direction::AliceToBob, Direction::BobToAlice] {
        assert!(capacity_closed_form(signal_channel(&m, dir).unwrap()) < 1e-12);
    }
}

#[test]
fn map_is_normalized_matrix_action() {
    let mut rng = trial_rng(102, 0);
    let m = NonUnitaryMap::diagonal(&[1.0, 2.0, 3.0]).unwrap();
    let s = haar_state(1, &mut rng).unwrap().tensor(&PureState::from_real(&[1.0]).unwrap()).unwrap();
    let s = PureState::normalized(vec![3], {
        let mut v = qxsim_core::qcore::CVector::zeros(3);
        v[0] = s.amp(0);
        v[2] = s.amp(1);
        v
    })
    .unwrap();
    let out = apply_map(&m, &s).unwrap();
    let raw = [s.amp(0), s.amp(1) * 2.0, s.amp(2) * 3.0];
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for (i, z) in raw.iter().enumerate() {
        assert!((out.amp(i) - z / norm).norm() < 1e-14);
    }
}

#[test]
fn separation_reaches_target_from_tiny_angles() {
    let m = NonUnitaryMap::diagonal(&[1.0, 2.0]).unwrap();
    let a = PureState::from_real(&[1.0, 0.0]).unwrap();
    let t = 2f64.powi(-16);
    let b = PureState::from_real(&[t.cos(), t.sin()]).unwrap();
    let sep = separate_states(&m, &a, &b, 0.3).unwrap();
    assert!(sep.a.trace_distance(&sep.b) >= 0.3);
    assert!(sep.iterations <= 26);
    assert_eq!(sep.unitaries.len(), sep.iterations);
}

#[test]
fn grover_hybrid_quantities() {
    let (init, steps) = grover_program(16, 3).unwrap();
    let trace = run_trace(&init, &steps).unwrap();
    let h = hybrid_quantities(&trace).unwrap();
    let expected = (7.0 * 0.25f64.asin()).sin().powi(2);
    for p in trace.success_probabilities() {
        assert!((p - expected).abs() < 1e-12);
    }
    assert!(h.r.iter().all(|r| r.abs() <= 1e-9));
    for k in 0..=3 {
        assert!(h.d[k] <= 4.0 * (k * k) as f64 * (1.0 + 1e-9));
    }
    assert!(h.d[3] >= eta() * 16.0);
}

#[test]
fn single_query_search() {
    let m = NonUnitaryMap::diagonal(&[1.0, 1.1]).unwrap();
    for t in 0..20u64 {
        let marked = (t % 2 == 1).then_some(t * 977 % 65_536);
        let mut inst = SearchInstance::new(16, marked).unwrap();
        let out = fsp_search(&mut inst, &m, &mut trial_rng(103, t)).unwrap();
        assert_eq!(out.decision.solutions(), inst.solutions());
        assert_eq!(out.queries, 1);
        assert!(out.map_applications <= 130);
    }
}

#[test]
fn inversions() {
    let kappa = condition_bound_from_tvd(0.1).unwrap();
    // Delta = (1/2)(kappa^2 - 1) at the bound.
    assert!(((kappa * kappa - 1.0) / 2.0 - 0.1).abs() < 1e-12);
    assert_eq!(search_cost_from_capacity(1 << 20, 1.0).unwrap(), 20);
    assert!((speedup_epsilon(1, 1 << 20) - (eta() / 2.0 - 2.0 / (1u64 << 20) as f64)).abs() < 1e-15);
}
