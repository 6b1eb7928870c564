use qxsim_core::fsp::NonUnitaryMap;
use qxsim_core::nonlinear::{
    clone, clone_search, clone_signal, clone_signal_channel, cnot_clone_map, estimate_magnification, nonlinear_amplify,
    rho_eps, schmidt_ambiguity_demo, NonlinearMap,
};
use qxsim_core::qcore::{gates, haar_state_dims, kron, CMatrix, DensityMatrix, PureState, C64};
use qxsim_core::rng::trial_rng;
use qxsim_core::search::SearchInstance;

/// Clone, CNOT and trace written out with explicit 4x4 matrices.
fn explicit_gadget(rho: &CMatrix) -> CMatrix {
    let joint = kron(rho, rho);
    let cnot = gates::cnot();
    let after = &cnot * joint * cnot.adjoint();
    CMatrix::from_fn(2, 2, |i, j| after[(2 * i, 2 * j)] + after[(2 * i + 1, 2 * j + 1)])
}

#[test]
fn clone_map_against_explicit_matrices() {
    let mut rng = trial_rng(120, 0);
    for _ in 0..1000 {
        let s = haar_state_dims(vec![2, 2], &mut rng).unwrap();
        let rho = DensityMatrix::from_pure(&s).unwrap().partial_trace(&[1]).unwrap();
        let diff = (cnot_clone_map(&rho).unwrap().matrix() - explicit_gadget(rho.matrix()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-12);
    }
}

#[test]
fn eps_family_recursion() {
    let mut eps: f64 = 0.1;
    let mut rho = rho_eps(eps).unwrap();
    for _ in 0..10 {
        rho = cnot_clone_map(&rho).unwrap();
        eps = 2.0 * eps - 2.0 * eps * eps;
        assert!((rho.entry(0, 1).re - (0.5 - eps)).abs() < 1e-15);
        assert!(rho.entry(0, 1).im.abs() < 1e-15);
    }
}

#[test]
fn clone_keeps_correlations_on_the_original() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let epr = DensityMatrix::from_pure(&PureState::from_real(&[h, 0.0, 0.0, h]).unwrap()).unwrap();
    let out = clone(&epr, 1).unwrap();
    // Original pair still maximally entangled; the copy is uncorrelated.
    assert!((out.partial_trace(&[0, 1]).unwrap().purity() - 1.0).abs() < 1e-12);
    assert!((out.partial_trace(&[0, 2]).unwrap().purity() - 0.25).abs() < 1e-12);
}

#[test]
fn clone_search_cases() {
    for n in [8, 12, 16, 20] {
        for t in 0..50u64 {
            let marked = (t % 2 == 1).then_some(t % (1 << n));
            let mut inst = SearchInstance::new(n, marked).unwrap();
            let out = clone_search(&mut inst, &mut trial_rng(121, t + 1000 * n as u64)).unwrap();
            assert_eq!(out.decision.solutions(), inst.solutions());
            assert!(out.iterations <= n + 6);
            assert_eq!(out.queries, 1);
        }
    }
}

#[test]
fn cloning_signals() {
    for k in [3u32, 5, 8] {
        assert!((clone_signal_channel(k).unwrap().eps0 - 2f64.powi(1 - k as i32)).abs() < 1e-15);
        let out = clone_signal(k, 10_000, &mut trial_rng(122, k as u64)).unwrap();
        let p = out.exact.eps0;
        assert_eq!(out.measured_all_equal, 1.0);
        assert!((out.unmeasured_all_equal - p).abs() <= 3.0 * (p * (1.0 - p) / 10_000.0).sqrt());
    }
}

#[test]
fn amplification_with_a_diagonal_map() {
    let map = NonlinearMap::from_nonunitary(NonUnitaryMap::diagonal(&[1.0, 2.0]).unwrap());
    let seg = estimate_magnification(&map, 1000, &mut trial_rng(123, 0)).unwrap();
    assert!((seg.ratio - 2.0).abs() / 2.0 < 0.05);
    let d = 2f64.powi(-20);
    let a = PureState::from_real(&[1.0, 0.0]).unwrap();
    let b = PureState::from_real(&[d.cos(), d.sin()]).unwrap();
    let out = nonlinear_amplify(&map, &seg, &a, &b, 0.3f64.asin()).unwrap();
    assert!(out.a.trace_distance(&out.b) >= 0.3 - 1e-12);
    assert!(out.iterations <= 30);
}

#[test]
fn custom_maps_are_checked() {
    let squash = NonlinearMap::new(vec![2], |s: &PureState| {
        let v = s.amps().map(|z| C64::new(z.norm_sqr(), 0.0));
        PureState::normalized(vec![2], v)
    });
    let s = PureState::from_real(&[0.6, 0.8]).unwrap();
    let out = squash.apply(&s).unwrap();
    assert!((out.amp(0).re - 0.36 / (0.36f64.powi(2) + 0.64f64.powi(2)).sqrt()).abs() < 1e-15);
}

#[test]
fn ambiguity() {
    let out = schmidt_ambiguity_demo().unwrap();
    assert!((out.distance - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-12);
}
