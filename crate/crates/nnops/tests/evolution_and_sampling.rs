use nnops::evolve::{
    build_trotter_ubm, dense_trotter_evolution, run_evolution, Boundary, EvolveConfig, Mode, MonitorConfig, Projector,
};
use nnops::experiments::run_evolve_sweep;
use nnops::nqs::random as states;
use nnops::oracle::{densify, densify_rbm, fidelity, tfi_expectations, DenseState};
use nnops::rng::trial_rng;
use nnops::sampler::{estimate_observable, joint_ubm_sample, JointTarget, Observable, SamplerConfig};
use nnops::spin::spins_of_index;
use nnops::Exec;

fn cfg(n: usize, h: f64, tau: f64, steps: usize, mode: Mode, projector: Projector) -> EvolveConfig {
    EvolveConfig {
        n,
        j_coupling: 1.0,
        h_field: h,
        tau,
        steps,
        boundary: Boundary::Open,
        mode,
        projector,
        seed: 3,
        oracle_checks: true,
        monitor: MonitorConfig::default(),
    }
}

fn zz_dense(d: &DenseState, i: usize, j: usize) -> f64 {
    let p = d.probabilities();
    let total: f64 = p.iter().sum();
    let zz = |idx: usize| {
        let s = spins_of_index(d.n(), idx);
        s[i] * s[j]
    };
    p.iter().enumerate().map(|(idx, w)| w * zz(idx)).sum::<f64>() / total
}

#[test]
fn unrestricted_track_follows_dense_trotter_circuit() {
    let c = cfg(5, 0.7, 0.05, 4, Mode::Imaginary, Projector::None);
    let t = run_evolution(&c).unwrap();
    for r in &t.records {
        assert!(r.oracle_fidelity.unwrap() > 1.0 - 1e-10, "step {} fidelity {:?}", r.step, r.oracle_fidelity);
    }
    let dense = dense_trotter_evolution(&c, 4).unwrap();
    assert!(fidelity(&densify(&t.final_state).unwrap(), dense.last().unwrap()).unwrap() > 1.0 - 1e-10);
}

#[test]
fn layered_network_matches_dense_trotter_circuit() {
    let c = cfg(4, 0.5, 0.1, 2, Mode::Imaginary, Projector::None);
    let net = build_trotter_ubm(4, 2, 0.1, 1.0, 0.5, Boundary::Open).unwrap();
    let dense = dense_trotter_evolution(&c, 2).unwrap();
    assert!(fidelity(&densify(&net.state).unwrap(), dense.last().unwrap()).unwrap() > 1.0 - 1e-10);
}

#[test]
fn joint_sampler_reproduces_dense_correlations() {
    let net = build_trotter_ubm(4, 2, 0.1, 1.0, 0.5, Boundary::Open).unwrap();
    let d = densify(&net.state).unwrap();
    let sc = SamplerConfig { n_chains: 8, n_sweeps: 6000, n_burnin: 500, seed: 17, ..Default::default() };
    let est = joint_ubm_sample(&net.state, &sc, JointTarget::Born, Exec::default()).unwrap();
    for &((i, j), ref e) in &est.zz {
        let exact = zz_dense(&d, i, j);
        assert!((e.mean - exact).abs() < 5.0 * e.std_error + 1e-3, "({i},{j}) {} vs {exact} se {}", e.mean, e.std_error);
    }
}

#[test]
fn metropolis_estimates_are_reproducible_and_calibrated() {
    let s = states::rbm(&mut trial_rng(21, 0), 6, 6, 0.3);
    let exact = tfi_expectations(&densify_rbm(&s).unwrap(), 1.0, 0.8, true).unwrap();
    let sc = SamplerConfig { seed: 5, ..Default::default() };
    let obs = Observable::Energy { j: 1.0, h: 0.8, periodic: true };
    let a = estimate_observable(&s, obs, &sc, Exec::Sequential).unwrap();
    let b = estimate_observable(&s, obs, &sc, Exec::Parallel).unwrap();
    assert_eq!(a.batches, b.batches);
    assert_eq!(a.estimate.mean.to_bits(), b.estimate.mean.to_bits());
    assert!((a.estimate.mean - exact.energy / 6.0).abs() < 5.0 * a.estimate.std_error);
    // the prefactor drops out of every acceptance ratio
    let shifted = s.clone().with_log_prefactor(nnops::C64::new(3.0, 1.0));
    let c = estimate_observable(&shifted, obs, &sc, Exec::Sequential).unwrap();
    assert_eq!(a.batches, c.batches);
}

#[test]
fn method2_real_time_tracks_exact_trotter() {
    let mut c = cfg(6, 1.0, 0.01, 30, Mode::Real, Projector::Method2);
    c.boundary = Boundary::Periodic;
    let t = run_evolution(&c).unwrap();
    assert_eq!(t.records[0].sx, 1.0);
    for r in &t.records {
        assert!((r.sx - r.oracle_sx.unwrap()).abs() < 0.02, "t={} sx {} vs {:?}", r.time, r.sx, r.oracle_sx);
        assert_eq!(r.hidden_count, if r.step == 0 { 0 } else { 6 });
    }
}

#[test]
fn tau_sweep_keeps_total_time() {
    let base = cfg(4, 0.5, 0.1, 5, Mode::Imaginary, Projector::Method1Numeric);
    let runs = run_evolve_sweep(&base, &[0.1, 0.05], Exec::default()).unwrap();
    assert_eq!(runs[0].records.last().unwrap().step, 5);
    assert_eq!(runs[1].records.last().unwrap().step, 10);
    for t in &runs {
        assert!((t.records.last().unwrap().time - 0.5).abs() < 1e-12);
    }
}
