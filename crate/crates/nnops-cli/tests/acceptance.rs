//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p nnops-cli --test acceptance`; append criterion
//! numbers (e.g. `-- 3 5`) to run a subset.

use ndarray::{array, Array2};
use nnops::evolve::{run_imaginary, run_real, Boundary, EvolveConfig, Mode, MonitorConfig, Projector};
use nnops::experiments::{run_fig5, run_gate_verify, Fig5Config, GateKind, GateVerifyConfig};
use nnops::logmath::{log_2cosh, C64};
use nnops::nno::{check_nno_unitary, param_count, random as ops, Circuit, GateRecord, Nno};
use nnops::nqs::{random as states, star_log_amplitude};
use nnops::oracle::{apply_gate_dense, densify, densify_rbm, exact_ground, infidelity, tfi_expectations};
use nnops::projection::{chi_log, infidelity_first_order, log_f_factor, method2_deltas, variance_pq};
use nnops::rng::{split_seed, trial_rng};
use nnops::sampler::{estimate_observable, joint_ubm_sample, JointTarget, Observable, SamplerConfig};
use nnops::sym::SymMatrix;
use nnops::{Error, Exec, RbmNns, SpinConfig};
use rand::Rng;
use std::f64::consts::{LN_2, PI};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

type Outcome = Result<(bool, String), Error>;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn c1_gate_rewrites() -> Outcome {
    let t0 = Instant::now();
    let r = run_gate_verify(&GateVerifyConfig { cases: 500, seed: 1, ..Default::default() }, Exec::default())?;
    let secs = t0.elapsed().as_secs_f64();
    let ok = r.kinds.iter().all(|k| k.passed == k.cases) && secs < 120.0;
    let detail = r
        .kinds
        .iter()
        .map(|k| format!("{:?} {}/{} min F={:.15}", k.kind, k.passed, k.cases, k.min_fidelity))
        .collect::<Vec<_>>()
        .join("; ");
    assert_eq!(r.kinds.len(), GateKind::ALL.len());
    Ok((ok, format!("{detail}; {secs:.1}s (limit 120s)")))
}

fn c2_random_circuits() -> Outcome {
    let mut worst: f64 = 1.0;
    let mut growth_ok = true;
    for seed in 0..50 {
        let mut rng = trial_rng(2, seed);
        let state = states::rbm(&mut rng, 6, 2, 0.3).into_ubm();
        let (mut g1, mut g2) = (0, 0);
        let mut gates = Vec::new();
        for _ in 0..20 {
            if rng.random::<bool>() {
                gates.push(GateRecord::one_body(rng.random_range(0..6), &ops::unitary_nno(&mut rng, 1)));
                g1 += 1;
            } else {
                let j = rng.random_range(0..6);
                let k = (j + rng.random_range(1..6)) % 6;
                gates.push(GateRecord::two_body(j, k, &ops::unitary_nno(&mut rng, 2)));
                g2 += 1;
            }
        }
        let circuit = Circuit { gates };
        let out = circuit.apply(&state)?;
        growth_ok &= out.n_hidden() == state.n_hidden() + g1 + 2 * g2;
        let reference = circuit.apply_dense(&densify(&state)?)?;
        worst = worst.min(1.0 - infidelity(&densify(&out)?, &reference)?);
    }
    Ok((growth_ok && worst >= 1.0 - 1e-8, format!("M growth exact: {growth_ok}; min fidelity {worst:.15} (need >= 1-1e-8)")))
}

/// A unitary with one parameter nudged by `eps`.
fn perturbed(op: &Nno, which: usize, eps: f64) -> Nno {
    let mut p = op.clone();
    match which % 4 {
        0 => p.alpha[0] += eps,
        1 => p.a *= 1.0 + eps,
        2 => {
            let k = p.k();
            let col = (0..k).find(|&c| p.omega[[0, c]] != zero()).expect("permutation entry");
            p.omega[[0, col]] += C64::new(0.0, eps);
        }
        _ => {
            let k = p.k();
            match (0..k).find(|&c| p.omega[[0, c]] == zero()) {
                // a decoration exp(iπ q q') is a constant phase: still unitary
                Some(c) => p.omega[[0, c]] = C64::new(0.0, PI),
                None => p.beta[0] += eps,
            }
        }
    }
    p
}

fn c3_unitarity_checker() -> Outcome {
    let mut disagreements = 0;
    let mut unitary_count = 0;
    let mut total = 0;
    for k in 1..=3usize {
        for i in 0..500u64 {
            let mut rng = trial_rng(3, k as u64 * 1000 + i);
            let op = match i % 4 {
                0 | 1 => ops::unitary_nno(&mut rng, k),
                2 => {
                    let base = ops::unitary_nno(&mut rng, k);
                    perturbed(&base, rng.random_range(0..4), 1e-3)
                }
                _ => ops::nno(&mut rng, k, 0.5),
            };
            let r = check_nno_unitary(&op, 1e-8);
            total += 1;
            unitary_count += r.unitary as usize;
            if r.numeric_agrees(1e-8) != Some(true) {
                disagreements += 1;
            }
        }
    }
    let counts = (param_count(1), param_count(2));
    let ok = disagreements == 0 && counts == ((3, 3), (8, 15));
    Ok((
        ok,
        format!("{disagreements} disagreements in {total} ({unitary_count} unitary); param_count K=1 {:?}, K=2 {:?}", counts.0, counts.1),
    ))
}

fn c4_star_rewrite() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..200u64 {
        let mut rng = trial_rng(4, seed);
        let n = 2 + (seed as usize % 5);
        let star = states::star(&mut rng, n, n, 0.5);
        let u = star.as_ubm();
        for idx in 0..1usize << n {
            let s = SpinConfig::from_index(n, idx);
            let direct = star_log_amplitude(&star, &s)?;
            let mut rewritten = u.visible_log_factor(&s.as_f64()) + log_2cosh(chi_log(&star, &s)?);
            for k in 0..star.hub() {
                rewritten += LN_2 + log_f_factor(&star, k, &s)?;
            }
            worst = worst.max(((rewritten - direct).exp() - 1.0).norm());
        }
    }
    Ok((worst <= 1e-10, format!("max relative deviation {worst:.2e} (need <= 1e-10)")))
}

fn c5_fig5_trends() -> Outcome {
    let t0 = Instant::now();
    let cfg = Fig5Config { seed: 5, ..Default::default() };
    let r = run_fig5(&cfg, Exec::default())?;
    let secs = t0.elapsed().as_secs_f64();
    let at = |x: f64| r.summary.iter().find(|s| s.x_scale == x).expect("x in grid");
    let x0_max = r.rows.iter().filter(|row| row.x_scale == 0.0).flat_map(|row| row.infidelity).fold(0.0, f64::max);
    let (a, b, c) = (x0_max < 1e-12, at(1.0).mean[0] <= at(1.0).mean[1], at(1.0).mean[2] < at(0.2).mean[2]);
    let table = r
        .summary
        .iter()
        .map(|s| format!("x={} [{:.2e} {:.2e} {:.2e}]", s.x_scale, s.mean[0], s.mean[1], s.mean[2]))
        .collect::<Vec<_>>()
        .join(" ");
    Ok((
        a && b && c && secs < 600.0,
        format!("(a) max x=0 infidelity {x0_max:.1e}: {a}; (b) numeric<=weak at x=1: {b}; (c) strong x=1 < x=0.2: {c}; {secs:.1}s; means numeric/weak/strong {table}"),
    ))
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn bare_rbm(rng: &mut impl Rng, n: usize, lam: f64) -> Result<RbmNns, Error> {
    let w = Array2::from_shape_fn((n, n), |_| C64::new(rng.random_range(-lam..lam), 0.0));
    RbmNns::new(vec![zero(); n], vec![zero(); n], w, SymMatrix::zeros(n))
}

/// Seed-averaged closed form and full-enumeration first-order infidelity.
fn appendix_c_point(n: usize, lam: f64, a: C64, seeds: u64) -> Result<(f64, f64), Error> {
    let (mut closed, mut exact) = (0.0, 0.0);
    for seed in 0..seeds {
        let mut rng = trial_rng(6, seed * 100 + n as u64);
        let st = bare_rbm(&mut rng, n, lam)?;
        let up = method2_deltas(&st, 0, a)?;
        closed += infidelity_first_order(st.w(), 0, a)?;
        exact += variance_pq(&st, &up, 0, a)? / 2.0;
    }
    Ok((closed / seeds as f64, exact / seeds as f64))
}

fn c6_appendix_c() -> Outcome {
    let a = C64::new(0.0, 1e-3);
    let lams = [1e-3, 1.778e-3, 3.162e-3, 5.623e-3, 1e-2];
    let ns = [4usize, 5, 6, 7, 8, 9, 10];
    let mut worst_ratio: f64 = 0.0;
    let mut lam_pts = Vec::new();
    for &lam in &lams {
        let p = appendix_c_point(8, lam, a, 20)?;
        worst_ratio = worst_ratio.max((p.0 / p.1 - 1.0).abs());
        lam_pts.push(p);
    }
    let mut n_pts = Vec::new();
    for &n in &ns {
        let p = appendix_c_point(n, 5e-3, a, 20)?;
        worst_ratio = worst_ratio.max((p.0 / p.1 - 1.0).abs());
        n_pts.push(p);
    }
    let nf: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let sl_c = slope(&lams, &lam_pts.iter().map(|p| p.0).collect::<Vec<_>>());
    let sl_o = slope(&lams, &lam_pts.iter().map(|p| p.1).collect::<Vec<_>>());
    let sn_c = slope(&nf, &n_pts.iter().map(|p| p.0).collect::<Vec<_>>());
    let sn_o = slope(&nf, &n_pts.iter().map(|p| p.1).collect::<Vec<_>>());
    // the enumeration is the first-order term of the exact dense infidelity
    let mut rng = trial_rng(6, 999);
    let st = bare_rbm(&mut rng, 6, 0.1)?;
    let small = C64::new(0.0, 1e-6);
    let up = method2_deltas(&st, 0, small)?;
    let one = C64::new(1.0, 0.0);
    let exact_state = apply_gate_dense(&densify_rbm(&st)?, &[0], &array![[one, small], [small, one]])?;
    let dense = infidelity(&exact_state, &densify_rbm(&up.apply(&st))?)?;
    let var_half = variance_pq(&st, &up, 0, small)? / 2.0;
    let cross = (dense / var_half - 1.0).abs();
    let ok = (sl_c - 8.0).abs() <= 0.2
        && (sl_o - 8.0).abs() <= 0.2
        && (sn_c - 2.0).abs() <= 0.3
        && (sn_o - 2.0).abs() <= 0.3
        && worst_ratio <= 0.15
        && cross < 0.01;
    Ok((
        ok,
        format!(
            "lambda slope closed {sl_c:.3} oracle {sl_o:.3} (8 +- 0.2); N slope closed {sn_c:.3} oracle {sn_o:.3} (2 +- 0.3); \
             worst |closed/oracle - 1| = {worst_ratio:.2} (<= 0.15); oracle vs dense at lambda=0.1 off by {cross:.1e}"
        ),
    ))
}

fn tfi_config(n: usize, h: f64, tau: f64, steps: usize, mode: Mode, projector: Projector) -> EvolveConfig {
    EvolveConfig {
        n,
        j_coupling: 1.0,
        h_field: h,
        tau,
        steps,
        boundary: Boundary::Periodic,
        mode,
        projector,
        seed: 7,
        oracle_checks: false,
        monitor: MonitorConfig::default(),
    }
}

fn c7_ground_state() -> Outcome {
    let (e0, _) = exact_ground(10, 1.0, 0.5, true)?;
    let e0 = e0 / 10.0;
    let t = run_imaginary(&tfi_config(10, 0.5, 0.005, 1000, Mode::Imaginary, Projector::Method1Numeric))?;
    let best = t.best_energy();
    let rel = (best - e0).abs() / e0.abs();
    let ubm = run_imaginary(&EvolveConfig {
        oracle_checks: true,
        ..tfi_config(10, 0.5, 0.005, 3, Mode::Imaginary, Projector::None)
    })?;
    let f_none = ubm.records.last().and_then(|r| r.oracle_fidelity).unwrap_or(0.0);
    let coarse = run_imaginary(&tfi_config(10, 0.5, 0.02, 250, Mode::Imaginary, Projector::Method1Numeric))?;
    let e_min = coarse.best_energy();
    let e_last = coarse.records.last().expect("records").energy_per_spin;
    let rise = e_last - e_min;
    let rebound = coarse.best_step < 250 && rise > 1e-4 * e_min.abs();
    Ok((
        rel <= 0.02 && f_none >= 1.0 - 1e-9 && rebound,
        format!(
            "tau=0.005 best E/N {best:.6} vs exact {e0:.6}, rel err {rel:.4} (<= 0.02); projector=none fidelity {f_none:.15} (>= 1-1e-9); \
             tau=0.02 min {e_min:.8} at step {} of 250, final {e_last:.8}, rise {rise:.1e} (rebound needs > {:.1e})",
            coarse.best_step,
            1e-4 * e_min.abs()
        ),
    ))
}

fn c8_quench() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for h in [2.0, 0.2] {
        let t = run_real(&EvolveConfig {
            oracle_checks: true,
            ..tfi_config(10, h, 0.005, 100, Mode::Real, Projector::Method2)
        })?;
        let dev = t
            .records
            .iter()
            .filter(|r| r.time <= 0.5 + 1e-12)
            .map(|r| (r.sx - r.oracle_sx.expect("oracle on")).abs())
            .fold(0.0, f64::max);
        let sx0 = t.records[0].sx;
        ok &= dev < 0.05 && (sx0 - 1.0).abs() <= 1e-6;
        parts.push(format!("h={h}: max |dsx| {dev:.4} (< 0.05), sx(0) = {sx0:.12}"));
    }
    Ok((ok, parts.join("; ")))
}

fn c9_sampler() -> Outcome {
    let mut rng = trial_rng(9, 0);
    let state = states::rbm(&mut rng, 8, 8, 0.3);
    let dense = tfi_expectations(&densify_rbm(&state)?, 1.0, 1.0, true)?;
    let (e_exact, sx_exact) = (dense.energy / 8.0, dense.sx);
    let (mut e_in, mut sx_in) = (0, 0);
    for rep in 0..100u64 {
        let cfg = SamplerConfig { seed: split_seed(9, rep), ..Default::default() };
        let e = estimate_observable(&state, Observable::Energy { j: 1.0, h: 1.0, periodic: true }, &cfg, Exec::default())?.estimate;
        let sx = estimate_observable(&state, Observable::Sx, &SamplerConfig { seed: cfg.seed ^ 0x5a5a, ..cfg }, Exec::default())?.estimate;
        e_in += ((e.mean - e_exact).abs() <= 3.0 * e.std_error) as usize;
        sx_in += ((sx.mean - sx_exact).abs() <= 3.0 * sx.std_error) as usize;
    }
    let complex = states::ubm(&mut rng, 4, 3, 0.3);
    let refused = matches!(
        joint_ubm_sample(&complex, &SamplerConfig::default(), JointTarget::Born, Exec::default()),
        Err(Error::SignProblem(_))
    );
    Ok((
        e_in >= 95 && sx_in >= 95 && refused,
        format!("energy within 3 se in {e_in}/100, sx in {sx_in}/100 (>= 95 each); complex UBM refused with sign problem: {refused}"),
    ))
}

fn nnops_cmd(args: &[&str], dir: &Path) -> Result<(), Error> {
    let out = Command::new(env!("CARGO_BIN_EXE_nnops")).args(args).current_dir(dir).output()?;
    if !out.status.success() {
        return Err(Error::Numeric(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))));
    }
    Ok(())
}

fn manifest_config(path: &Path, key: Option<&str>) -> Result<String, Error> {
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let c = &m["config"];
    Ok(serde_json::to_string(key.map_or(c, |k| &c[k]))?)
}

fn c10_reproducibility() -> Outcome {
    let tmp = tempfile::tempdir()?;
    let d = tmp.path();
    std::fs::write(d.join("fig5.json"), r#"{"n":8,"m":8,"x_values":[0.0,0.5,1.0],"states_per_x":6}"#)?;
    std::fs::write(
        d.join("imag.json"),
        r#"{"n":6,"h_field":0.5,"tau":0.05,"steps":20,"mode":"imaginary","projector":"method1-numeric","oracle_checks":true}"#,
    )?;
    std::fs::write(
        d.join("real.json"),
        r#"{"n":6,"h_field":2.0,"tau":0.01,"steps":20,"mode":"real","projector":"method2","oracle_checks":true}"#,
    )?;
    std::fs::write(d.join("sampler.json"), r#"{"n_chains":4,"n_sweeps":600,"n_burnin":100}"#)?;
    let base = ["--threads", "1", "--seed", "42"];
    let run = |sub: &str, cfg: &str, out: &str, extra: &[&str]| {
        let mut a = vec![sub, "--config", cfg, "--out", out];
        a.extend_from_slice(&base);
        a.extend_from_slice(extra);
        nnops_cmd(&a, d)
    };
    run("fig5", "fig5.json", "a_fig5", &[])?;
    run("evolve", "imag.json", "a_imag", &[])?;
    run("evolve", "real.json", "a_real", &[])?;
    run("sample", "sampler.json", "a_sample", &["--state", "a_imag/final_state.json", "--observable", "energy", "--h-field", "0.5"])?;
    // second pass driven by the configurations recorded in the manifests
    std::fs::write(d.join("fig5_m.json"), manifest_config(&d.join("a_fig5/manifest.json"), None)?)?;
    std::fs::write(d.join("imag_m.json"), manifest_config(&d.join("a_imag/manifest.json"), Some("evolve"))?)?;
    std::fs::write(d.join("real_m.json"), manifest_config(&d.join("a_real/manifest.json"), Some("evolve"))?)?;
    std::fs::write(d.join("sampler_m.json"), manifest_config(&d.join("a_sample/manifest.json"), Some("sampler"))?)?;
    run("fig5", "fig5_m.json", "b_fig5", &[])?;
    run("evolve", "imag_m.json", "b_imag", &[])?;
    run("evolve", "real_m.json", "b_real", &[])?;
    run("sample", "sampler_m.json", "b_sample", &["--state", "a_imag/final_state.json", "--observable", "energy", "--h-field", "0.5"])?;
    let files = [
        "fig5/fig5.csv",
        "imag/trajectory.csv",
        "real/trajectory.csv",
        "sample/samples.csv",
        "imag/final_state.json",
    ];
    let mut same = 0;
    for f in files {
        let (dir, name) = f.split_once('/').expect("dir/name");
        let a = std::fs::read(d.join(format!("a_{dir}")).join(name))?;
        let b = std::fs::read(d.join(format!("b_{dir}")).join(name))?;
        same += (a == b && !a.is_empty()) as usize;
    }
    Ok((same == files.len(), format!("{same}/{} output files bit-identical across manifest-driven reruns (--threads 1)", files.len())))
}

fn main() {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(usize, &str, fn() -> Outcome); 10] = [
        (1, "gate-rewrite exactness", c1_gate_rewrites),
        (2, "random circuits on 6 qubits", c2_random_circuits),
        (3, "unitarity checker vs numeric", c3_unitarity_checker),
        (4, "star rewrite identity", c4_star_rewrite),
        (5, "Method I trends", c5_fig5_trends),
        (6, "first-order infidelity scaling", c6_appendix_c),
        (7, "imaginary-time ground state", c7_ground_state),
        (8, "real-time quench", c8_quench),
        (9, "sampler calibration", c9_sampler),
        (10, "reproducibility", c10_reproducibility),
    ];
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        println!("{} [{id}] {name}: {detail} ({:.1}s)", if ok { "PASS" } else { "FAIL" }, t0.elapsed().as_secs_f64());
        if !ok {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
