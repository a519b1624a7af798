use crate::error::{Error, Result};
use crate::evolve::{
    build_trotter_ubm, dense_trotter_evolution, run_evolution, Boundary, EvolveConfig, Mode, MonitorConfig,
    MonitorKind, Projector, Trajectory,
};
use crate::exec::Exec;
use crate::logmath::C64;
use crate::nqs::UbmNns;
use crate::oracle::{densify, fidelity, OracleCaps};
use crate::rng::split_seed;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrotterUbmConfig {
    pub n: usize,
    pub steps: usize,
    pub tau: f64,
    #[serde(default = "one")]
    pub j_coupling: f64,
    pub h_field: f64,
    #[serde(default = "open")]
    pub boundary: Boundary,
    /// Compare with the dense Trotter circuit when the caps allow it.
    #[serde(default = "yes")]
    pub oracle_check: bool,
}

fn one() -> f64 {
    1.0
}
fn open() -> Boundary {
    Boundary::Open
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone)]
pub struct TrotterUbmReport {
    pub state: UbmNns,
    pub w_v: C64,
    pub w_h: f64,
    pub oracle_fidelity: Option<f64>,
}

pub fn run_trotter_ubm(cfg: &TrotterUbmConfig) -> Result<TrotterUbmReport> {
    let t = build_trotter_ubm(cfg.n, cfg.steps, cfg.tau, cfg.j_coupling, cfg.h_field, cfg.boundary)?;
    let oracle_fidelity = if cfg.oracle_check {
        if cfg.n > OracleCaps::default().max_visible {
            return Err(Error::Resource(format!("{} sites exceed the dense cap", cfg.n)));
        }
        let ecfg = EvolveConfig {
            n: cfg.n,
            j_coupling: cfg.j_coupling,
            h_field: cfg.h_field,
            tau: cfg.tau,
            steps: cfg.steps,
            boundary: cfg.boundary,
            mode: Mode::Imaginary,
            projector: Projector::None,
            seed: 0,
            oracle_checks: true,
            monitor: MonitorConfig { kind: MonitorKind::Dense, ..Default::default() },
        };
        let reference = dense_trotter_evolution(&ecfg, cfg.steps)?.pop().expect("nonempty");
        Some(fidelity(&densify(&t.state)?, &reference)?)
    } else {
        None
    };
    Ok(TrotterUbmReport { w_v: t.w_v, w_h: t.w_h, oracle_fidelity, state: t.state })
}

/// Runs one trajectory per `τ` at the same total time `steps·τ` of `base`.
pub fn run_evolve_sweep(base: &EvolveConfig, taus: &[f64], exec: Exec) -> Result<Vec<Trajectory>> {
    base.validate()?;
    let total = base.steps as f64 * base.tau;
    let cfgs: Vec<EvolveConfig> = taus
        .iter()
        .enumerate()
        .map(|(i, &tau)| EvolveConfig {
            tau,
            steps: ((total / tau).round() as usize).max(1),
            seed: split_seed(base.seed, i as u64),
            ..base.clone()
        })
        .collect();
    for c in &cfgs {
        c.validate()?;
    }
    exec.try_map(cfgs.len(), |i| run_evolution(&cfgs[i]))
}
