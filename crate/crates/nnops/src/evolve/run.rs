use super::{
    bond_state, dense_trotter_step, initial_plus_state, trotter_step, trotter_step_ubm, EvolveConfig, Mode, Projector,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::nqs::UbmNns;
use crate::oracle::{densify, fidelity, tfi_expectations, DenseState, OracleCaps};
use crate::rng::split_seed;
use crate::sampler::{estimate_observable, Observable, SamplerConfig};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    /// `step·τ`, imaginary or real time depending on the mode.
    pub time: f64,
    pub energy_per_spin: f64,
    pub sx: f64,
    pub hidden_count: usize,
    /// Fidelity with the exact dense Trotter state at the same step.
    pub oracle_fidelity: Option<f64>,
    pub oracle_energy_per_spin: Option<f64>,
    pub oracle_sx: Option<f64>,
    /// Sampler standard error of the energy; `None` for dense monitoring.
    pub energy_std_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub config: EvolveConfig,
    pub records: Vec<StepRecord>,
    pub final_state: UbmNns,
    /// State with the lowest measured energy (imaginary time may rebound).
    pub best_state: UbmNns,
    pub best_step: usize,
}

pub const CSV_HEADER: &str = "step,time,energy_per_spin,sx,hidden_count,oracle_fidelity";

impl Trajectory {
    pub fn best_energy(&self) -> f64 {
        self.records.iter().map(|r| r.energy_per_spin).fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let of = r.oracle_fidelity.map(|f| format!("{f:.16e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{},{}\n",
                r.step, r.time, r.energy_per_spin, r.sx, r.hidden_count, of
            ));
        }
        out
    }
}

struct Measurement {
    energy: f64,
    sx: f64,
    std_error: Option<f64>,
}

fn measure(state: &UbmNns, cfg: &EvolveConfig, step: usize) -> Result<Measurement> {
    let n = cfg.n as f64;
    let periodic = cfg.boundary.periodic();
    if cfg.monitor.dense(cfg.n) {
        let e = tfi_expectations(&densify(state)?, cfg.j_coupling, cfg.h_field, periodic)?;
        return Ok(Measurement { energy: e.energy / n, sx: e.sx, std_error: None });
    }
    let rbm = state.clone().into_rbm()?;
    let sc = SamplerConfig { seed: split_seed(cfg.seed, step as u64), ..cfg.monitor.sampler };
    let obs = Observable::Energy { j: cfg.j_coupling, h: cfg.h_field, periodic };
    let e = estimate_observable(&rbm, obs, &sc, Exec::default())?;
    let sx = estimate_observable(&rbm, Observable::Sx, &SamplerConfig { seed: sc.seed ^ 1, ..sc }, Exec::default())?;
    Ok(Measurement { energy: e.estimate.mean, sx: sx.estimate.mean, std_error: Some(e.estimate.std_error) })
}

struct Driver<'a> {
    cfg: &'a EvolveConfig,
    records: Vec<StepRecord>,
    reference: Option<DenseState>,
    best: Option<(f64, usize, UbmNns)>,
}

impl<'a> Driver<'a> {
    fn new(cfg: &'a EvolveConfig) -> Result<Self> {
        let reference = if cfg.oracle_checks {
            if cfg.n > OracleCaps::default().max_visible {
                return Err(Error::Resource(format!("oracle checks need n <= {}", OracleCaps::default().max_visible)));
            }
            Some(DenseState::uniform(cfg.n).normalized()?)
        } else {
            None
        };
        Ok(Driver { cfg, records: Vec::new(), reference, best: None })
    }

    fn advance_reference(&mut self) -> Result<()> {
        if let Some(r) = &self.reference {
            self.reference = Some(dense_trotter_step(r, self.cfg)?);
        }
        Ok(())
    }

    fn record(&mut self, step: usize, state: &UbmNns) -> Result<()> {
        let last = step == self.cfg.steps;
        if step % self.cfg.monitor.every != 0 && !last {
            return Ok(());
        }
        let m = measure(state, self.cfg, step)?;
        let (mut of, mut oe, mut ox) = (None, None, None);
        if let Some(r) = &self.reference {
            of = Some(fidelity(&densify(state)?, r)?);
            let e = tfi_expectations(r, self.cfg.j_coupling, self.cfg.h_field, self.cfg.boundary.periodic())?;
            oe = Some(e.energy / self.cfg.n as f64);
            ox = Some(e.sx);
        }
        if !m.energy.is_finite() {
            return Err(Error::Numeric("energy is not finite".into()));
        }
        if self.best.as_ref().is_none_or(|b| m.energy < b.0) {
            self.best = Some((m.energy, step, state.clone()));
        }
        self.records.push(StepRecord {
            step,
            time: step as f64 * self.cfg.tau,
            energy_per_spin: m.energy,
            sx: m.sx,
            hidden_count: state.n_hidden(),
            oracle_fidelity: of,
            oracle_energy_per_spin: oe,
            oracle_sx: ox,
            energy_std_error: m.std_error,
        });
        Ok(())
    }

    fn finish(self, final_state: UbmNns) -> Trajectory {
        let (_, best_step, best_state) = self.best.expect("step 0 is always recorded");
        Trajectory { config: self.cfg.clone(), records: self.records, final_state, best_state, best_step }
    }
}

fn run_any(cfg: &EvolveConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let mut drv = Driver::new(cfg)?;
    let plus = initial_plus_state(cfg.n).into_ubm();
    drv.record(0, &plus).map_err(|e| e.at_step(0))?;
    let mut state = plus;
    let mut first = 1;
    if cfg.projector == Projector::Method2 {
        // g1 leaves |+> invariant, so one full step is the bond state exactly.
        state = bond_state(cfg.n, cfg.tau, cfg.j_coupling, cfg.real_time(), cfg.boundary)?.into_ubm();
        drv.advance_reference()?;
        drv.record(1, &state).map_err(|e| e.at_step(1))?;
        first = 2;
    }
    for step in first..=cfg.steps {
        let next = if cfg.projector == Projector::None {
            trotter_step_ubm(&state, cfg)
        } else {
            state.into_rbm().and_then(|r| trotter_step(&r, cfg)).map(|r| r.into_ubm())
        };
        state = next.map_err(|e| e.at_step(step))?;
        drv.advance_reference().map_err(|e| e.at_step(step))?;
        drv.record(step, &state).map_err(|e| e.at_step(step))?;
    }
    Ok(drv.finish(state))
}

/// Ground-state preparation by imaginary-time steps.
pub fn run_imaginary(cfg: &EvolveConfig) -> Result<Trajectory> {
    if cfg.mode != Mode::Imaginary {
        return Err(Error::Config("run_imaginary needs mode imaginary".into()));
    }
    run_any(cfg)
}

/// Quench dynamics from `|+>`; only the first-order update keeps the restricted form.
pub fn run_real(cfg: &EvolveConfig) -> Result<Trajectory> {
    if cfg.mode != Mode::Real {
        return Err(Error::Config("run_real needs mode real".into()));
    }
    if !matches!(cfg.projector, Projector::Method2 | Projector::None) {
        return Err(Error::Config("real-time runs use projector method2 (or none)".into()));
    }
    run_any(cfg)
}

pub fn run_evolution(cfg: &EvolveConfig) -> Result<Trajectory> {
    match cfg.mode {
        Mode::Imaginary => run_imaginary(cfg),
        Mode::Real => run_real(cfg),
    }
}
