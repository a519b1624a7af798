//! Trotterized evolution of the transverse-field Ising chain
//! `H = -J (Σ σz σz + h Σ σx)`.

mod dense;
mod run;
mod ubm;

pub use dense::{dense_trotter_step, dense_trotter_evolution};
pub use run::{run_evolution, run_imaginary, run_real, StepRecord, Trajectory};
pub use ubm::{build_trotter_ubm, TrotterUbm, TROTTER_UBM_MAX_HIDDEN};

use crate::error::{Error, Result};
use crate::logmath::{C64, ZERO};
use crate::nno::{apply_one_body, apply_zz_exponent, g1_nno, Nno};
use crate::nqs::{RbmNns, UbmNns};
use crate::oracle::bonds;
use crate::projection::{method2_deltas, project_method1, Method1Variant};
use crate::sampler::SamplerConfig;
use crate::sym::SymMatrix;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Open,
    Periodic,
}

impl Boundary {
    pub fn periodic(self) -> bool {
        self == Boundary::Periodic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Imaginary,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projector {
    Method1Numeric,
    Method1Weak,
    Method1Strong,
    Method2,
    None,
}

impl Projector {
    fn method1(self) -> Option<Method1Variant> {
        match self {
            Projector::Method1Numeric => Some(Method1Variant::Numeric),
            Projector::Method1Weak => Some(Method1Variant::Weak),
            Projector::Method1Strong => Some(Method1Variant::Strong),
            _ => None,
        }
    }
}

/// How observables are measured along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonitorKind {
    /// Dense when `n <= dense_max`, sampler otherwise.
    Auto,
    Dense,
    Sampler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    #[serde(default = "default_kind")]
    pub kind: MonitorKind,
    #[serde(default = "default_dense_max")]
    pub dense_max: usize,
    /// Measure every this many steps (the last step is always measured).
    #[serde(default = "default_every")]
    pub every: usize,
    #[serde(default)]
    pub sampler: SamplerConfig,
}

fn default_kind() -> MonitorKind {
    MonitorKind::Auto
}
fn default_dense_max() -> usize {
    12
}
fn default_every() -> usize {
    1
}

impl Default for MonitorConfig {
    fn default() -> Self {
        MonitorConfig { kind: default_kind(), dense_max: default_dense_max(), every: 1, sampler: SamplerConfig::default() }
    }
}

impl MonitorConfig {
    pub(crate) fn dense(&self, n: usize) -> bool {
        match self.kind {
            MonitorKind::Dense => true,
            MonitorKind::Sampler => false,
            MonitorKind::Auto => n <= self.dense_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub j_coupling: f64,
    pub h_field: f64,
    pub tau: f64,
    pub steps: usize,
    #[serde(default = "periodic")]
    pub boundary: Boundary,
    pub mode: Mode,
    pub projector: Projector,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub oracle_checks: bool,
    #[serde(default)]
    pub monitor: MonitorConfig,
}

fn one() -> f64 {
    1.0
}
fn periodic() -> Boundary {
    Boundary::Periodic
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n = {} but at least 2 sites are needed", self.n)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Config(format!("tau = {} must be positive", self.tau)));
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if !self.j_coupling.is_finite() || !self.h_field.is_finite() {
            return Err(Error::Config("couplings must be finite".into()));
        }
        if self.mode == Mode::Real && self.projector == Projector::Method1Numeric {
            return Err(Error::Config("method1-numeric needs real parameters, i.e. imaginary time".into()));
        }
        if self.monitor.every == 0 {
            return Err(Error::Config("monitor.every must be positive".into()));
        }
        if !self.monitor.dense(self.n) {
            if self.projector == Projector::None {
                return Err(Error::Config("the unprojected track can only be monitored densely".into()));
            }
            self.monitor.sampler.validate()?;
        }
        Ok(())
    }

    pub(crate) fn real_time(&self) -> bool {
        self.mode == Mode::Real
    }

    /// `τJh`.
    pub(crate) fn field_angle(&self) -> f64 {
        self.tau * self.j_coupling * self.h_field
    }

    /// Exponent added to `Y_jk` per bond: `τJ` or `iτJ`.
    pub(crate) fn bond_exponent(&self) -> C64 {
        let c = self.tau * self.j_coupling;
        if self.real_time() { C64::new(0.0, c) } else { C64::new(c, 0.0) }
    }

    /// `g1 = cosh c (1 + A σx)` with `A = tanh c`, or `cos c (1 + A σx)` with `A = i tan c`.
    pub(crate) fn method2_coefficient(&self) -> (C64, C64) {
        let c = self.field_angle();
        if self.real_time() {
            (C64::new(0.0, c.tan()), C64::new(c.cos().abs().ln(), if c.cos() < 0.0 { std::f64::consts::PI } else { 0.0 }))
        } else {
            (C64::new(c.tanh(), 0.0), C64::new(c.cosh().ln(), 0.0))
        }
    }

    fn g1(&self) -> Result<Option<Nno>> {
        if self.field_angle() == 0.0 {
            return Ok(None);
        }
        g1_nno(self.tau, self.j_coupling, self.h_field, self.real_time()).map(Some)
    }
}

/// `|+>^N`: no hidden nodes, every parameter zero.
pub fn initial_plus_state(n: usize) -> RbmNns {
    RbmNns::zeros(n, 0)
}

/// Hidden weight reproducing `exp(c s s')` from one hidden unit: `cosh 2w = e^{2c}`.
pub fn bond_weight(c: C64) -> Result<C64> {
    let target = (2.0 * c).exp();
    let w = 0.5 * target.acosh();
    if !w.re.is_finite() || !w.im.is_finite() || ((2.0 * w).cosh() - target).norm() > 1e-12 * target.norm().max(1.0) {
        return Err(Error::Config(format!("no branch of arccosh reproduces exp(2c) for c = {c}")));
    }
    Ok(w)
}

/// `∏ exp(c σz σz)|+>` with one hidden unit per bond.
pub fn bond_state(n: usize, tau: f64, j: f64, real_time: bool, boundary: Boundary) -> Result<RbmNns> {
    if n < 2 {
        return Err(Error::Config("a bond state needs at least 2 sites".into()));
    }
    let c = if real_time { C64::new(0.0, tau * j) } else { C64::new(tau * j, 0.0) };
    let w = bond_weight(c)?;
    let bl = bonds(n, boundary.periodic());
    let mut wm = Array2::from_elem((bl.len(), n), ZERO);
    for (i, &(p, q)) in bl.iter().enumerate() {
        wm[[i, p]] += w;
        wm[[i, q]] += w;
    }
    RbmNns::new(vec![ZERO; n], vec![ZERO; bl.len()], wm, SymMatrix::zeros(n))
}

/// Periodic bond state: `W_{h,v} = w (δ_{h,v} + δ_{h+1,v})` with `w = arccosh(e^{2τJ})/2`
/// (or `arccosh(e^{2iτJ})/2` in real time).
pub fn initial_bond_state(n: usize, tau: f64, j: f64, real_time: bool) -> Result<RbmNns> {
    bond_state(n, tau, j, real_time, Boundary::Periodic)
}

fn apply_g2(state: &UbmNns, cfg: &EvolveConfig) -> Result<UbmNns> {
    let c = cfg.bond_exponent();
    let mut out = state.clone();
    for (p, q) in bonds(cfg.n, cfg.boundary.periodic()) {
        out = apply_zz_exponent(&out, p, q, c)?;
    }
    Ok(out)
}

/// One step `∏ g2 ∏ g1` keeping the restricted form. Each `g1` is projected as
/// soon as it is applied; `g2` is exact.
pub fn trotter_step(state: &RbmNns, cfg: &EvolveConfig) -> Result<RbmNns> {
    if state.n_visible() != cfg.n {
        return Err(Error::Shape(format!("state has {} sites, config {}", state.n_visible(), cfg.n)));
    }
    let mut cur = state.clone();
    match cfg.projector {
        Projector::None => {
            return Err(Error::Config("projector none leaves the restricted form; use trotter_step_ubm".into()))
        }
        Projector::Method2 => {
            if cfg.field_angle() != 0.0 {
                let (a, log_c) = cfg.method2_coefficient();
                if cur.n_hidden() == 0 {
                    return Err(Error::Config("method2 needs hidden units; start from the bond state".into()));
                }
                for k in 0..cfg.n {
                    let upd = method2_deltas(&cur, k, a)?;
                    let lp = cur.log_prefactor() + log_c;
                    cur = upd.apply(&cur).with_log_prefactor(lp);
                }
            }
        }
        p => {
            let variant = p.method1().expect("method1 projector");
            if let Some(op) = cfg.g1()? {
                for k in 0..cfg.n {
                    let star = apply_one_body(cur.as_ubm(), k, &op)?.into_star()?;
                    cur = project_method1(&star, variant)?.projected;
                }
            }
        }
    }
    apply_g2(cur.as_ubm(), cfg)?.into_rbm()
}

/// Exact step on an unrestricted network: adds one hidden layer of `n` nodes.
pub fn trotter_step_ubm(state: &UbmNns, cfg: &EvolveConfig) -> Result<UbmNns> {
    let mut cur = state.clone();
    if let Some(op) = cfg.g1()? {
        for k in 0..cfg.n {
            cur = apply_one_body(&cur, k, &op)?;
        }
    }
    apply_g2(&cur, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{densify_rbm, fidelity, DenseState};

    fn cfg(mode: Mode, projector: Projector) -> EvolveConfig {
        EvolveConfig {
            n: 4,
            j_coupling: 1.0,
            h_field: 0.5,
            tau: 0.05,
            steps: 3,
            boundary: Boundary::Periodic,
            mode,
            projector,
            seed: 0,
            oracle_checks: false,
            monitor: MonitorConfig::default(),
        }
    }

    #[test]
    fn validation() {
        assert!(cfg(Mode::Imaginary, Projector::Method1Numeric).validate().is_ok());
        assert!(cfg(Mode::Real, Projector::Method1Numeric).validate().is_err());
        let mut c = cfg(Mode::Real, Projector::Method2);
        c.tau = 0.0;
        assert!(c.validate().is_err());
        c.tau = 0.1;
        c.n = 1;
        assert!(c.validate().is_err());
    }

    #[test]
    fn bond_weight_branches() {
        for c in [C64::new(0.005, 0.0), C64::new(0.3, 0.0), C64::new(0.0, 0.005), C64::new(0.0, 0.7)] {
            let w = bond_weight(c).unwrap();
            assert!(((2.0 * w).cosh() - (2.0 * c).exp()).norm() < 1e-12);
        }
        assert_eq!(bond_weight(ZERO).unwrap(), ZERO);
    }

    #[test]
    fn bond_state_is_exact_g2() {
        for real in [false, true] {
            for boundary in [Boundary::Open, Boundary::Periodic] {
                let mut c = cfg(if real { Mode::Real } else { Mode::Imaginary }, Projector::Method2);
                c.boundary = boundary;
                let bs = bond_state(4, c.tau, 1.0, real, boundary).unwrap();
                let reference = dense_trotter_step(&DenseState::uniform(4), &EvolveConfig { h_field: 0.0, ..c }).unwrap();
                let f = fidelity(&densify_rbm(&bs).unwrap(), &reference).unwrap();
                assert!(f > 1.0 - 1e-12, "{real} {boundary:?} {f}");
            }
        }
    }

    #[test]
    fn method1_keeps_hidden_count() {
        let c = cfg(Mode::Imaginary, Projector::Method1Numeric);
        let mut s = initial_plus_state(4);
        for _ in 0..3 {
            s = trotter_step(&s, &c).unwrap();
            assert_eq!(s.n_hidden(), 4);
        }
    }

    #[test]
    fn method2_keeps_hidden_count() {
        let c = cfg(Mode::Real, Projector::Method2);
        let mut s = initial_bond_state(4, c.tau, 1.0, true).unwrap();
        for _ in 0..3 {
            s = trotter_step(&s, &c).unwrap();
            assert_eq!(s.n_hidden(), 4);
        }
    }

    #[test]
    fn tiny_step_is_identity() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        let random = crate::nqs::random::rbm(&mut rng, 4, 4, 0.3);
        let plus = initial_plus_state(4);
        let cases = [
            (&random, Projector::Method2),
            (&plus, Projector::Method1Numeric),
            (&plus, Projector::Method1Strong),
            (&plus, Projector::Method1Weak),
        ];
        for (s, p) in cases {
            let c = EvolveConfig { tau: 1e-6, ..cfg(Mode::Imaginary, p) };
            let out = trotter_step(s, &c).unwrap();
            let f = fidelity(&densify_rbm(s).unwrap(), &densify_rbm(&out).unwrap()).unwrap();
            assert!(f > 1.0 - 1e-6, "{p:?} {f}");
        }
    }
}
