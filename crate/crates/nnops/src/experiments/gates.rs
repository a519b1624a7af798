//! Seeded check of every rewrite rule against dense gate application.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::nno::{
    apply_k_body, apply_one_body, apply_two_body, apply_z_rotation, apply_zz_rotation, entangling_nno, random,
    Circuit, GateRecord,
};
use crate::nqs::{random as states, RbmNns};
use crate::oracle::{densify, entanglement_entropy, fidelity};
use crate::rng::trial_rng;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, LN_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateKind {
    OneBody,
    TwoBody,
    KBody3,
    ZRotation,
    ZzRotation,
}

impl GateKind {
    pub const ALL: [GateKind; 5] =
        [GateKind::OneBody, GateKind::TwoBody, GateKind::KBody3, GateKind::ZRotation, GateKind::ZzRotation];

    fn arity(self) -> usize {
        match self {
            GateKind::OneBody | GateKind::ZRotation => 1,
            GateKind::TwoBody | GateKind::ZzRotation => 2,
            GateKind::KBody3 => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateVerifyConfig {
    #[serde(default = "cases")]
    pub cases: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "max_visible")]
    pub max_visible: usize,
    #[serde(default = "max_hidden")]
    pub max_hidden: usize,
    /// Parameter half-width for states and operations.
    #[serde(default = "scale")]
    pub scale: f64,
    #[serde(default = "tol")]
    pub tolerance: f64,
}

fn cases() -> usize {
    500
}
fn max_visible() -> usize {
    8
}
fn max_hidden() -> usize {
    6
}
fn scale() -> f64 {
    0.4
}
fn tol() -> f64 {
    1e-10
}

impl Default for GateVerifyConfig {
    fn default() -> Self {
        GateVerifyConfig { cases: cases(), seed: 0, max_visible: max_visible(), max_hidden: max_hidden(), scale: scale(), tolerance: tol() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateKindReport {
    pub kind: GateKind,
    pub cases: usize,
    pub passed: usize,
    pub min_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateVerifyReport {
    pub kinds: Vec<GateKindReport>,
    /// Half-chain entropy after the `λ = π/4` entangler on `|+>|+>`.
    pub entangler_entropy: f64,
    pub all_passed: bool,
}

fn case(cfg: &GateVerifyConfig, kind: GateKind, ki: usize, i: usize) -> Result<f64> {
    let mut rng = trial_rng(cfg.seed, (ki * cfg.cases + i) as u64);
    let n = rng.random_range(3..=cfg.max_visible.max(3));
    let m = rng.random_range(0..=cfg.max_hidden);
    let state = states::ubm(&mut rng, n, m, cfg.scale);
    let sites = sample(&mut rng, n, kind.arity()).into_vec();
    let (rewritten, record) = match kind {
        GateKind::ZRotation | GateKind::ZzRotation => {
            let theta = rng.random_range(-PI..PI);
            if kind == GateKind::ZRotation {
                (apply_z_rotation(&state, sites[0], theta)?, GateRecord::z_rot(sites[0], theta))
            } else {
                (apply_zz_rotation(&state, sites[0], sites[1], theta)?, GateRecord::zz_rot(sites[0], sites[1], theta))
            }
        }
        _ => {
            let op = random::nno(&mut rng, kind.arity(), cfg.scale);
            match kind {
                GateKind::OneBody => (apply_one_body(&state, sites[0], &op)?, GateRecord::one_body(sites[0], &op)),
                GateKind::TwoBody => {
                    (apply_two_body(&state, sites[0], sites[1], &op)?, GateRecord::two_body(sites[0], sites[1], &op))
                }
                _ => (apply_k_body(&state, &sites, &op)?, GateRecord::k_body(&sites, &op)),
            }
        }
    };
    let reference = Circuit { gates: vec![record] }.apply_dense(&densify(&state)?)?;
    fidelity(&densify(&rewritten)?, &reference)
}

pub fn run_gate_verify(cfg: &GateVerifyConfig, exec: Exec) -> Result<GateVerifyReport> {
    if cfg.cases == 0 || cfg.max_visible < 3 || cfg.max_visible > 16 {
        return Err(Error::Config("gate-verify needs cases >= 1 and 3 <= max_visible <= 16".into()));
    }
    let mut kinds = Vec::new();
    for (ki, kind) in GateKind::ALL.into_iter().enumerate() {
        let fids = exec.try_map(cfg.cases, |i| case(cfg, kind, ki, i))?;
        kinds.push(GateKindReport {
            kind,
            cases: cfg.cases,
            passed: fids.iter().filter(|&&f| f >= 1.0 - cfg.tolerance).count(),
            min_fidelity: fids.iter().copied().fold(1.0, f64::min),
        });
    }
    let plus = RbmNns::zeros(2, 0);
    let ent = apply_two_body(plus.as_ubm(), 0, 1, &entangling_nno(FRAC_PI_4))?;
    let entangler_entropy = entanglement_entropy(&densify(&ent)?, 1)?;
    let all_passed = kinds.iter().all(|k| k.passed == k.cases) && (entangler_entropy - LN_2).abs() < 1e-10;
    Ok(GateVerifyReport { kinds, entangler_entropy, all_passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_verify() {
        let r = run_gate_verify(&GateVerifyConfig { cases: 10, ..Default::default() }, Exec::Sequential).unwrap();
        assert!(r.all_passed, "{r:?}");
    }
}
