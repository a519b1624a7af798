//! Gate lists read from JSON and applied either by rewrite rules or densely.

use super::{
    apply_k_body, apply_one_body, apply_two_body, apply_z_rotation, apply_zz_rotation,
    nno_to_matrix, one_body_unitary, Nno, NnoDoc, OneBodyAngles,
};
use crate::error::{Error, Result};
use crate::logmath::{C64, ZERO};
use crate::nqs::UbmNns;
use crate::oracle::{apply_gate_dense, DenseState};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateParams {
    Angles(OneBodyAngles),
    Theta { theta: f64 },
    Nno(NnoDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GateRecord {
    OneBody { sites: Vec<usize>, params: GateParams },
    TwoBody { sites: Vec<usize>, params: GateParams },
    KBody { sites: Vec<usize>, params: GateParams },
    ZRot { sites: Vec<usize>, params: GateParams },
    ZzRot { sites: Vec<usize>, params: GateParams },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Circuit {
    pub gates: Vec<GateRecord>,
}

/// A gate resolved to either a rewrite operation or a diagonal rotation.
enum Resolved {
    Op(Vec<usize>, Nno),
    ZRot(usize, f64),
    ZzRot(usize, usize, f64),
}

fn expect_sites(sites: &[usize], k: usize, kind: &str) -> Result<()> {
    if sites.len() != k {
        return Err(Error::Config(format!("{kind} gate needs {k} sites, got {}", sites.len())));
    }
    Ok(())
}

fn theta_of(p: &GateParams, kind: &str) -> Result<f64> {
    match p {
        GateParams::Theta { theta } => Ok(*theta),
        _ => Err(Error::Config(format!("{kind} gate needs {{\"theta\": ...}} params"))),
    }
}

fn nno_of(p: &GateParams, k: usize) -> Result<Nno> {
    match p {
        GateParams::Nno(doc) => {
            let op = Nno::try_from(doc)?;
            if op.k() != k {
                return Err(Error::Config(format!("operation has K={}, gate acts on {k} sites", op.k())));
            }
            Ok(op)
        }
        GateParams::Angles(a) if k == 1 => Ok(one_body_unitary(*a)),
        _ => Err(Error::Config("gate params must be an operation record".into())),
    }
}

impl GateRecord {
    fn resolve(&self) -> Result<Resolved> {
        Ok(match self {
            GateRecord::OneBody { sites, params } => {
                expect_sites(sites, 1, "one_body")?;
                Resolved::Op(sites.clone(), nno_of(params, 1)?)
            }
            GateRecord::TwoBody { sites, params } => {
                expect_sites(sites, 2, "two_body")?;
                Resolved::Op(sites.clone(), nno_of(params, 2)?)
            }
            GateRecord::KBody { sites, params } => Resolved::Op(sites.clone(), nno_of(params, sites.len())?),
            GateRecord::ZRot { sites, params } => {
                expect_sites(sites, 1, "z_rot")?;
                Resolved::ZRot(sites[0], theta_of(params, "z_rot")?)
            }
            GateRecord::ZzRot { sites, params } => {
                expect_sites(sites, 2, "zz_rot")?;
                Resolved::ZzRot(sites[0], sites[1], theta_of(params, "zz_rot")?)
            }
        })
    }

    pub fn one_body(site: usize, op: &Nno) -> Self {
        GateRecord::OneBody { sites: vec![site], params: GateParams::Nno(NnoDoc::from(op)) }
    }

    pub fn two_body(j: usize, k: usize, op: &Nno) -> Self {
        GateRecord::TwoBody { sites: vec![j, k], params: GateParams::Nno(NnoDoc::from(op)) }
    }

    pub fn k_body(sites: &[usize], op: &Nno) -> Self {
        GateRecord::KBody { sites: sites.to_vec(), params: GateParams::Nno(NnoDoc::from(op)) }
    }

    pub fn z_rot(site: usize, theta: f64) -> Self {
        GateRecord::ZRot { sites: vec![site], params: GateParams::Theta { theta } }
    }

    pub fn zz_rot(j: usize, k: usize, theta: f64) -> Self {
        GateRecord::ZzRot { sites: vec![j, k], params: GateParams::Theta { theta } }
    }
}

impl Circuit {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            g.resolve()?;
        }
        Ok(())
    }

    /// Number of hidden nodes the circuit adds (the sum of body counts of its operations).
    pub fn hidden_growth(&self) -> Result<usize> {
        let mut total = 0;
        for g in &self.gates {
            if let Resolved::Op(sites, _) = g.resolve()? {
                total += sites.len();
            }
        }
        Ok(total)
    }

    /// Applies every gate by its rewrite rule.
    pub fn apply(&self, state: &UbmNns) -> Result<UbmNns> {
        let mut cur = state.clone();
        for g in &self.gates {
            cur = match g.resolve()? {
                Resolved::Op(sites, op) => match sites.len() {
                    1 => apply_one_body(&cur, sites[0], &op)?,
                    2 => apply_two_body(&cur, sites[0], sites[1], &op)?,
                    _ => apply_k_body(&cur, &sites, &op)?,
                },
                Resolved::ZRot(j, t) => apply_z_rotation(&cur, j, t)?,
                Resolved::ZzRot(j, k, t) => apply_zz_rotation(&cur, j, k, t)?,
            };
        }
        Ok(cur)
    }

    /// Applies every gate exactly to a dense state vector.
    pub fn apply_dense(&self, state: &DenseState) -> Result<DenseState> {
        let mut cur = state.clone();
        for g in &self.gates {
            cur = match g.resolve()? {
                Resolved::Op(sites, op) => apply_gate_dense(&cur, &sites, &nno_to_matrix(&op)?)?,
                Resolved::ZRot(j, t) => {
                    let ph = C64::from_polar(1.0, t / 2.0);
                    let u = Array2::from_shape_vec((2, 2), vec![ph.conj(), ZERO, ZERO, ph]).expect("2x2");
                    apply_gate_dense(&cur, &[j], &u)?
                }
                Resolved::ZzRot(j, k, t) => {
                    let ph = C64::from_polar(1.0, t / 2.0);
                    let d = [ph.conj(), ph, ph, ph.conj()];
                    let u = Array2::from_shape_fn((4, 4), |(r, c)| if r == c { d[r] } else { ZERO });
                    apply_gate_dense(&cur, &[j, k], &u)?
                }
            };
        }
        Ok(cur)
    }
}
