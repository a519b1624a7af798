use super::EvolveConfig;
use crate::error::{Error, Result};
use crate::logmath::{C64, ZERO};
use crate::oracle::{apply_gate_dense, bonds, DenseState};
use crate::spin::spins_of_index;
use ndarray::array;

/// Exact dense `∏ g2 ∏ g1`, renormalized.
pub fn dense_trotter_step(state: &DenseState, cfg: &EvolveConfig) -> Result<DenseState> {
    let n = state.n();
    if n != cfg.n {
        return Err(Error::Shape(format!("dense state has {n} sites, config {}", cfg.n)));
    }
    let c = cfg.field_angle();
    let (d, o) = if cfg.real_time() {
        (C64::new(c.cos(), 0.0), C64::new(0.0, c.sin()))
    } else {
        (C64::new(c.cosh(), 0.0), C64::new(c.sinh(), 0.0))
    };
    let g1 = array![[d, o], [o, d]];
    let mut cur = state.clone();
    if c != 0.0 {
        for k in 0..n {
            cur = apply_gate_dense(&cur, &[k], &g1)?;
        }
    }
    let e = cfg.bond_exponent();
    let bl = bonds(n, cfg.boundary.periodic());
    let amps: Vec<C64> = cur
        .amps()
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            if v == ZERO {
                return v;
            }
            let s = spins_of_index(n, idx);
            let zz: f64 = bl.iter().map(|&(p, q)| s[p] * s[q]).sum();
            v * (e * zz).exp()
        })
        .collect();
    DenseState::new(n, amps)?.normalized()
}

/// Dense states after `0..=steps` exact Trotter steps from `|+>`.
pub fn dense_trotter_evolution(cfg: &EvolveConfig, steps: usize) -> Result<Vec<DenseState>> {
    let mut out = vec![DenseState::uniform(cfg.n).normalized()?];
    for _ in 0..steps {
        let next = dense_trotter_step(out.last().expect("nonempty"), cfg)?;
        out.push(next);
    }
    Ok(out)
}
