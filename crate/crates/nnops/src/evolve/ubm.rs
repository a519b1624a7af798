use super::{initial_plus_state, trotter_step_ubm, Boundary, EvolveConfig, Mode, MonitorConfig, Projector};
use crate::error::{Error, Result};
use crate::logmath::{C64, ZERO};
use crate::nqs::UbmNns;
use crate::oracle::bonds;
use std::collections::HashMap;

/// Largest unprojected network `build_trotter_ubm` will produce.
pub const TROTTER_UBM_MAX_HIDDEN: usize = 2048;

/// The unprojected network after `steps` imaginary-time steps, with its edge weights.
#[derive(Debug, Clone)]
pub struct TrotterUbm {
    pub state: UbmNns,
    /// Weight between consecutive copies of the same site, `ln(coth τJh)/2`.
    pub w_v: C64,
    /// Weight between neighbouring sites within a layer, `τJ`.
    pub w_h: f64,
    pub layers: usize,
}

impl TrotterUbm {
    /// Hidden node of site `k` in layer `t` (layers in application order).
    pub fn node(&self, t: usize, k: usize) -> usize {
        t * self.state.n_visible() + k
    }
}

pub fn build_trotter_ubm(n: usize, steps: usize, tau: f64, j: f64, h: f64, boundary: Boundary) -> Result<TrotterUbm> {
    let cfg = EvolveConfig {
        n,
        j_coupling: j,
        h_field: h,
        tau,
        steps,
        boundary,
        mode: Mode::Imaginary,
        projector: Projector::None,
        seed: 0,
        oracle_checks: false,
        monitor: MonitorConfig { kind: super::MonitorKind::Dense, ..Default::default() },
    };
    cfg.validate()?;
    if cfg.field_angle() == 0.0 {
        return Err(Error::DegenerateGate("τJh = 0 adds no hidden layer".into()));
    }
    if n.saturating_mul(steps) > TROTTER_UBM_MAX_HIDDEN {
        return Err(Error::Resource(format!(
            "{} hidden nodes requested, cap is {TROTTER_UBM_MAX_HIDDEN}",
            n.saturating_mul(steps)
        )));
    }
    let mut state = initial_plus_state(n).into_ubm();
    for step in 0..steps {
        state = trotter_step_ubm(&state, &cfg).map_err(|e| e.at_step(step + 1))?;
    }
    let c = tau * j * h;
    let out = TrotterUbm { state, w_v: 0.5 * (C64::new(1.0 / c.tanh(), 0.0)).ln(), w_h: tau * j, layers: steps };
    check_topology(&out, boundary)?;
    Ok(out)
}

/// Every parameter must match the layered grid: `w_v` along time, `w_h` along bonds
/// inside layers after the first, `w_h` on the visible bonds, zero elsewhere.
fn check_topology(t: &TrotterUbm, boundary: Boundary) -> Result<()> {
    let u = &t.state;
    let n = u.n_visible();
    let mut mult: HashMap<(usize, usize), f64> = HashMap::new();
    for (p, q) in bonds(n, boundary.periodic()) {
        *mult.entry((p.min(q), p.max(q))).or_default() += 1.0;
    }
    let bond = |p: usize, q: usize| mult.get(&(p.min(q), p.max(q))).copied().unwrap_or(0.0);
    let mut bad = Vec::new();
    let mut expect = |what: &str, got: C64, want: C64| {
        if (got - want).norm() > 1e-12 * want.norm().max(1.0) {
            bad.push(format!("{what}: {got} vs {want}"));
        }
    };
    let m = u.n_hidden();
    let layer = |g: usize| (g / n, g % n);
    for g in 0..m {
        let (tg, kg) = layer(g);
        expect(&format!("b[{g}]"), u.b()[g], ZERO);
        for v in 0..n {
            let want = if tg + 1 == t.layers && v == kg { t.w_v } else { ZERO };
            expect(&format!("W[{g},{v}]"), u.w()[[g, v]], want);
        }
        for g2 in g + 1..m {
            let (t2, k2) = layer(g2);
            let want = if k2 == kg && t2 == tg + 1 {
                t.w_v
            } else if t2 == tg && tg > 0 {
                C64::new(t.w_h * bond(kg, k2), 0.0)
            } else {
                ZERO
            };
            expect(&format!("X[{g},{g2}]"), u.x().get(g, g2), want);
        }
    }
    for p in 0..n {
        expect(&format!("a[{p}]"), u.a()[p], ZERO);
        for q in p + 1..n {
            expect(&format!("Y[{p},{q}]"), u.y().get(p, q), C64::new(t.w_h * bond(p, q), 0.0));
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Structure(format!("trotter network deviates from the layered grid: {}", bad[..bad.len().min(5)].join("; "))))
    }
}
