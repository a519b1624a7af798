//! Method I: rewrite the star amplitude as `2cosh(ln χ) ∏ 2f_k` and fit each
//! factor by an RBM hidden unit.

use crate::error::{Error, Result};
use crate::logmath::{log_2cosh, log_2cosh_re, C64, ZERO};
use crate::nqs::{RbmNns, StarUbm, UbmNns};
use crate::spin::SpinConfig;
use crate::sym::SymMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

pub const FIT_TOL: f64 = 1e-10;
pub const FIT_MAX_ITER: usize = 200;
const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method1Variant {
    Numeric,
    Weak,
    Strong,
}

/// `c cosh(β w·s + b')` fitted to `f_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorFit {
    pub c: f64,
    pub beta: f64,
    pub b_prime: f64,
    /// Residuals `ln(c cosh(b' + βz)) - ln f(z)` at the matching points.
    pub residuals: [f64; 3],
    /// Matching abscissae `z = w·s`: `0, |w|_1, -|w|_1`.
    pub points: [f64; 3],
    pub iterations: usize,
}

impl FactorFit {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubFit {
    pub w: Vec<C64>,
    pub b: C64,
    /// Per coupled node, the secant residual at `±|w_k|_1` (zero up to rounding).
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Method1Report {
    pub projected: RbmNns,
    /// Largest matching residual per non-hub node (zero for untouched nodes).
    pub residuals: Vec<f64>,
    /// Matching abscissae per non-hub node.
    pub matching_points: Vec<[f64; 3]>,
}

/// `ln χ(s) = θ_M + (1/2) Σ_k [ln cosh(θ_k + X_kM) - ln cosh(θ_k - X_kM)]`.
pub fn chi_log(state: &StarUbm, s: &SpinConfig) -> Result<C64> {
    let u = state.as_ubm();
    if s.len() != u.n_visible() {
        return Err(Error::Shape(format!("configuration has {} sites", s.len())));
    }
    let theta = u.theta(&s.as_f64());
    let hub = state.hub();
    let mut acc = theta[hub];
    for (k, &t) in theta.iter().enumerate().take(hub) {
        let x = state.hub_coupling(k);
        acc += 0.5 * (log_2cosh(t + x) - log_2cosh(t - x));
    }
    Ok(acc)
}

/// `ln f_k(s) = (1/2) [ln cosh(θ_k + X_kM) + ln cosh(θ_k - X_kM)]`.
pub fn log_f_factor(state: &StarUbm, k: usize, s: &SpinConfig) -> Result<C64> {
    let u = state.as_ubm();
    if k >= state.hub() {
        return Err(Error::Shape(format!("node {k} is not a non-hub node")));
    }
    if s.len() != u.n_visible() {
        return Err(Error::Shape(format!("configuration has {} sites", s.len())));
    }
    let t = u.theta(&s.as_f64())[k];
    let x = state.hub_coupling(k);
    Ok(0.5 * (log_2cosh(t + x) + log_2cosh(t - x)) - LN_2)
}

fn ln_cosh(x: f64) -> f64 {
    log_2cosh_re(x) - LN_2
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let mut a = [[0.0; 4]; 3];
    for i in 0..3 {
        a[i][..3].copy_from_slice(&m[i]);
        a[i][3] = rhs[i];
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..4 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    Some([a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]])
}

/// Fits `c cosh(β w·s + b')` to `f(w·s) = sqrt(cosh(w·s + b + x) cosh(w·s + b - x))`
/// at `w·s ∈ {0, L, -L}`, `L = |w|_1`, by damped Newton in `(ln c, β, b')`.
pub fn fit_factor(w_k: &[f64], b_k: f64, x: f64) -> Result<FactorFit> {
    let l: f64 = w_k.iter().map(|w| w.abs()).sum();
    let log_f = |z: f64| 0.5 * (ln_cosh(z + b_k + x) + ln_cosh(z + b_k - x));
    if l == 0.0 {
        let lc = log_f(0.0) - ln_cosh(b_k);
        return Ok(FactorFit {
            c: lc.exp(),
            beta: 0.0,
            b_prime: b_k,
            residuals: [0.0; 3],
            points: [0.0; 3],
            iterations: 0,
        });
    }
    let points = [0.0, l, -l];
    let targets = points.map(log_f);
    let resid = |p: [f64; 3]| -> [f64; 3] {
        let mut r = [0.0; 3];
        for i in 0..3 {
            r[i] = p[0] + ln_cosh(p[2] + p[1] * points[i]) - targets[i];
        }
        r
    };
    let norm = |r: [f64; 3]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut p = [targets[0] - ln_cosh(b_k), 1.0, b_k];
    let mut r = resid(p);
    let mut iterations = 0;
    while norm(r) >= FIT_TOL {
        if iterations == FIT_MAX_ITER {
            return Err(Error::FitFailed { iterations, residual: norm(r) });
        }
        iterations += 1;
        let mut jac = [[0.0; 3]; 3];
        for i in 0..3 {
            let t = (p[2] + p[1] * points[i]).tanh();
            jac[i] = [1.0, points[i] * t, t];
        }
        let step = solve3(jac, r.map(|v| -v))
            .ok_or(Error::FitFailed { iterations, residual: norm(r) })?;
        let mut lambda = 1.0;
        loop {
            let trial = [p[0] + lambda * step[0], p[1] + lambda * step[1], p[2] + lambda * step[2]];
            let rt = resid(trial);
            if norm(rt) < norm(r) || lambda < 1e-8 {
                p = trial;
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
    }
    Ok(FactorFit { c: p[0].exp(), beta: p[1], b_prime: p[2], residuals: r, points, iterations })
}

fn real_parts(u: &UbmNns, what: &str) -> Result<()> {
    if !u.hidden_is_real(REAL_TOL) {
        return Err(Error::UnsupportedRegime(format!(
            "{what} needs real hidden-unit parameters (b, W, X)"
        )));
    }
    Ok(())
}

/// Two-point secant of `(1/2) g_k(z)`, `g_k(z) = ln cosh(z + b_k + x) - ln cosh(z + b_k - x)`,
/// added to the hub unit.
pub fn fit_hub(state: &StarUbm) -> Result<HubFit> {
    let u = state.as_ubm();
    real_parts(u, "hub linearization")?;
    let hub = state.hub();
    let n = u.n_visible();
    let mut w: Vec<C64> = (0..n).map(|j| u.w[[hub, j]]).collect();
    let mut b = u.b[hub];
    let mut residuals = Vec::new();
    for k in 0..hub {
        let x = state.hub_coupling(k).re;
        if x == 0.0 {
            continue;
        }
        let bk = u.b[k].re;
        let half_g = |z: f64| 0.5 * (ln_cosh(z + bk + x) - ln_cosh(z + bk - x));
        let l: f64 = (0..n).map(|j| u.w[[k, j]].re.abs()).sum();
        if l == 0.0 {
            b += half_g(0.0);
            residuals.push(0.0);
            continue;
        }
        let (gp, gm) = (half_g(l), half_g(-l));
        let alpha = (gp - gm) / (2.0 * l);
        let beta = (gp + gm) / 2.0;
        residuals.push((alpha * l + beta - gp).abs().max((-alpha * l + beta - gm).abs()));
        for j in 0..n {
            w[j] += alpha * u.w[[k, j]].re;
        }
        b += beta;
    }
    Ok(HubFit { w, b, residuals })
}

/// Replaces a star network by an RBM with the same number of hidden nodes
/// (dead nodes pruned afterwards).
pub fn project_method1(state: &StarUbm, variant: Method1Variant) -> Result<Method1Report> {
    let u = state.as_ubm();
    let hub = state.hub();
    let n = u.n_visible();
    let m = u.n_hidden();
    let mut out = UbmNns {
        a: u.a.clone(),
        b: u.b.clone(),
        w: u.w.clone(),
        x: SymMatrix::zeros(m),
        y: u.y.clone(),
        log_prefactor: u.log_prefactor,
    };
    let mut residuals = vec![0.0; hub];
    let mut matching_points = vec![[0.0; 3]; hub];
    match variant {
        Method1Variant::Numeric => {
            real_parts(u, "the numeric projection")?;
            let hf = fit_hub(state)?;
            for k in 0..hub {
                let x = state.hub_coupling(k).re;
                if x == 0.0 {
                    continue;
                }
                let wk: Vec<f64> = (0..n).map(|j| u.w[[k, j]].re).collect();
                let fit = fit_factor(&wk, u.b[k].re, x)?;
                for j in 0..n {
                    out.w[[k, j]] = C64::new(fit.beta * wk[j], 0.0);
                }
                out.b[k] = C64::new(fit.b_prime, 0.0);
                out.log_prefactor += fit.c.ln();
                residuals[k] = fit.max_residual();
                matching_points[k] = fit.points;
            }
            for j in 0..n {
                out.w[[hub, j]] = hf.w[j];
            }
            out.b[hub] = hf.b;
        }
        Method1Variant::Weak | Method1Variant::Strong => {
            for k in 0..hub {
                let x = state.hub_coupling(k);
                if x == ZERO {
                    continue;
                }
                let c = if variant == Method1Variant::Weak { x } else { x.tanh() };
                for j in 0..n {
                    out.w[[hub, j]] += c * u.w[[k, j]];
                }
                out.b[hub] += c * u.b[k];
                if variant == Method1Variant::Strong {
                    out.b[k] = ZERO;
                    for j in 0..n {
                        out.w[[k, j]] = ZERO;
                    }
                }
            }
        }
    }
    Ok(Method1Report { projected: RbmNns(out).pruned(), residuals, matching_points })
}
