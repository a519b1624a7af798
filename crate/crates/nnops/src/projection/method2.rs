//! Method II: absorb `1 + A σ_x^k` into first-order parameter changes.

use crate::error::{Error, Result};
use crate::logmath::{C64, ZERO};
use crate::nqs::amplitude_paths;
use crate::nqs::RbmNns;
use crate::spin::spins_of_index;
use crate::sym::SymMatrix;
use ndarray::Array2;

/// Largest chain for which the variance is computed by full enumeration.
pub const EXACT_VARIANCE_MAX: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Method2Update {
    pub delta_a: Vec<C64>,
    pub delta_b: Vec<C64>,
    pub delta_w: Array2<C64>,
    pub delta_y: SymMatrix,
    /// `Var(P - Q) / 2`; `NaN` when not evaluated.
    pub predicted_infidelity: f64,
}

impl Method2Update {
    pub fn apply(&self, state: &RbmNns) -> RbmNns {
        let mut u = state.as_ubm().clone();
        for (a, d) in u.a.iter_mut().zip(&self.delta_a) {
            *a += d;
        }
        for (b, d) in u.b.iter_mut().zip(&self.delta_b) {
            *b += d;
        }
        u.w += &self.delta_w;
        for (y, d) in u.y.entries_mut().iter_mut().zip(self.delta_y.entries()) {
            *y += d;
        }
        RbmNns(u)
    }

    /// `P(s)`: first-order change of `ln Ψ` produced by the update.
    pub fn log_variation(&self, state: &RbmNns, s: &[f64]) -> C64 {
        let theta = state.as_ubm().theta(s);
        let mut p = self.delta_y.half_quadratic(s);
        for (d, sv) in self.delta_a.iter().zip(s) {
            p += d * sv;
        }
        for (i, t) in theta.iter().enumerate() {
            let tt = t.tanh();
            let mut row = self.delta_b[i];
            for (j, sv) in s.iter().enumerate() {
                row += self.delta_w[[i, j]] * sv;
            }
            p += row * tt;
        }
        p
    }
}

/// Update blocks without the fidelity estimate.
pub fn method2_deltas(state: &RbmNns, k: usize, a_coef: C64) -> Result<Method2Update> {
    let u = state.as_ubm();
    u.check_site(k)?;
    let n = u.n_visible();
    let m = u.n_hidden();
    let ck: C64 = (0..m).map(|i| (2.0 * u.w[[i, k]]).cosh()).product();
    let f = 2.0 * a_coef * ck;
    let t: Vec<C64> = (0..m).map(|i| (2.0 * u.w[[i, k]]).tanh()).collect();
    let mut delta_a = vec![ZERO; n];
    delta_a[k] = -f * u.a[k];
    let mut delta_y = SymMatrix::zeros(n);
    for j in (0..n).filter(|&j| j != k) {
        delta_y.set(k, j, -f * u.y.get(k, j));
    }
    let delta_b: Vec<C64> = t.iter().map(|ti| f * ti * u.a[k]).collect();
    let delta_w = Array2::from_shape_fn((m, n), |(i, j)| {
        let y = if j == k { C64::new(-0.5, 0.0) } else { u.y.get(k, j) };
        f * t[i] * y
    });
    Ok(Method2Update { delta_a, delta_b, delta_w, delta_y, predicted_infidelity: f64::NAN })
}

/// Update blocks plus `Var(P - Q)/2` by exact enumeration (N ≤ 12).
pub fn method2_update(state: &RbmNns, k: usize, a_coef: C64) -> Result<Method2Update> {
    let mut up = method2_deltas(state, k, a_coef)?;
    up.predicted_infidelity = variance_pq(state, &up, k, a_coef)? / 2.0;
    Ok(up)
}

/// `Var(P - Q)` under `|Ψ|^2`, with `Q(s) = A Ψ(s^k)/Ψ(s)` evaluated exactly.
pub fn variance_pq(state: &RbmNns, update: &Method2Update, k: usize, a_coef: C64) -> Result<f64> {
    let u = state.as_ubm();
    u.check_site(k)?;
    let n = u.n_visible();
    if n > EXACT_VARIANCE_MAX {
        return Err(Error::Resource(format!("exact variance limited to {EXACT_VARIANCE_MAX} sites")));
    }
    let dim = 1usize << n;
    let logs: Vec<C64> = (0..dim).map(|i| amplitude_paths::rbm(u, &spins_of_index(n, i))).collect();
    let shift = logs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let bit = 1usize << (n - 1 - k);
    // Two passes: the mean of P - Q is O(A) while the spread can be many orders smaller.
    let mut terms = Vec::with_capacity(dim);
    for i in 0..dim {
        let w = (2.0 * (logs[i].re - shift)).exp();
        if w == 0.0 {
            continue;
        }
        let s = spins_of_index(n, i);
        let q = a_coef * (logs[i ^ bit] - logs[i]).exp();
        terms.push((w, update.log_variation(state, &s) - q));
    }
    let w_tot: f64 = terms.iter().map(|t| t.0).sum();
    let mean = terms.iter().map(|&(w, d)| w * d).sum::<C64>() / w_tot;
    Ok(terms.iter().map(|&(w, d)| w * (d - mean).norm_sqr()).sum::<f64>() / w_tot)
}

/// `16 |A C_k|^2 Σ_{i≠j} |G_ik|^2 |G_jk|^2` with `G = W^T W`, valid at `a = b = Y = 0`.
pub fn infidelity_first_order(w: &Array2<C64>, k: usize, a_coef: C64) -> Result<f64> {
    let (m, n) = w.dim();
    if k >= n {
        return Err(Error::SiteOutOfRange { site: k, n });
    }
    let ck: C64 = (0..m).map(|i| (2.0 * w[[i, k]]).cosh()).product();
    let g: Vec<f64> = (0..n)
        .map(|i| (0..m).map(|h| w[[h, i]] * w[[h, k]]).sum::<C64>().norm_sqr())
        .collect();
    let total: f64 = g.iter().sum();
    let diag: f64 = g.iter().map(|x| x * x).sum();
    Ok(16.0 * (a_coef * ck).norm_sqr() * (total * total - diag))
}
