//! Dense state-vector backend used as ground truth at small sizes.

mod tfi;

pub use tfi::{bonds, exact_ground, tfi_expectations, TfiExpectation, EIGEN_DENSE_MAX, EXACT_GROUND_MAX};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::logmath::{C64, ZERO};
use crate::nqs::{amplitude_paths, EliminationPlan, RbmNns, StarUbm, UbmNns, DEFAULT_HIDDEN_CAP};
use crate::spin::spins_of_index;
use nalgebra::DMatrix;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

/// Full `2^n` amplitude vector. The represented amplitudes are `amps * exp(log_scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<C64>,
    log_scale: f64,
}

impl DenseState {
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::Shape(format!("{} amplitudes for {n} sites", amps.len())));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("non-finite amplitude".into()));
        }
        Ok(DenseState { n, amps, log_scale: 0.0 })
    }

    /// Builds from log-amplitudes, shifting by the largest real part.
    pub fn from_log(n: usize, logs: &[C64]) -> Result<Self> {
        if logs.len() != 1usize << n {
            return Err(Error::Shape(format!("{} amplitudes for {n} sites", logs.len())));
        }
        if logs.iter().any(|z| z.re.is_nan() || z.im.is_nan() || z.re == f64::INFINITY) {
            return Err(Error::Numeric("invalid log-amplitude".into()));
        }
        let shift = logs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        if shift == f64::NEG_INFINITY {
            return Err(Error::Numeric("all amplitudes vanish".into()));
        }
        let amps = logs
            .iter()
            .map(|z| if z.re == f64::NEG_INFINITY { ZERO } else { (z - shift).exp() })
            .collect();
        Ok(DenseState { n, amps, log_scale: shift })
    }

    /// `|+...+>` with unit entries.
    pub fn uniform(n: usize) -> Self {
        DenseState { n, amps: vec![C64::new(1.0, 0.0); 1 << n], log_scale: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Amplitude at a basis index including the stored scale.
    pub fn amplitude(&self, idx: usize) -> C64 {
        self.amps[idx] * self.log_scale.exp()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Unit-norm copy (global phase untouched).
    pub fn normalized(&self) -> Result<Self> {
        let nrm = self.norm_sqr().sqrt();
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::Numeric("cannot normalize a zero vector".into()));
        }
        Ok(DenseState { n: self.n, amps: self.amps.iter().map(|z| z / nrm).collect(), log_scale: 0.0 })
    }

    pub fn scaled(&self, c: C64) -> Self {
        DenseState { n: self.n, amps: self.amps.iter().map(|z| z * c).collect(), log_scale: self.log_scale }
    }

    /// Born probabilities.
    pub fn probabilities(&self) -> Vec<f64> {
        let tot = self.norm_sqr();
        self.amps.iter().map(|z| z.norm_sqr() / tot).collect()
    }

    /// `index,re,im` rows of the normalized state.
    pub fn to_csv(&self) -> Result<String> {
        let v = self.normalized()?;
        let mut out = String::from("index,re,im\n");
        for (i, z) in v.amps.iter().enumerate() {
            out.push_str(&format!("{i},{:.16e},{:.16e}\n", z.re, z.im));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let v = self.normalized()?;
        let doc = DenseDoc { n: v.n, amps: v.amps.iter().map(|z| [z.re, z.im]).collect() };
        Ok(serde_json::to_string(&doc)?)
    }
}

#[derive(Serialize, Deserialize)]
struct DenseDoc {
    n: usize,
    amps: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensifyMethod {
    /// Closed forms for RBM/star networks, otherwise elimination, else enumeration.
    Auto,
    BruteForce,
    Elimination,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OracleCaps {
    pub max_visible: usize,
    pub max_hidden: usize,
    pub max_width: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { max_visible: 16, max_hidden: DEFAULT_HIDDEN_CAP, max_width: 22 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DensifyOptions {
    pub method: DensifyMethod,
    pub caps: OracleCaps,
    pub exec: Exec,
}

impl Default for DensifyOptions {
    fn default() -> Self {
        DensifyOptions { method: DensifyMethod::Auto, caps: OracleCaps::default(), exec: Exec::default() }
    }
}

impl DensifyOptions {
    pub fn brute_force() -> Self {
        DensifyOptions { method: DensifyMethod::BruteForce, ..Default::default() }
    }
}

/// Evaluates the network at every basis state.
pub fn densify(state: &UbmNns) -> Result<DenseState> {
    densify_with(state, &DensifyOptions::default())
}

pub fn densify_rbm(state: &RbmNns) -> Result<DenseState> {
    densify(state.as_ubm())
}

pub fn densify_with(state: &UbmNns, opts: &DensifyOptions) -> Result<DenseState> {
    let n = state.n_visible();
    if n > opts.caps.max_visible {
        return Err(Error::Resource(format!("{n} visible sites exceed the dense cap {}", opts.caps.max_visible)));
    }
    let m = state.n_hidden();
    let dim = 1usize << n;
    let logs: Vec<C64> = match opts.method {
        DensifyMethod::BruteForce => {
            crate::nqs::check_hidden_cap(m, opts.caps.max_hidden)?;
            opts.exec.map(dim, |i| amplitude_paths::bruteforce(state, &spins_of_index(n, i)))
        }
        DensifyMethod::Elimination => {
            let plan = EliminationPlan::new(state);
            plan.check_width(opts.caps.max_width)?;
            opts.exec.map(dim, |i| plan.log_amplitude(state, &spins_of_index(n, i)))
        }
        DensifyMethod::Auto if state.is_rbm() => {
            opts.exec.map(dim, |i| amplitude_paths::rbm(state, &spins_of_index(n, i)))
        }
        DensifyMethod::Auto if state.is_star() => {
            let st = StarUbm(state.clone());
            opts.exec.map(dim, |i| amplitude_paths::star(&st, &spins_of_index(n, i)))
        }
        DensifyMethod::Auto => {
            let plan = EliminationPlan::new(state);
            if plan.width() <= opts.caps.max_width {
                opts.exec.map(dim, |i| plan.log_amplitude(state, &spins_of_index(n, i)))
            } else {
                crate::nqs::check_hidden_cap(m, opts.caps.max_hidden)?;
                opts.exec.map(dim, |i| amplitude_paths::bruteforce(state, &spins_of_index(n, i)))
            }
        }
    };
    DenseState::from_log(n, &logs)
}

fn check_pair(p: &DenseState, q: &DenseState) -> Result<()> {
    if p.n != q.n {
        return Err(Error::Shape(format!("states on {} and {} sites", p.n, q.n)));
    }
    Ok(())
}

fn unit(p: &DenseState) -> Result<Vec<C64>> {
    let max = p.amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::Numeric("fidelity undefined for a zero vector".into()));
    }
    let scaled: Vec<C64> = p.amps.iter().map(|z| z / max).collect();
    let nrm = scaled.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(scaled.into_iter().map(|z| z / nrm).collect())
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `|<p|q>| / (|p| |q|)`.
pub fn fidelity(p: &DenseState, q: &DenseState) -> Result<f64> {
    check_pair(p, q)?;
    let (u, v) = (unit(p)?, unit(q)?);
    Ok(inner(&u, &v).norm().min(1.0))
}

/// `1 - fidelity`, accurate when the states are nearly parallel.
pub fn infidelity(p: &DenseState, q: &DenseState) -> Result<f64> {
    check_pair(p, q)?;
    let (u, v) = (unit(p)?, unit(q)?);
    let c = inner(&u, &v);
    // component of v orthogonal to u
    let rho: f64 = u.iter().zip(&v).map(|(a, b)| (b - c * a).norm_sqr()).sum::<f64>().min(1.0);
    let f = (1.0 - rho).max(0.0).sqrt();
    Ok(rho / (1.0 + f))
}

/// Exact application of a `2^K x 2^K` matrix to the listed sites (first site most significant).
pub fn apply_gate_dense(state: &DenseState, sites: &[usize], u: &Array2<C64>) -> Result<DenseState> {
    let k = sites.len();
    let n = state.n;
    if u.dim() != (1 << k, 1 << k) {
        return Err(Error::Shape(format!("gate is {:?} for {k} sites", u.dim())));
    }
    for (p, &s) in sites.iter().enumerate() {
        if s >= n {
            return Err(Error::SiteOutOfRange { site: s, n });
        }
        if sites[..p].contains(&s) {
            return Err(Error::DuplicateSite(s));
        }
    }
    let pos: Vec<usize> = sites.iter().map(|&s| n - 1 - s).collect();
    let mask: usize = pos.iter().map(|&p| 1usize << p).sum();
    let spread = |sub: usize| -> usize {
        (0..k).map(|i| ((sub >> (k - 1 - i)) & 1) << pos[i]).sum()
    };
    let offsets: Vec<usize> = (0..1usize << k).map(spread).collect();
    let mut out = vec![ZERO; state.amps.len()];
    let mut local = vec![ZERO; 1 << k];
    for base in (0..state.amps.len()).filter(|i| i & mask == 0) {
        for (q, off) in offsets.iter().enumerate() {
            local[q] = state.amps[base | off];
        }
        for (q, off) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (qp, v) in local.iter().enumerate() {
                acc += u[[q, qp]] * v;
            }
            out[base | off] = acc;
        }
    }
    Ok(DenseState { n, amps: out, log_scale: state.log_scale })
}

/// Von Neumann entropy of sites `0..cut` in the normalized state.
pub fn entanglement_entropy(state: &DenseState, cut: usize) -> Result<f64> {
    let n = state.n;
    if cut > n {
        return Err(Error::SiteOutOfRange { site: cut, n });
    }
    let v = unit(state)?;
    let rows = 1usize << cut;
    let cols = 1usize << (n - cut);
    let m = DMatrix::from_fn(rows, cols, |r, c| v[r * cols + c]);
    let rho = &m * m.adjoint();
    let eig = rho.symmetric_eigen();
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&p| p > 1e-300)
        .map(|&p| -p * p.ln())
        .sum())
}
