use super::{Estimate, FlipScheme, SamplerConfig, CACHE_REBUILD_SWEEPS};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::logmath::{log_2cosh, C64, ZERO};
use crate::nqs::RbmNns;
use crate::oracle::bonds;
use crate::spin::SpinConfig;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Single-flip Metropolis chain targeting `|Ψ(s)|^2`.
///
/// Keeps `θ = Ws + b`, `ln 2cosh θ` and `Ys` cached so a proposal costs O(M).
pub struct MetropolisChain<'a> {
    state: &'a RbmNns,
    s: Vec<f64>,
    theta: Vec<C64>,
    lc: Vec<C64>,
    ys: Vec<C64>,
    rng: ChaCha8Rng,
    scheme: FlipScheme,
    sweeps: usize,
    pub accepted: u64,
    pub proposed: u64,
}

impl<'a> MetropolisChain<'a> {
    pub fn new(state: &'a RbmNns, cfg: &SamplerConfig, chain: usize) -> Result<Self> {
        let n = state.n_visible();
        let mut rng = cfg.chain_rng(chain);
        for _ in 0..1000 {
            let s: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
            let mut ch = MetropolisChain {
                state,
                s,
                theta: Vec::new(),
                lc: Vec::new(),
                ys: Vec::new(),
                rng: rng.clone(),
                scheme: cfg.flip_scheme,
                sweeps: 0,
                accepted: 0,
                proposed: 0,
            };
            ch.rebuild();
            let logamp = ch.state.as_ubm().visible_log_factor(&ch.s) + ch.lc.iter().sum::<C64>();
            if logamp.re.is_finite() {
                return Ok(ch);
            }
            rng = ch.rng;
        }
        Err(Error::Numeric("no configuration with nonzero amplitude found".into()))
    }

    fn rebuild(&mut self) {
        let u = self.state.as_ubm();
        self.theta = u.theta(&self.s);
        self.lc = self.theta.iter().map(|&t| log_2cosh(t)).collect();
        self.ys = (0..self.s.len()).map(|j| u.y().row_dot(j, &self.s)).collect();
    }

    pub fn spins(&self) -> &[f64] {
        &self.s
    }

    pub fn config(&self) -> SpinConfig {
        SpinConfig::new(self.s.iter().map(|&v| v as i8).collect()).expect("±1 entries")
    }

    /// `ln Ψ(s^j) - ln Ψ(s)` with the new cosh terms.
    fn flip_terms(&self, j: usize) -> (C64, Vec<C64>) {
        let u = self.state.as_ubm();
        let sj = self.s[j];
        let mut d = -2.0 * sj * (u.a()[j] + self.ys[j]);
        let mut new_lc = Vec::with_capacity(self.theta.len());
        for i in 0..self.theta.len() {
            let l = log_2cosh(self.theta[i] - 2.0 * sj * u.w()[[i, j]]);
            d += l - self.lc[i];
            new_lc.push(l);
        }
        (d, new_lc)
    }

    /// `ln Ψ(s^j) - ln Ψ(s)`.
    pub fn log_ratio_flip(&self, j: usize) -> C64 {
        self.flip_terms(j).0
    }

    fn propose(&mut self, j: usize) {
        let (d, new_lc) = self.flip_terms(j);
        self.proposed += 1;
        let log_acc = 2.0 * d.re;
        if log_acc >= 0.0 || self.rng.random::<f64>() < log_acc.exp() {
            let u = self.state.as_ubm();
            let sj = self.s[j];
            for i in 0..self.theta.len() {
                self.theta[i] -= 2.0 * sj * u.w()[[i, j]];
            }
            self.lc = new_lc;
            for l in 0..self.s.len() {
                if l != j {
                    self.ys[l] -= 2.0 * sj * u.y().get(l, j);
                }
            }
            self.s[j] = -sj;
            self.accepted += 1;
        }
    }

    /// `N` single-site proposals.
    pub fn sweep(&mut self) {
        let n = self.s.len();
        for p in 0..n {
            let j = match self.scheme {
                FlipScheme::Sequential => p,
                FlipScheme::RandomSite => self.rng.random_range(0..n),
            };
            self.propose(j);
        }
        self.sweeps += 1;
        if self.sweeps % CACHE_REBUILD_SWEEPS == 0 {
            self.rebuild();
        }
    }
}

/// Post-burn-in configurations, chain after chain, one per sweep.
pub fn metropolis_sample<'a>(state: &'a RbmNns, cfg: &SamplerConfig) -> Result<impl Iterator<Item = SpinConfig> + 'a> {
    cfg.validate()?;
    let cfg = *cfg;
    let mut chains = Vec::with_capacity(cfg.n_chains);
    for c in 0..cfg.n_chains {
        chains.push(MetropolisChain::new(state, &cfg, c)?);
    }
    Ok(chains.into_iter().flat_map(move |mut ch| {
        for _ in 0..cfg.n_burnin {
            ch.sweep();
        }
        (0..cfg.n_sweeps - cfg.n_burnin).map(move |_| {
            ch.sweep();
            ch.config()
        })
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observable {
    /// Energy per spin of `H = -J (Σ σz σz + h Σ σx)`.
    Energy { j: f64, h: f64, periodic: bool },
    /// `(1/N) Σ_j σx_j`.
    Sx,
}

/// Estimate plus the per-chain batch means behind it.
#[derive(Debug, Clone)]
pub struct SampleRun {
    pub estimate: Estimate,
    /// `batches[chain][batch]`, real parts.
    pub batches: Vec<Vec<f64>>,
}

fn local_value(ch: &MetropolisChain, obs: &Observable, bl: &[(usize, usize)]) -> C64 {
    let n = ch.s.len();
    let flips: C64 = (0..n).map(|j| ch.log_ratio_flip(j).exp()).sum();
    match *obs {
        Observable::Sx => flips / n as f64,
        Observable::Energy { j, h, .. } => {
            let zz: f64 = bl.iter().map(|&(a, b)| ch.s[a] * ch.s[b]).sum();
            (-j * zz - j * h * flips) / n as f64
        }
    }
}

pub fn estimate_observable(state: &RbmNns, obs: Observable, cfg: &SamplerConfig, exec: Exec) -> Result<SampleRun> {
    cfg.validate()?;
    let bl = match obs {
        Observable::Energy { periodic, .. } => bonds(state.n_visible(), periodic),
        Observable::Sx => Vec::new(),
    };
    let blen = cfg.batch_len();
    let per_chain = exec.try_map(cfg.n_chains, |c| -> Result<(Vec<C64>, u64, u64)> {
        let mut ch = MetropolisChain::new(state, cfg, c)?;
        for _ in 0..cfg.n_burnin {
            ch.sweep();
        }
        let mut means = Vec::with_capacity(cfg.n_batches);
        for _ in 0..cfg.n_batches {
            let mut acc = ZERO;
            for _ in 0..blen {
                ch.sweep();
                acc += local_value(&ch, &obs, &bl);
            }
            means.push(acc / blen as f64);
        }
        Ok((means, ch.accepted, ch.proposed))
    })?;
    let re: Vec<f64> = per_chain.iter().flat_map(|(m, _, _)| m.iter().map(|z| z.re)).collect();
    let im: Vec<f64> = per_chain.iter().flat_map(|(m, _, _)| m.iter().map(|z| z.im)).collect();
    let acc: u64 = per_chain.iter().map(|p| p.1).sum();
    let prop: u64 = per_chain.iter().map(|p| p.2).sum();
    let estimate = Estimate::from_batches(&re, &im, cfg.n_chains * cfg.n_batches * blen, acc as f64 / prop.max(1) as f64);
    let batches = per_chain.into_iter().map(|(m, _, _)| m.into_iter().map(|z| z.re).collect()).collect();
    Ok(SampleRun { estimate, batches })
}

/// Energy per spin from the local estimator `Σ_{s'} H_{s s'} Ψ(s')/Ψ(s)`.
pub fn estimate_energy(state: &RbmNns, j: f64, h: f64, periodic: bool, cfg: &SamplerConfig) -> Result<Estimate> {
    Ok(estimate_observable(state, Observable::Energy { j, h, periodic }, cfg, Exec::default())?.estimate)
}

/// `<σx>` per site from flip ratios.
pub fn estimate_sx(state: &RbmNns, cfg: &SamplerConfig) -> Result<Estimate> {
    Ok(estimate_observable(state, Observable::Sx, cfg, Exec::default())?.estimate)
}
