//! Joint Metropolis over visible and hidden nodes of a real-weight UBM.

use super::{Estimate, FlipScheme, SamplerConfig, CACHE_REBUILD_SWEEPS};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::nqs::UbmNns;
use rand::Rng;
use serde::{Deserialize, Serialize};

const REAL_TOL: f64 = 1e-12;

/// Distribution of the visible marginal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointTarget {
    /// `Ψ(s)` itself; all parameters must be real.
    Amplitude,
    /// `|Ψ(s)|^2` via two hidden replicas; the hidden part must be real.
    Born,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointEstimate {
    /// `<σz_j>` per site.
    pub magnetization: Vec<Estimate>,
    /// `<σz_i σz_j>` for every pair `i < j`.
    pub zz: Vec<((usize, usize), Estimate)>,
    pub acceptance_rate: f64,
}

impl JointEstimate {
    pub fn correlation(&self, i: usize, j: usize) -> Option<&Estimate> {
        let key = (i.min(j), i.max(j));
        self.zz.iter().find(|(p, _)| *p == key).map(|(_, e)| e)
    }
}

struct JointChain<'a> {
    st: &'a UbmNns,
    /// 2 for the Born target, 1 otherwise.
    vis_weight: f64,
    s: Vec<f64>,
    h: Vec<Vec<f64>>,
    ws: Vec<f64>,
    ys: Vec<f64>,
    wth: Vec<Vec<f64>>,
    xh: Vec<Vec<f64>>,
    sweeps: usize,
    accepted: u64,
    proposed: u64,
}

impl<'a> JointChain<'a> {
    fn new<R: Rng>(st: &'a UbmNns, target: JointTarget, rng: &mut R) -> Self {
        let (n, m) = (st.n_visible(), st.n_hidden());
        let replicas = if target == JointTarget::Born { 2 } else { 1 };
        let mut spin = || if rng.random::<bool>() { 1.0 } else { -1.0 };
        let s = (0..n).map(|_| spin()).collect();
        let h = (0..replicas).map(|_| (0..m).map(|_| spin()).collect()).collect();
        let mut ch = JointChain {
            st,
            vis_weight: replicas as f64,
            s,
            h,
            ws: Vec::new(),
            ys: Vec::new(),
            wth: Vec::new(),
            xh: Vec::new(),
            sweeps: 0,
            accepted: 0,
            proposed: 0,
        };
        ch.rebuild();
        ch
    }

    fn rebuild(&mut self) {
        let (n, m) = (self.st.n_visible(), self.st.n_hidden());
        let w = self.st.w();
        self.ws = (0..m).map(|i| (0..n).map(|j| w[[i, j]].re * self.s[j]).sum()).collect();
        self.ys = (0..n).map(|j| self.st.y().row_dot(j, &self.s).re).collect();
        self.wth = self.h.iter().map(|h| (0..n).map(|j| (0..m).map(|i| w[[i, j]].re * h[i]).sum()).collect()).collect();
        self.xh = self.h.iter().map(|h| (0..m).map(|i| self.st.x().row_dot(i, h).re).collect()).collect();
    }

    fn accept<R: Rng>(&mut self, dl: f64, rng: &mut R) -> bool {
        self.proposed += 1;
        let ok = dl >= 0.0 || rng.random::<f64>() < dl.exp();
        if ok {
            self.accepted += 1;
        }
        ok
    }

    fn propose_visible<R: Rng>(&mut self, j: usize, rng: &mut R) {
        let sj = self.s[j];
        let hid: f64 = self.wth.iter().map(|v| v[j]).sum();
        let dl = -2.0 * sj * (self.vis_weight * (self.st.a()[j].re + self.ys[j]) + hid);
        if self.accept(dl, rng) {
            let w = self.st.w();
            for (i, f) in self.ws.iter_mut().enumerate() {
                *f -= 2.0 * sj * w[[i, j]].re;
            }
            for (l, f) in self.ys.iter_mut().enumerate() {
                if l != j {
                    *f -= 2.0 * sj * self.st.y().get(l, j).re;
                }
            }
            self.s[j] = -sj;
        }
    }

    fn propose_hidden<R: Rng>(&mut self, r: usize, i: usize, rng: &mut R) {
        let hi = self.h[r][i];
        let dl = -2.0 * hi * (self.st.b()[i].re + self.ws[i] + self.xh[r][i]);
        if self.accept(dl, rng) {
            let w = self.st.w();
            for (j, f) in self.wth[r].iter_mut().enumerate() {
                *f -= 2.0 * hi * w[[i, j]].re;
            }
            for (l, f) in self.xh[r].iter_mut().enumerate() {
                if l != i {
                    *f -= 2.0 * hi * self.st.x().get(l, i).re;
                }
            }
            self.h[r][i] = -hi;
        }
    }

    fn sweep<R: Rng>(&mut self, scheme: FlipScheme, rng: &mut R) {
        let (n, m) = (self.s.len(), self.st.n_hidden());
        let total = n + self.h.len() * m;
        for p in 0..total {
            let q = match scheme {
                FlipScheme::Sequential => p,
                FlipScheme::RandomSite => rng.random_range(0..total),
            };
            if q < n {
                self.propose_visible(q, rng);
            } else {
                let r = (q - n) / m;
                self.propose_hidden(r, (q - n) % m, rng);
            }
        }
        self.sweeps += 1;
        if self.sweeps % CACHE_REBUILD_SWEEPS == 0 {
            self.rebuild();
        }
    }
}

fn check_weights(st: &UbmNns, target: JointTarget) -> Result<()> {
    let hidden_ok = st.hidden_is_real(REAL_TOL);
    let visible_ok = st.a().iter().all(|z| z.im.abs() <= REAL_TOL) && st.y().entries().iter().all(|z| z.im.abs() <= REAL_TOL);
    match target {
        JointTarget::Born if !hidden_ok => Err(Error::SignProblem(
            "hidden couplings are complex so the joint weight is not a probability".into(),
        )),
        JointTarget::Amplitude if !(hidden_ok && visible_ok) => Err(Error::SignProblem(
            "amplitude sampling needs every parameter real".into(),
        )),
        _ => Ok(()),
    }
}

/// Samples `(s, h)` from the joint Boltzmann weight and returns visible
/// magnetizations and pair correlations with batch-means errors.
pub fn joint_ubm_sample(state: &UbmNns, cfg: &SamplerConfig, target: JointTarget, exec: Exec) -> Result<JointEstimate> {
    cfg.validate()?;
    check_weights(state, target)?;
    let n = state.n_visible();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let blen = cfg.batch_len();
    let per_chain = exec.map(cfg.n_chains, |c| {
        let mut rng = cfg.chain_rng(c);
        let mut ch = JointChain::new(state, target, &mut rng);
        for _ in 0..cfg.n_burnin {
            ch.sweep(cfg.flip_scheme, &mut rng);
        }
        // batches[obs][batch]: n magnetizations then the pairs.
        let mut batches = vec![Vec::with_capacity(cfg.n_batches); n + pairs.len()];
        for _ in 0..cfg.n_batches {
            let mut acc = vec![0.0; n + pairs.len()];
            for _ in 0..blen {
                ch.sweep(cfg.flip_scheme, &mut rng);
                for j in 0..n {
                    acc[j] += ch.s[j];
                }
                for (p, &(i, j)) in pairs.iter().enumerate() {
                    acc[n + p] += ch.s[i] * ch.s[j];
                }
            }
            for (b, v) in batches.iter_mut().zip(acc) {
                b.push(v / blen as f64);
            }
        }
        (batches, ch.accepted, ch.proposed)
    });
    let acc: u64 = per_chain.iter().map(|p| p.1).sum();
    let prop: u64 = per_chain.iter().map(|p| p.2).sum();
    let rate = acc as f64 / prop.max(1) as f64;
    let n_samples = cfg.n_chains * cfg.n_batches * blen;
    let zeros = vec![0.0; cfg.n_chains * cfg.n_batches];
    let est = |o: usize| {
        let all: Vec<f64> = per_chain.iter().flat_map(|(b, _, _)| b[o].iter().copied()).collect();
        Estimate::from_batches(&all, &zeros, n_samples, rate)
    };
    Ok(JointEstimate {
        magnetization: (0..n).map(est).collect(),
        zz: pairs.iter().enumerate().map(|(p, &ij)| (ij, est(n + p))).collect(),
        acceptance_rate: rate,
    })
}
