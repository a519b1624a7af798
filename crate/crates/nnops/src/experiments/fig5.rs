//! Projection accuracy on random star networks as the hub coupling grows.

use super::io::csv_float;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::logmath::C64;
use crate::nqs::UbmNns;
use crate::oracle::{densify, densify_rbm, infidelity};
use crate::projection::{project_method1, Method1Variant};
use crate::rng::trial_rng;
use crate::sym::SymMatrix;
use ndarray::Array2;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const FIG5_CSV_HEADER: &str = "x_scale,seed,infidelity_numeric,infidelity_weak,infidelity_strong";
const VARIANTS: [Method1Variant; 3] = [Method1Variant::Numeric, Method1Variant::Weak, Method1Variant::Strong];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig5Config {
    #[serde(default = "twelve")]
    pub n: usize,
    #[serde(default = "twelve")]
    pub m: usize,
    /// Visible-hidden weights uniform in `[-w_scale, w_scale]`.
    #[serde(default = "fifth")]
    pub w_scale: f64,
    /// Hub couplings uniform in `[-x, x]` for each listed `x`.
    #[serde(default = "default_x")]
    pub x_values: Vec<f64>,
    #[serde(default = "fifty")]
    pub states_per_x: usize,
    #[serde(default)]
    pub seed: u64,
}

fn twelve() -> usize {
    12
}
fn fifth() -> f64 {
    0.2
}
fn fifty() -> usize {
    50
}
fn default_x() -> Vec<f64> {
    vec![0.0, 0.05, 0.1, 0.2, 0.5, 1.0]
}

impl Default for Fig5Config {
    fn default() -> Self {
        Fig5Config { n: 12, m: 12, w_scale: 0.2, x_values: default_x(), states_per_x: 50, seed: 0 }
    }
}

impl Fig5Config {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m < 2 || self.states_per_x == 0 || self.x_values.is_empty() {
            return Err(Error::Config("fig5 needs n >= 1, m >= 2 and at least one state and x value".into()));
        }
        if self.n > 16 {
            return Err(Error::Resource(format!("n = {} exceeds the dense cap", self.n)));
        }
        if !(self.w_scale >= 0.0) || self.x_values.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(Error::Config("scales must be finite and non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig5Row {
    pub x_scale: f64,
    /// Index of the random state within its `x` group.
    pub seed: usize,
    /// Numeric, weak, strong.
    pub infidelity: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig5Summary {
    pub x_scale: f64,
    pub mean: [f64; 3],
    pub std_error: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct Fig5Result {
    pub rows: Vec<Fig5Row>,
    pub summary: Vec<Fig5Summary>,
}

impl Fig5Result {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{FIG5_CSV_HEADER}\n");
        for r in &self.rows {
            let [a, b, c] = r.infidelity.map(csv_float);
            out.push_str(&format!("{},{},{a},{b},{c}\n", csv_float(r.x_scale), r.seed));
        }
        out
    }
}

fn random_star<R: Rng>(rng: &mut R, cfg: &Fig5Config, x: f64) -> Result<UbmNns> {
    let (n, m) = (cfg.n, cfg.m);
    let mut uni = |s: f64| if s == 0.0 { 0.0 } else { rng.random_range(-s..=s) };
    let w = Array2::from_shape_fn((m, n), |_| C64::new(uni(cfg.w_scale), 0.0));
    let mut xm = SymMatrix::zeros(m);
    for k in 0..m - 1 {
        xm.set(k, m - 1, C64::new(uni(x), 0.0));
    }
    UbmNns::new(vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); m], w, xm, SymMatrix::zeros(n))
}

fn trial(cfg: &Fig5Config, xi: usize, s: usize) -> Result<Fig5Row> {
    let x = cfg.x_values[xi];
    let mut rng = trial_rng(cfg.seed, (xi * cfg.states_per_x + s) as u64);
    let star = random_star(&mut rng, cfg, x)?;
    let exact = densify(&star)?;
    let star = star.into_star()?;
    let mut infidelity_out = [0.0; 3];
    for (slot, v) in infidelity_out.iter_mut().zip(VARIANTS) {
        let p = project_method1(&star, v)?;
        *slot = infidelity(&exact, &densify_rbm(&p.projected)?)?;
    }
    Ok(Fig5Row { x_scale: x, seed: s, infidelity: infidelity_out })
}

/// One row per random state; trials are independent and seeded by index.
pub fn run_fig5(cfg: &Fig5Config, exec: Exec) -> Result<Fig5Result> {
    cfg.validate()?;
    let per_x = cfg.states_per_x;
    let rows = exec.try_map(cfg.x_values.len() * per_x, |t| trial(cfg, t / per_x, t % per_x))?;
    let summary = rows
        .chunks(per_x)
        .map(|chunk| {
            let mut mean = [0.0; 3];
            let mut std_error = [0.0; 3];
            for v in 0..3 {
                let xs: Vec<f64> = chunk.iter().map(|r| r.infidelity[v]).collect();
                let mu = xs.iter().sum::<f64>() / xs.len() as f64;
                let var = if xs.len() > 1 {
                    xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
                } else {
                    0.0
                };
                mean[v] = mu;
                std_error[v] = (var / xs.len() as f64).sqrt();
            }
            Fig5Summary { x_scale: chunk[0].x_scale, mean, std_error }
        })
        .collect();
    Ok(Fig5Result { rows, summary })
}
