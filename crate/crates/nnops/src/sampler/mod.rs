//! Markov-chain Monte Carlo over spin configurations.

mod joint;
mod metropolis;

pub use joint::{joint_ubm_sample, JointEstimate, JointTarget};
pub use metropolis::{
    estimate_energy, estimate_observable, estimate_sx, metropolis_sample, MetropolisChain,
    Observable, SampleRun,
};

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Sweeps between full recomputations of cached fields.
pub const CACHE_REBUILD_SWEEPS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlipScheme {
    Sequential,
    RandomSite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    #[serde(default = "default_chains")]
    pub n_chains: usize,
    /// Total sweeps per chain, burn-in included.
    #[serde(default = "default_sweeps")]
    pub n_sweeps: usize,
    #[serde(default = "default_burnin")]
    pub n_burnin: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_scheme")]
    pub flip_scheme: FlipScheme,
    /// Batches per chain for the batch-means error estimate.
    #[serde(default = "default_batches")]
    pub n_batches: usize,
}

fn default_chains() -> usize {
    8
}
fn default_sweeps() -> usize {
    4000
}
fn default_burnin() -> usize {
    500
}
fn default_scheme() -> FlipScheme {
    FlipScheme::Sequential
}
fn default_batches() -> usize {
    16
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            n_chains: default_chains(),
            n_sweeps: default_sweeps(),
            n_burnin: default_burnin(),
            seed: 0,
            flip_scheme: default_scheme(),
            n_batches: default_batches(),
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_chains == 0 || self.n_sweeps == 0 {
            return Err(Error::Config("sampler counts must be positive".into()));
        }
        if self.n_burnin >= self.n_sweeps {
            return Err(Error::Config("burn-in must be shorter than the run".into()));
        }
        if self.n_batches < 16 {
            return Err(Error::Config("at least 16 batches per chain are required".into()));
        }
        if self.n_sweeps - self.n_burnin < self.n_batches {
            return Err(Error::Config("fewer measured sweeps than batches".into()));
        }
        Ok(())
    }

    pub(crate) fn batch_len(&self) -> usize {
        (self.n_sweeps - self.n_burnin) / self.n_batches
    }

    pub(crate) fn chain_rng(&self, chain: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(chain as u64);
        rng
    }
}

/// Monte Carlo estimate with a batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    /// Imaginary part of the mean local estimator (zero in expectation for Hermitian observables).
    pub mean_imag: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub acceptance_rate: f64,
}

impl Estimate {
    /// Combines equally sized batch means from all chains.
    pub fn from_batches(batches: &[f64], batches_imag: &[f64], n_samples: usize, acceptance_rate: f64) -> Self {
        let nb = batches.len() as f64;
        let mean = batches.iter().sum::<f64>() / nb;
        let mean_imag = batches_imag.iter().sum::<f64>() / nb.max(1.0);
        let var = if batches.len() > 1 {
            batches.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (nb - 1.0)
        } else {
            0.0
        };
        Estimate { mean, mean_imag, std_error: (var / nb).sqrt(), n_samples, acceptance_rate }
    }
}
