//! Experiment drivers behind the command-line tool, plus output plumbing.

mod fig5;
mod gates;
mod io;
mod trotter;

pub use fig5::{run_fig5, Fig5Config, Fig5Result, Fig5Row, Fig5Summary, FIG5_CSV_HEADER};
pub use gates::{run_gate_verify, GateKind, GateKindReport, GateVerifyConfig, GateVerifyReport};
pub use io::{csv_float, write_atomic, Manifest};
pub use trotter::{run_evolve_sweep, run_trotter_ubm, TrotterUbmConfig, TrotterUbmReport};

use crate::evolve::EvolveConfig;
use serde::{Deserialize, Serialize};

/// A complete experiment description as stored in a manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "kebab-case")]
pub enum Experiment {
    Fig5Projection(Fig5Config),
    ImagEvolve(EvolveConfig),
    RealEvolve(EvolveConfig),
    GateVerify(GateVerifyConfig),
    TrotterUbm(TrotterUbmConfig),
}
