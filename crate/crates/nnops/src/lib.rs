//! Neural-network quantum states built from Boltzmann machines.
//!
//! States are complex-parameter restricted or unrestricted Boltzmann machines
//! over ±1 spins. Quantum gates act on them by exact graph rewrites that add
//! hidden nodes; projections fold the resulting networks back into restricted
//! form so Trotterized evolution of the transverse-field Ising chain can run
//! with a fixed number of hidden nodes. A dense state-vector backend serves as
//! the exact reference at small sizes.

pub mod error;
pub mod evolve;
pub mod exec;
pub mod experiments;
pub mod logmath;
pub mod nno;
pub mod nqs;
pub mod oracle;
pub mod projection;
pub mod rng;
pub mod sampler;
pub mod spin;
pub mod sym;

pub use error::{Error, Result};
pub use exec::Exec;
pub use logmath::C64;
pub use nqs::{RbmNns, StarUbm, UbmNns};
pub use spin::SpinConfig;
