//! Seeded random network states for tests, benches and experiment drivers.

use super::{RbmNns, StarUbm, UbmNns};
use crate::logmath::C64;
use crate::sym::SymMatrix;
use ndarray::Array2;
use rand::Rng;

/// Uniform complex number with real and imaginary parts in `[-scale, scale]`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> C64 {
    C64::new(rng.random_range(-1.0..1.0) * scale, rng.random_range(-1.0..1.0) * scale)
}

/// Uniform real number in `[-scale, scale]`, as a complex value.
pub fn real<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> C64 {
    C64::new(rng.random_range(-1.0..1.0) * scale, 0.0)
}

fn fill<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, scale: f64, gen: fn(&mut R, f64) -> C64, coupled_hidden: bool) -> UbmNns {
    let a = (0..n).map(|_| gen(rng, scale)).collect();
    let b = (0..m).map(|_| gen(rng, scale)).collect();
    let w = Array2::from_shape_fn((m, n), |_| gen(rng, scale));
    let mut y = SymMatrix::zeros(n);
    for v in y.entries_mut() {
        *v = gen(rng, scale);
    }
    let mut x = SymMatrix::zeros(m);
    if coupled_hidden {
        for v in x.entries_mut() {
            *v = gen(rng, scale);
        }
    }
    UbmNns::new(a, b, w, x, y).expect("consistent shapes")
}

/// Complex RBM with all parameters uniform in the square of half-width `scale`.
pub fn rbm<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, scale: f64) -> RbmNns {
    RbmNns(fill(rng, n, m, scale, complex::<R>, false))
}

/// Real-parameter RBM.
pub fn real_rbm<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, scale: f64) -> RbmNns {
    RbmNns(fill(rng, n, m, scale, real::<R>, false))
}

/// Complex UBM with a dense hidden-hidden coupling matrix.
pub fn ubm<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, scale: f64) -> UbmNns {
    fill(rng, n, m, scale, complex::<R>, true)
}

/// Real UBM with a dense hidden-hidden coupling matrix.
pub fn real_ubm<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, scale: f64) -> UbmNns {
    fill(rng, n, m, scale, real::<R>, true)
}

/// Complex star network with `m` hidden nodes, the last one being the hub.
pub fn star<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, scale: f64) -> StarUbm {
    let mut u = fill(rng, n, m, scale, complex::<R>, false);
    for k in 0..m.saturating_sub(1) {
        u.x.set(k, m - 1, complex(rng, scale));
    }
    StarUbm(u)
}

/// Real star network.
pub fn real_star<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, scale: f64) -> StarUbm {
    let mut u = fill(rng, n, m, scale, real::<R>, false);
    for k in 0..m.saturating_sub(1) {
        u.x.set(k, m - 1, real(rng, scale));
    }
    StarUbm(u)
}
