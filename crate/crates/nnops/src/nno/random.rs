//! Seeded operations for tests and verification runs.

use super::Nno;
use crate::logmath::{C64, I};
use crate::nqs::random::complex;
use crate::sym::SymMatrix;
use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Every parameter uniform in `[-scale, scale]` (real and imaginary parts), `A` of order one.
pub fn nno<R: Rng + ?Sized>(rng: &mut R, k: usize, scale: f64) -> Nno {
    let mut lambda = SymMatrix::zeros(k);
    let mut gamma = SymMatrix::zeros(k);
    for v in lambda.entries_mut().iter_mut().chain(gamma.entries_mut()) {
        *v = complex(rng, scale);
    }
    let a = C64::from_polar(rng.random_range(0.5..1.5), rng.random_range(-PI..PI));
    Nno::new(
        a,
        (0..k).map(|_| complex(rng, scale)).collect(),
        (0..k).map(|_| complex(rng, scale)).collect(),
        lambda,
        gamma,
        Array2::from_shape_fn((k, k), |_| complex(rng, scale)),
    )
    .expect("consistent shapes")
}

/// A unitary drawn from the family with permutation-supported `Ω`.
pub fn unitary_nno<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Nno {
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let mut omega = Array2::from_elem((k, k), C64::new(0.0, 0.0));
    let mut log_norm = 0.0;
    for (i, &j) in perm.iter().enumerate() {
        let re = rng.random_range(-1.5..1.5);
        let im = FRAC_PI_4 + FRAC_PI_2 * rng.random_range(0..4) as f64;
        omega[[i, j]] = C64::new(re, im);
        log_norm += (2.0 * (2.0 * re).cosh()).ln();
    }
    let mut imag_sym = |m: &mut SymMatrix| {
        for v in m.entries_mut() {
            *v = I * rng.random_range(-PI..PI);
        }
    };
    let mut lambda = SymMatrix::zeros(k);
    let mut gamma = SymMatrix::zeros(k);
    imag_sym(&mut lambda);
    imag_sym(&mut gamma);
    let a = C64::from_polar((-0.5 * log_norm).exp(), rng.random_range(-PI..PI));
    let alpha = (0..k).map(|_| I * rng.random_range(-PI..PI)).collect();
    let beta = (0..k).map(|_| I * rng.random_range(-PI..PI)).collect();
    Nno::new(a, alpha, beta, lambda, gamma, omega).expect("consistent shapes")
}
