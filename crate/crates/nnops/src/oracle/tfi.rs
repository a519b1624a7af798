use super::DenseState;
use crate::error::{Error, Result};
use crate::logmath::C64;
use nalgebra::DMatrix;
use serde::Serialize;

/// Largest chain solved by dense diagonalization.
pub const EIGEN_DENSE_MAX: usize = 10;
/// Largest chain accepted by [`exact_ground`].
pub const EXACT_GROUND_MAX: usize = 14;

/// Nearest-neighbour bonds of an open or periodic chain.
pub fn bonds(n: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|j| (j, j + 1)).collect();
    if periodic && n >= 2 {
        out.push((n - 1, 0));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TfiExpectation {
    /// `<H>` for `H = -J (Σ σz σz + h Σ σx)`.
    pub energy: f64,
    /// `(1/N) Σ_j <σx_j>`.
    pub sx: f64,
}

fn zz_diagonal(n: usize, bonds: &[(usize, usize)], idx: usize) -> f64 {
    bonds
        .iter()
        .map(|&(i, j)| {
            let bi = (idx >> (n - 1 - i)) & 1;
            let bj = (idx >> (n - 1 - j)) & 1;
            if bi == bj {
                1.0
            } else {
                -1.0
            }
        })
        .sum()
}

pub fn tfi_expectations(state: &DenseState, j: f64, h: f64, periodic: bool) -> Result<TfiExpectation> {
    let n = state.n();
    let v = state.normalized()?;
    let amps = v.amps();
    let bl = bonds(n, periodic);
    let mut zz = 0.0;
    for (idx, z) in amps.iter().enumerate() {
        zz += z.norm_sqr() * zz_diagonal(n, &bl, idx);
    }
    let mut x = C64::new(0.0, 0.0);
    for site in 0..n {
        let bit = 1usize << (n - 1 - site);
        for (idx, z) in amps.iter().enumerate() {
            x += z.conj() * amps[idx ^ bit];
        }
    }
    let scale = 1.0 + x.norm();
    if x.im.abs() > 1e-10 * scale {
        return Err(Error::Numeric(format!("σx expectation has imaginary part {:e}", x.im)));
    }
    Ok(TfiExpectation { energy: -j * (zz + h * x.re), sx: x.re / n as f64 })
}

/// `H v` for a real vector.
fn apply_h(n: usize, j: f64, h: f64, diag: &[f64], v: &[f64], out: &mut [f64]) {
    for (idx, o) in out.iter_mut().enumerate() {
        let mut acc = -j * diag[idx] * v[idx];
        for site in 0..n {
            acc -= j * h * v[idx ^ (1 << (n - 1 - site))];
        }
        *o = acc;
    }
}

/// Lowest eigenpair of the transverse-field Ising chain.
///
/// Dense symmetric diagonalization up to [`EIGEN_DENSE_MAX`] sites, power
/// iteration on `c - H` above that.
pub fn exact_ground(n: usize, j: f64, h: f64, periodic: bool) -> Result<(f64, DenseState)> {
    if n == 0 || n > EXACT_GROUND_MAX {
        return Err(Error::Resource(format!("exact ground state supports 1..={EXACT_GROUND_MAX} sites, got {n}")));
    }
    let dim = 1usize << n;
    let bl = bonds(n, periodic);
    let diag: Vec<f64> = (0..dim).map(|i| zz_diagonal(n, &bl, i)).collect();
    if n <= EIGEN_DENSE_MAX {
        let mut hm = DMatrix::<f64>::zeros(dim, dim);
        for idx in 0..dim {
            hm[(idx, idx)] = -j * diag[idx];
            for site in 0..n {
                hm[(idx, idx ^ (1 << (n - 1 - site)))] -= j * h;
            }
        }
        let eig = hm.symmetric_eigen();
        let (k, &e) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty spectrum");
        let amps = eig.eigenvectors.column(k).iter().map(|&x| C64::new(x, 0.0)).collect();
        return Ok((e, DenseState::new(n, amps)?));
    }
    let shift = j.abs() * (bl.len() as f64 + h.abs() * n as f64) + 1.0;
    let mut v = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut hv = vec![0.0; dim];
    let mut energy = f64::INFINITY;
    for _ in 0..200_000 {
        apply_h(n, j, h, &diag, &v, &mut hv);
        let e: f64 = v.iter().zip(&hv).map(|(a, b)| a * b).sum();
        let resid: f64 = v.iter().zip(&hv).map(|(a, b)| (b - e * a).powi(2)).sum::<f64>().sqrt();
        if resid < 1e-9 && (e - energy).abs() < 1e-13 {
            energy = e;
            break;
        }
        energy = e;
        for (x, y) in v.iter_mut().zip(&hv) {
            *x = shift * *x - y;
        }
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    let amps = v.into_iter().map(|x| C64::new(x, 0.0)).collect();
    Ok((energy, DenseState::new(n, amps)?))
}
