//! Graph-rewrite rules: applying an operation adds one hidden node per site it acts on.

use super::Nno;
use crate::error::{Error, Result};
use crate::logmath::{C64, I, ZERO};
use crate::nqs::UbmNns;

fn check_k(op: &Nno, k: usize) -> Result<()> {
    if op.k() != k {
        return Err(Error::Shape(format!("expected a {k}-body operation, got K={}", op.k())));
    }
    Ok(())
}

fn check_sites(state: &UbmNns, sites: &[usize]) -> Result<()> {
    for (p, &j) in sites.iter().enumerate() {
        state.check_site(j)?;
        if sites[..p].contains(&j) {
            return Err(Error::DuplicateSite(j));
        }
    }
    Ok(())
}

/// One-body rule. The new hidden node replaces the old value of spin `j`.
pub fn apply_one_body(state: &UbmNns, j: usize, op: &Nno) -> Result<UbmNns> {
    check_k(op, 1)?;
    check_sites(state, &[j])?;
    let m = state.n_hidden();
    let n = state.n_visible();
    let mut out = state.grow_hidden(1);
    out.a[j] = op.alpha[0];
    out.b[m] = op.beta[0] + state.a[j];
    for k in 0..m {
        out.x.set(k, m, state.w[[k, j]]);
        out.w[[k, j]] = ZERO;
    }
    out.w[[m, j]] = op.omega[[0, 0]];
    for r in (0..n).filter(|&r| r != j) {
        out.w[[m, r]] = state.y.get(j, r);
        out.y.set(j, r, ZERO);
    }
    out.log_prefactor += op.a.ln();
    Ok(out)
}

/// Two-body rule, written out for the pair `(j, k)`.
pub fn apply_two_body(state: &UbmNns, j: usize, k: usize, op: &Nno) -> Result<UbmNns> {
    check_k(op, 2)?;
    check_sites(state, &[j, k])?;
    let m = state.n_hidden();
    let n = state.n_visible();
    let (g1, g2) = (m, m + 1);
    let mut out = state.grow_hidden(2);
    out.a[j] = op.alpha[0];
    out.a[k] = op.alpha[1];
    out.b[g1] = op.beta[0] + state.a[j];
    out.b[g2] = op.beta[1] + state.a[k];
    for h in 0..m {
        out.x.set(h, g1, state.w[[h, j]]);
        out.x.set(h, g2, state.w[[h, k]]);
        out.w[[h, j]] = ZERO;
        out.w[[h, k]] = ZERO;
    }
    out.x.set(g1, g2, op.gamma.get(0, 1) + state.y.get(j, k));
    // new spin q couples to old spin (now hidden) q' through q^T Ω q'
    out.w[[g1, j]] = op.omega[[0, 0]];
    out.w[[g1, k]] = op.omega[[1, 0]];
    out.w[[g2, j]] = op.omega[[0, 1]];
    out.w[[g2, k]] = op.omega[[1, 1]];
    for r in (0..n).filter(|&r| r != j && r != k) {
        out.w[[g1, r]] = state.y.get(j, r);
        out.w[[g2, r]] = state.y.get(k, r);
        out.y.set(j, r, ZERO);
        out.y.set(k, r, ZERO);
    }
    out.y.set(j, k, op.lambda.get(0, 1));
    out.log_prefactor += op.a.ln();
    Ok(out)
}

/// General K-body rule for distinct `sites`.
pub fn apply_k_body(state: &UbmNns, sites: &[usize], op: &Nno) -> Result<UbmNns> {
    let kk = sites.len();
    check_k(op, kk)?;
    check_sites(state, sites)?;
    let m = state.n_hidden();
    let n = state.n_visible();
    let mut out = state.grow_hidden(kk);
    let rest: Vec<usize> = (0..n).filter(|r| !sites.contains(r)).collect();
    for (i, &si) in sites.iter().enumerate() {
        let g = m + i;
        out.a[si] = op.alpha[i];
        out.b[g] = op.beta[i] + state.a[si];
        for h in 0..m {
            out.x.set(h, g, state.w[[h, si]]);
            out.w[[h, si]] = ZERO;
        }
        for (l, &sl) in sites.iter().enumerate() {
            out.w[[g, sl]] = op.omega[[l, i]];
            if l > i {
                out.x.set(g, m + l, op.gamma.get(i, l) + state.y.get(si, sl));
                out.y.set(si, sl, op.lambda.get(i, l));
            }
        }
        for &r in &rest {
            out.w[[g, r]] = state.y.get(si, r);
            out.y.set(si, r, ZERO);
        }
    }
    out.log_prefactor += op.a.ln();
    Ok(out)
}

/// `exp(-iθσ_z/2)` on site `j`: only `a_j` changes.
pub fn apply_z_rotation(state: &UbmNns, j: usize, theta: f64) -> Result<UbmNns> {
    state.check_site(j)?;
    let mut out = state.clone();
    out.a[j] -= I * (theta / 2.0);
    Ok(out)
}

/// `exp(c σ_z^j σ_z^k)` for complex `c`: only `Y_jk` changes.
pub fn apply_zz_exponent(state: &UbmNns, j: usize, k: usize, c: C64) -> Result<UbmNns> {
    check_sites(state, &[j, k])?;
    let mut out = state.clone();
    out.y.add(j, k, c);
    Ok(out)
}

/// `exp(-i(θ/2)σ_z^j σ_z^k)`.
pub fn apply_zz_rotation(state: &UbmNns, j: usize, k: usize, theta: f64) -> Result<UbmNns> {
    apply_zz_exponent(state, j, k, -I * (theta / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nqs::random;
    use crate::sym::SymMatrix;
    use ndarray::Array2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_op(rng: &mut ChaCha8Rng, k: usize) -> Nno {
        let mut lambda = SymMatrix::zeros(k);
        let mut gamma = SymMatrix::zeros(k);
        for v in lambda.entries_mut() {
            *v = random::complex(rng, 0.5);
        }
        for v in gamma.entries_mut() {
            *v = random::complex(rng, 0.5);
        }
        Nno::new(
            random::complex(rng, 1.0),
            (0..k).map(|_| random::complex(rng, 0.5)).collect(),
            (0..k).map(|_| random::complex(rng, 0.5)).collect(),
            lambda,
            gamma,
            Array2::from_shape_fn((k, k), |_| random::complex(rng, 0.5)),
        )
        .unwrap()
    }

    #[test]
    fn k_body_reduces_to_one_and_two_body() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let st = random::ubm(&mut rng, 5, 3, 0.5);
        let op1 = random_op(&mut rng, 1);
        assert_eq!(apply_k_body(&st, &[2], &op1).unwrap(), apply_one_body(&st, 2, &op1).unwrap());
        let op2 = random_op(&mut rng, 2);
        assert_eq!(apply_k_body(&st, &[3, 1], &op2).unwrap(), apply_two_body(&st, 3, 1, &op2).unwrap());
    }

    #[test]
    fn one_body_on_empty_network() {
        let mut st = UbmNns::zeros(3, 0);
        st.a[1] = C64::new(0.4, -0.1);
        let op = Nno::one_body(C64::new(1.0, 0.0), ZERO, ZERO, C64::new(0.8, 0.0));
        let out = apply_one_body(&st, 1, &op).unwrap();
        assert_eq!(out.n_hidden(), 1);
        assert_eq!(out.w[[0, 1]], C64::new(0.8, 0.0));
        assert_eq!(out.b[0], C64::new(0.4, -0.1));
        assert_eq!(out.a[1], ZERO);
    }

    #[test]
    fn site_errors() {
        let st = UbmNns::zeros(3, 1);
        let op = Nno::one_body(C64::new(1.0, 0.0), ZERO, ZERO, ZERO);
        assert!(matches!(apply_one_body(&st, 3, &op), Err(Error::SiteOutOfRange { .. })));
        let op2 = Nno::new(C64::new(1.0, 0.0), vec![ZERO; 2], vec![ZERO; 2], SymMatrix::zeros(2), SymMatrix::zeros(2), Array2::zeros((2, 2))).unwrap();
        assert!(matches!(apply_two_body(&st, 1, 1, &op2), Err(Error::DuplicateSite(1))));
        assert!(matches!(apply_zz_rotation(&st, 0, 0, 0.1), Err(Error::DuplicateSite(0))));
    }

    #[test]
    fn zz_rotations_add() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let st = random::ubm(&mut rng, 4, 2, 0.5);
        let a = apply_zz_rotation(&apply_zz_rotation(&st, 0, 2, 0.25).unwrap(), 0, 2, 0.5).unwrap();
        let b = apply_zz_rotation(&st, 0, 2, 0.75).unwrap();
        assert_eq!(a.y.get(0, 2), b.y.get(0, 2));
        assert_eq!(apply_zz_rotation(&st, 1, 3, 0.0).unwrap(), st);
        assert_eq!(apply_z_rotation(&st, 1, 0.0).unwrap(), st);
    }
}
