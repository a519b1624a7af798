use super::{RbmNns, StarUbm, UbmNns};
use crate::error::{Error, Result};
use crate::logmath::{log_2cosh, log_add_exp, LogSum, C64, ZERO};
use crate::spin::SpinConfig;

/// Default cap on hidden nodes for direct enumeration.
pub const DEFAULT_HIDDEN_CAP: usize = 22;

/// `ln Ψ(s)` for an RBM: `a^T s + s^T Y s / 2 + Σ_k ln 2cosh((Ws + b)_k)`.
pub fn rbm_log_amplitude(state: &RbmNns, s: &SpinConfig) -> Result<C64> {
    let u = state.as_ubm();
    u.check_config(s.len())?;
    let sv = s.as_f64();
    Ok(rbm_log_amplitude_f64(u, &sv))
}

pub(crate) fn rbm_log_amplitude_f64(u: &UbmNns, s: &[f64]) -> C64 {
    let mut acc = u.visible_log_factor(s);
    for t in u.theta(s) {
        acc += log_2cosh(t);
    }
    acc
}

pub fn rbm_amplitude(state: &RbmNns, s: &SpinConfig) -> Result<C64> {
    rbm_log_amplitude(state, s).map(|l| l.exp())
}

/// `ln Ψ(s)` by direct enumeration of all `2^M` hidden configurations.
pub fn ubm_log_amplitude_bruteforce(state: &UbmNns, s: &SpinConfig, cap: usize) -> Result<C64> {
    state.check_config(s.len())?;
    check_hidden_cap(state.n_hidden(), cap)?;
    Ok(bruteforce_f64(state, &s.as_f64()))
}

pub fn ubm_amplitude_bruteforce(state: &UbmNns, s: &SpinConfig) -> Result<C64> {
    ubm_log_amplitude_bruteforce(state, s, DEFAULT_HIDDEN_CAP).map(|l| l.exp())
}

pub(crate) fn check_hidden_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::Resource(format!(
            "{m} hidden nodes exceed the enumeration cap {cap}"
        )));
    }
    Ok(())
}

/// Gray-code walk over hidden configurations, starting from all `+1`.
pub(crate) fn bruteforce_f64(u: &UbmNns, s: &[f64]) -> C64 {
    let m = u.n_hidden();
    let theta = u.theta(s);
    let mut h = vec![1.0f64; m];
    // field_i = theta_i + Σ_j X_ij h_j
    let mut field: Vec<C64> = (0..m).map(|i| theta[i] + u.x.row_dot(i, &h)).collect();
    let exact = |h: &[f64]| -> C64 {
        let mut e = u.x.half_quadratic(h);
        for (t, hv) in theta.iter().zip(h) {
            e += t * hv;
        }
        e
    };
    let mut energy = exact(&h);
    let mut sum = LogSum::default();
    sum.add(energy);
    let total: u64 = 1u64 << m;
    for step in 1..total {
        let i = step.trailing_zeros() as usize;
        let old = h[i];
        energy += -2.0 * old * field[i];
        h[i] = -old;
        for j in 0..m {
            if j != i {
                field[j] += u.x.get(i, j) * (-2.0 * old);
            }
        }
        if step % 1024 == 0 {
            energy = exact(&h);
        }
        sum.add(energy);
    }
    u.visible_log_factor(s) + sum.value()
}

/// `ln Ψ(s)` for a star network, with the hub summed in closed form.
pub fn star_log_amplitude(state: &StarUbm, s: &SpinConfig) -> Result<C64> {
    let u = state.as_ubm();
    u.check_config(s.len())?;
    Ok(star_log_amplitude_f64(state, &s.as_f64()))
}

pub(crate) fn star_log_amplitude_f64(state: &StarUbm, s: &[f64]) -> C64 {
    let u = state.as_ubm();
    let hub = state.hub();
    let theta = u.theta(s);
    let mut up = theta[hub];
    let mut down = -theta[hub];
    for k in 0..hub {
        let x = state.hub_coupling(k);
        up += log_2cosh(theta[k] + x);
        down += log_2cosh(theta[k] - x);
    }
    u.visible_log_factor(s) + log_add_exp(up, down)
}

pub fn star_amplitude(state: &StarUbm, s: &SpinConfig) -> Result<C64> {
    star_log_amplitude(state, s).map(|l| l.exp())
}

/// `ln Ψ(s) - ln Ψ(s')` for an RBM.
pub fn log_amplitude_ratio(state: &RbmNns, s: &SpinConfig, s_prime: &SpinConfig) -> Result<C64> {
    let u = state.as_ubm();
    u.check_config(s.len())?;
    u.check_config(s_prime.len())?;
    if s == s_prime {
        return Ok(ZERO);
    }
    let lp = rbm_log_amplitude_f64(u, &s_prime.as_f64());
    if lp.re == f64::NEG_INFINITY {
        return Err(Error::SingularRatio);
    }
    let l = rbm_log_amplitude_f64(u, &s.as_f64());
    Ok(l - lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logmath::log_diff;
    use crate::nqs::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_network_is_one() {
        let r = RbmNns::zeros(2, 0);
        for idx in 0..4 {
            let v = rbm_amplitude(&r, &SpinConfig::from_index(2, idx)).unwrap();
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn single_zero_hidden_is_two() {
        let r = RbmNns::zeros(1, 1);
        let v = rbm_amplitude(&r, &SpinConfig::all_up(1)).unwrap();
        assert!((v - 2.0).norm() < 1e-15);
    }

    #[test]
    fn rbm_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = random::rbm(&mut rng, 3, 2, 0.8);
        for idx in 0..8 {
            let s = SpinConfig::from_index(3, idx);
            let a = rbm_log_amplitude(&r, &s).unwrap();
            let b = ubm_log_amplitude_bruteforce(r.as_ubm(), &s, 22).unwrap();
            assert!(log_diff(a, b) < 1e-12);
        }
    }

    #[test]
    fn one_hidden_no_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let base = random::rbm(&mut rng, 3, 0, 0.5);
        let mut u = base.as_ubm().grow_hidden(1);
        u.b[0] = ZERO;
        for idx in 0..8 {
            let s = SpinConfig::from_index(3, idx);
            let v = ubm_log_amplitude_bruteforce(&u, &s, 22).unwrap();
            let want = u.visible_log_factor(&s.as_f64()) + std::f64::consts::LN_2;
            assert!(log_diff(v, want) < 1e-13);
        }
    }

    #[test]
    fn hidden_cap_enforced() {
        let u = UbmNns::zeros(2, 5);
        let r = ubm_log_amplitude_bruteforce(&u, &SpinConfig::all_up(2), 4);
        assert!(matches!(r, Err(Error::Resource(_))));
    }

    #[test]
    fn star_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let st = random::star(&mut rng, 3, 3, 0.7);
        for idx in 0..8 {
            let s = SpinConfig::from_index(3, idx);
            let a = star_log_amplitude(&st, &s).unwrap();
            let b = ubm_log_amplitude_bruteforce(st.as_ubm(), &s, 22).unwrap();
            assert!(log_diff(a, b) < 1e-12);
        }
    }

    #[test]
    fn decoupled_hub_doubles_rbm() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let r = random::rbm(&mut rng, 3, 2, 0.6);
        let st = StarUbm::try_from(r.as_ubm().grow_hidden(1)).unwrap();
        for idx in 0..8 {
            let s = SpinConfig::from_index(3, idx);
            let a = star_log_amplitude(&st, &s).unwrap();
            let b = rbm_log_amplitude(&r, &s).unwrap() + std::f64::consts::LN_2;
            assert!(log_diff(a, b) < 1e-13);
        }
    }

    #[test]
    fn ratio_without_hidden_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = random::rbm(&mut rng, 4, 0, 0.9);
        let s = SpinConfig::new(vec![1, -1, 1, 1]).unwrap();
        let t = SpinConfig::new(vec![-1, -1, 1, -1]).unwrap();
        let (sv, tv) = (s.as_f64(), t.as_f64());
        let mut want = ZERO;
        for j in 0..4 {
            want += r.a()[j] * (sv[j] - tv[j]);
        }
        want += r.y().half_quadratic(&sv) - r.y().half_quadratic(&tv);
        let got = log_amplitude_ratio(&r, &s, &t).unwrap();
        assert!((got - want).norm() < 1e-13);
        assert_eq!(log_amplitude_ratio(&r, &s, &s).unwrap(), ZERO);
    }

    #[test]
    fn ratio_single_flip_matches_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let r = random::rbm(&mut rng, 4, 3, 0.7);
        let s = SpinConfig::new(vec![1, -1, -1, 1]).unwrap();
        let t = s.flipped(2);
        let q = rbm_amplitude(&r, &s).unwrap() / rbm_amplitude(&r, &t).unwrap();
        let got = log_amplitude_ratio(&r, &s, &t).unwrap();
        assert!(log_diff(got, q.ln()) < 1e-12);
    }

    #[test]
    fn ratio_singular() {
        // 2cosh(i pi/2) = 0 at s = +1
        let mut r = RbmNns::zeros(1, 1);
        r.0.b[0] = C64::new(0.0, std::f64::consts::FRAC_PI_2);
        let up = SpinConfig::all_up(1);
        let down = SpinConfig::new(vec![-1]).unwrap();
        let res = log_amplitude_ratio(&r, &down, &up);
        assert!(matches!(res, Err(Error::SingularRatio)) || res.unwrap().re > 30.0);
    }
}
