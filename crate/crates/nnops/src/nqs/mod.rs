//! Boltzmann-machine wavefunctions and their amplitudes.

mod amplitude;
mod eliminate;
pub(crate) mod json;
pub mod random;

pub use amplitude::{
    log_amplitude_ratio, rbm_amplitude, rbm_log_amplitude, star_amplitude, star_log_amplitude,
    ubm_amplitude_bruteforce, ubm_log_amplitude_bruteforce, DEFAULT_HIDDEN_CAP,
};
pub use eliminate::EliminationPlan;
pub(crate) use amplitude::check_hidden_cap;

/// Log-amplitude evaluators on raw spin vectors.
pub(crate) mod amplitude_paths {
    pub(crate) use super::amplitude::{
        bruteforce_f64 as bruteforce, rbm_log_amplitude_f64 as rbm,
        star_log_amplitude_f64 as star,
    };
}
pub use json::StateDoc;

use crate::error::{Error, Result};
use crate::logmath::{C64, ZERO};
use crate::sym::SymMatrix;
use ndarray::{s, Array2};

/// General Boltzmann-machine state (visible-visible `Y` and hidden-hidden `X` couplings).
///
/// `W` is stored `M x N`. Amplitudes never include the tracked prefactor.
#[derive(Debug, Clone, PartialEq)]
pub struct UbmNns {
    pub(crate) a: Vec<C64>,
    pub(crate) b: Vec<C64>,
    pub(crate) w: Array2<C64>,
    pub(crate) x: SymMatrix,
    pub(crate) y: SymMatrix,
    pub(crate) log_prefactor: C64,
}

/// A [`UbmNns`] with `X = 0`; amplitudes factorize over hidden nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RbmNns(pub(crate) UbmNns);

/// A [`UbmNns`] whose hidden-hidden couplings all attach to the last hidden node.
#[derive(Debug, Clone, PartialEq)]
pub struct StarUbm(pub(crate) UbmNns);

impl UbmNns {
    pub fn new(
        a: Vec<C64>,
        b: Vec<C64>,
        w: Array2<C64>,
        x: SymMatrix,
        y: SymMatrix,
    ) -> Result<Self> {
        let n = a.len();
        let m = b.len();
        if n == 0 {
            return Err(Error::Shape("at least one visible site required".into()));
        }
        if w.dim() != (m, n) {
            return Err(Error::Shape(format!(
                "W is {:?}, expected ({m}, {n})",
                w.dim()
            )));
        }
        if x.dim() != m || y.dim() != n {
            return Err(Error::Shape(format!(
                "X is {}x{}, Y is {}x{} for N={n}, M={m}",
                x.dim(),
                x.dim(),
                y.dim(),
                y.dim()
            )));
        }
        let st = UbmNns { a, b, w, x, y, log_prefactor: ZERO };
        st.check_finite()?;
        Ok(st)
    }

    /// All-zero parameters with `n` visible and `m` hidden nodes.
    pub fn zeros(n: usize, m: usize) -> Self {
        UbmNns {
            a: vec![ZERO; n],
            b: vec![ZERO; m],
            w: Array2::zeros((m, n)),
            x: SymMatrix::zeros(m),
            y: SymMatrix::zeros(n),
            log_prefactor: ZERO,
        }
    }

    fn check_finite(&self) -> Result<()> {
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        let ok = self.a.iter().all(finite)
            && self.b.iter().all(finite)
            && self.w.iter().all(finite)
            && self.x.entries().iter().all(finite)
            && self.y.entries().iter().all(finite);
        if ok {
            Ok(())
        } else {
            Err(Error::Numeric("non-finite network parameter".into()))
        }
    }

    pub fn n_visible(&self) -> usize {
        self.a.len()
    }

    pub fn n_hidden(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[C64] {
        &self.a
    }

    pub fn b(&self) -> &[C64] {
        &self.b
    }

    pub fn w(&self) -> &Array2<C64> {
        &self.w
    }

    pub fn x(&self) -> &SymMatrix {
        &self.x
    }

    pub fn y(&self) -> &SymMatrix {
        &self.y
    }

    pub fn log_prefactor(&self) -> C64 {
        self.log_prefactor
    }

    pub fn with_log_prefactor(mut self, lp: C64) -> Self {
        self.log_prefactor = lp;
        self
    }

    /// `W s + b`.
    pub fn theta(&self, s: &[f64]) -> Vec<C64> {
        (0..self.n_hidden())
            .map(|k| {
                let row = self.w.row(k);
                let mut acc = self.b[k];
                for (wv, sv) in row.iter().zip(s) {
                    acc += wv * sv;
                }
                acc
            })
            .collect()
    }

    /// `a^T s + s^T Y s / 2`.
    pub fn visible_log_factor(&self, s: &[f64]) -> C64 {
        let mut acc = ZERO;
        for (av, sv) in self.a.iter().zip(s) {
            acc += av * sv;
        }
        acc + self.y.half_quadratic(s)
    }

    pub(crate) fn check_config(&self, len: usize) -> Result<()> {
        if len != self.n_visible() {
            return Err(Error::Shape(format!(
                "configuration has {len} sites, state has {}",
                self.n_visible()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_site(&self, j: usize) -> Result<()> {
        if j >= self.n_visible() {
            return Err(Error::SiteOutOfRange { site: j, n: self.n_visible() });
        }
        Ok(())
    }

    pub fn is_rbm(&self) -> bool {
        self.x.is_zero()
    }

    /// True when every nonzero entry of `X` lies in the last row/column.
    pub fn is_star(&self) -> bool {
        let m = self.n_hidden();
        if m == 0 {
            return false;
        }
        (0..m).all(|i| (i + 1..m.saturating_sub(1)).all(|j| self.x.get(i, j) == ZERO))
    }

    pub fn into_rbm(self) -> Result<RbmNns> {
        RbmNns::try_from(self)
    }

    pub fn into_star(self) -> Result<StarUbm> {
        StarUbm::try_from(self)
    }

    /// Largest modulus among all parameters.
    pub fn max_abs_param(&self) -> f64 {
        let m = |it: &mut dyn Iterator<Item = &C64>| it.map(|z| z.norm()).fold(0.0, f64::max);
        m(&mut self.a.iter())
            .max(m(&mut self.b.iter()))
            .max(m(&mut self.w.iter()))
            .max(self.x.max_abs())
            .max(self.y.max_abs())
    }

    /// True when every parameter has zero imaginary part.
    pub fn is_real(&self, tol: f64) -> bool {
        self.hidden_is_real(tol)
            && self.a.iter().all(|z| z.im.abs() <= tol)
            && self.y.entries().iter().all(|z| z.im.abs() <= tol)
    }

    /// True when `b`, `W` and `X` are real.
    pub fn hidden_is_real(&self, tol: f64) -> bool {
        self.b.iter().all(|z| z.im.abs() <= tol)
            && self.w.iter().all(|z| z.im.abs() <= tol)
            && self.x.entries().iter().all(|z| z.im.abs() <= tol)
    }

    /// Keeps only the hidden nodes listed in `keep`, in that order.
    pub fn select_hidden(&self, keep: &[usize]) -> UbmNns {
        let n = self.n_visible();
        let mut w = Array2::zeros((keep.len(), n));
        let mut x = SymMatrix::zeros(keep.len());
        for (r, &k) in keep.iter().enumerate() {
            w.row_mut(r).assign(&self.w.row(k));
            for (c, &l) in keep.iter().enumerate().skip(r + 1) {
                x.set(r, c, self.x.get(k, l));
            }
        }
        UbmNns {
            a: self.a.clone(),
            b: keep.iter().map(|&k| self.b[k]).collect(),
            w,
            x,
            y: self.y.clone(),
            log_prefactor: self.log_prefactor,
        }
    }

    /// Appends `extra` hidden nodes with zero parameters.
    pub(crate) fn grow_hidden(&self, extra: usize) -> UbmNns {
        let m = self.n_hidden();
        let n = self.n_visible();
        let mut w = Array2::zeros((m + extra, n));
        w.slice_mut(s![..m, ..]).assign(&self.w);
        let mut b = self.b.clone();
        b.resize(m + extra, ZERO);
        UbmNns {
            a: self.a.clone(),
            b,
            w,
            x: self.x.grown(m + extra),
            y: self.y.clone(),
            log_prefactor: self.log_prefactor,
        }
    }
}

impl RbmNns {
    pub fn new(a: Vec<C64>, b: Vec<C64>, w: Array2<C64>, y: SymMatrix) -> Result<Self> {
        let m = b.len();
        Ok(RbmNns(UbmNns::new(a, b, w, SymMatrix::zeros(m), y)?))
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        RbmNns(UbmNns::zeros(n, m))
    }

    pub fn as_ubm(&self) -> &UbmNns {
        &self.0
    }

    pub fn into_ubm(self) -> UbmNns {
        self.0
    }

    pub fn n_visible(&self) -> usize {
        self.0.n_visible()
    }

    pub fn n_hidden(&self) -> usize {
        self.0.n_hidden()
    }

    pub fn a(&self) -> &[C64] {
        &self.0.a
    }

    pub fn b(&self) -> &[C64] {
        &self.0.b
    }

    pub fn w(&self) -> &Array2<C64> {
        &self.0.w
    }

    pub fn y(&self) -> &SymMatrix {
        &self.0.y
    }

    pub fn log_prefactor(&self) -> C64 {
        self.0.log_prefactor
    }

    pub fn with_log_prefactor(self, lp: C64) -> Self {
        RbmNns(self.0.with_log_prefactor(lp))
    }

    /// Removes hidden nodes whose `W` row and offset are both zero.
    ///
    /// Each removed node contributed a constant factor 2, folded into the prefactor.
    pub fn pruned(&self) -> RbmNns {
        let keep: Vec<usize> = (0..self.n_hidden())
            .filter(|&k| self.0.b[k] != ZERO || self.0.w.row(k).iter().any(|z| *z != ZERO))
            .collect();
        let dropped = self.n_hidden() - keep.len();
        let mut u = self.0.select_hidden(&keep);
        u.log_prefactor += dropped as f64 * std::f64::consts::LN_2;
        RbmNns(u)
    }
}

impl TryFrom<UbmNns> for RbmNns {
    type Error = Error;
    fn try_from(u: UbmNns) -> Result<Self> {
        if !u.is_rbm() {
            return Err(Error::Structure("hidden-hidden couplings present".into()));
        }
        Ok(RbmNns(u))
    }
}

impl From<RbmNns> for UbmNns {
    fn from(r: RbmNns) -> UbmNns {
        r.0
    }
}

impl StarUbm {
    pub fn as_ubm(&self) -> &UbmNns {
        &self.0
    }

    pub fn into_ubm(self) -> UbmNns {
        self.0
    }

    pub fn n_visible(&self) -> usize {
        self.0.n_visible()
    }

    pub fn n_hidden(&self) -> usize {
        self.0.n_hidden()
    }

    pub fn hub(&self) -> usize {
        self.0.n_hidden() - 1
    }

    /// `X_{k,M}` for a non-hub node `k`.
    pub fn hub_coupling(&self, k: usize) -> C64 {
        self.0.x.get(k, self.hub())
    }
}

impl TryFrom<UbmNns> for StarUbm {
    type Error = Error;
    fn try_from(u: UbmNns) -> Result<Self> {
        if !u.is_star() {
            return Err(Error::Structure(
                "hidden-hidden couplings not confined to the hub node".into(),
            ));
        }
        Ok(StarUbm(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        let w = Array2::zeros((2, 3));
        let r = UbmNns::new(vec![ZERO; 3], vec![ZERO; 1], w, SymMatrix::zeros(1), SymMatrix::zeros(3));
        assert!(matches!(r, Err(Error::Shape(_))));
    }

    #[test]
    fn star_detection() {
        let mut u = UbmNns::zeros(2, 3);
        u.x.set(0, 2, C64::new(0.3, 0.0));
        assert!(u.is_star());
        u.x.set(0, 1, C64::new(0.1, 0.0));
        assert!(!u.is_star());
        assert!(StarUbm::try_from(u).is_err());
    }

    #[test]
    fn rbm_round_trip() {
        let r = RbmNns::zeros(3, 2);
        let u: UbmNns = r.clone().into();
        assert_eq!(u.into_rbm().unwrap(), r);
    }

    #[test]
    fn prune_drops_dead_nodes() {
        let mut u = UbmNns::zeros(2, 3);
        u.w[[1, 0]] = C64::new(0.5, 0.0);
        let r = RbmNns(u).pruned();
        assert_eq!(r.n_hidden(), 1);
        assert!((r.log_prefactor().re - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }
}
