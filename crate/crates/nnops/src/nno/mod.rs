//! K-body neural-network operations: gates whose matrix elements are the
//! exponential of a quadratic form in the input and output spins.

mod apply;
mod circuit;
pub mod random;
mod unitary;

pub use apply::{
    apply_k_body, apply_one_body, apply_two_body, apply_z_rotation, apply_zz_exponent,
    apply_zz_rotation,
};
pub use circuit::{Circuit, GateParams, GateRecord};
pub use unitary::{check_nno_unitary, Block, UnitarityReport, Violation};

use crate::error::{Error, Result};
use crate::logmath::{C64, I, ZERO};
use crate::nqs::json::{cplx, pair, rows_from, rows_of, sym_from};
use crate::spin::spins_of_index;
use crate::sym::SymMatrix;
use ndarray::Array2;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;

/// Two-site entangler `(1/2) e^{iλ q1 q2} e^{iπ/4 (q1 q1' + q2 q2')}`; maximally entangling at `λ = π/4`.
pub fn entangling_nno(lambda: f64) -> Nno {
    let mut l = SymMatrix::zeros(2);
    l.set(0, 1, I * lambda);
    let omega = Array2::from_shape_fn((2, 2), |(i, j)| if i == j { I * FRAC_PI_4 } else { ZERO });
    Nno::new(C64::new(0.5, 0.0), vec![ZERO; 2], vec![ZERO; 2], l, SymMatrix::zeros(2), omega).expect("2-site shapes")
}

/// Largest body count for which the dense matrix is built.
pub const MAX_MATRIX_K: usize = 10;

/// `U[q, q'] = A exp(α·q + β·q' + q^T Λ q / 2 + q^T Ω q' + q'^T Γ q' / 2)`.
///
/// `q` labels the output (row) spins, `q'` the input (column) spins.
#[derive(Debug, Clone, PartialEq)]
pub struct Nno {
    pub a: C64,
    pub alpha: Vec<C64>,
    pub beta: Vec<C64>,
    pub lambda: SymMatrix,
    pub gamma: SymMatrix,
    pub omega: Array2<C64>,
}

/// Real angles of the one-body unitary family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneBodyAngles {
    pub alpha_p: f64,
    pub beta_p: f64,
    pub omega_p: f64,
}

impl Nno {
    pub fn new(
        a: C64,
        alpha: Vec<C64>,
        beta: Vec<C64>,
        lambda: SymMatrix,
        gamma: SymMatrix,
        omega: Array2<C64>,
    ) -> Result<Self> {
        let k = alpha.len();
        if k == 0 {
            return Err(Error::Shape("an operation acts on at least one site".into()));
        }
        if beta.len() != k || lambda.dim() != k || gamma.dim() != k || omega.dim() != (k, k) {
            return Err(Error::Shape(format!("inconsistent block sizes for K={k}")));
        }
        Ok(Nno { a, alpha, beta, lambda, gamma, omega })
    }

    /// Single-site operation with the given prefactor, offsets and coupling.
    pub fn one_body(a: C64, alpha: C64, beta: C64, omega: C64) -> Self {
        Nno {
            a,
            alpha: vec![alpha],
            beta: vec![beta],
            lambda: SymMatrix::zeros(1),
            gamma: SymMatrix::zeros(1),
            omega: Array2::from_elem((1, 1), omega),
        }
    }

    pub fn k(&self) -> usize {
        self.alpha.len()
    }

    /// Logarithm of a single matrix element.
    pub fn log_element(&self, q: &[f64], qp: &[f64]) -> C64 {
        let k = self.k();
        let mut e = self.lambda.half_quadratic(q) + self.gamma.half_quadratic(qp);
        for i in 0..k {
            e += self.alpha[i] * q[i] + self.beta[i] * qp[i];
            for j in 0..k {
                e += self.omega[[i, j]] * (q[i] * qp[j]);
            }
        }
        e
    }
}

/// Dense `2^K x 2^K` matrix of an operation.
pub fn nno_to_matrix(op: &Nno) -> Result<Array2<C64>> {
    let k = op.k();
    if k > MAX_MATRIX_K {
        return Err(Error::Resource(format!("K={k} exceeds the dense matrix cap {MAX_MATRIX_K}")));
    }
    let dim = 1usize << k;
    let configs: Vec<Vec<f64>> = (0..dim).map(|i| spins_of_index(k, i)).collect();
    Ok(Array2::from_shape_fn((dim, dim), |(r, c)| {
        op.a * op.log_element(&configs[r], &configs[c]).exp()
    }))
}

/// Number of real parameters of a K-body operation and of a generic K-body unitary
/// (both modulo a global phase).
pub fn param_count(k: u32) -> (u64, u64) {
    let k64 = u64::from(k);
    (k64 * k64 + 2 * k64, (1u64 << (2 * k)) - 1)
}

/// The one-body unitary with `α = iα'`, `β = iβ'`, `ω = ω' + iπ/4`, `A = 1/sqrt(2cosh 2ω')`.
pub fn one_body_unitary(angles: OneBodyAngles) -> Nno {
    let w = angles.omega_p;
    // 1/sqrt(2cosh 2w) = exp(-|w|) / sqrt(1 + exp(-4|w|))
    let a = (-w.abs()).exp() / (1.0 + (-4.0 * w.abs()).exp()).sqrt();
    Nno::one_body(
        C64::new(a, 0.0),
        I * angles.alpha_p,
        I * angles.beta_p,
        C64::new(w, FRAC_PI_4),
    )
}

/// Angles giving `e^{iπ/4} exp(-iθσ_x/2)`.
pub fn x_rotation_angles(theta: f64) -> OneBodyAngles {
    OneBodyAngles { alpha_p: 0.0, beta_p: 0.0, omega_p: -0.5 * (theta / 2.0).tan().ln() }
}

/// Transverse-field factor `exp(τJh σ_x)` (imaginary time) or `exp(iτJh σ_x)` (real time).
pub fn g1_nno(tau: f64, j: f64, h: f64, real_time: bool) -> Result<Nno> {
    let c = tau * j * h;
    if c == 0.0 {
        return Err(Error::DegenerateGate(
            "τJh = 0 makes the gate diagonal; use a z rotation instead".into(),
        ));
    }
    let (diag, off) = if real_time {
        (C64::new(c.cos(), 0.0), C64::new(0.0, c.sin()))
    } else {
        (C64::new(c.cosh(), 0.0), C64::new(c.sinh(), 0.0))
    };
    if diag == ZERO {
        return Err(Error::DegenerateGate("cos(τJh) = 0 makes the gate off-diagonal".into()));
    }
    let omega = 0.5 * (diag / off).ln();
    let a = diag * (-omega).exp();
    Ok(Nno::one_body(a, ZERO, ZERO, omega))
}

/// On-disk form of an operation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct NnoDoc {
    pub k: usize,
    pub A: [f64; 2],
    pub alpha: Vec<[f64; 2]>,
    pub beta: Vec<[f64; 2]>,
    pub Lambda: Vec<Vec<[f64; 2]>>,
    pub Gamma: Vec<Vec<[f64; 2]>>,
    pub Omega: Vec<Vec<[f64; 2]>>,
}

impl From<&Nno> for NnoDoc {
    fn from(op: &Nno) -> Self {
        let omega: Vec<Vec<C64>> = op.omega.rows().into_iter().map(|r| r.to_vec()).collect();
        NnoDoc {
            k: op.k(),
            A: pair(op.a),
            alpha: op.alpha.iter().copied().map(pair).collect(),
            beta: op.beta.iter().copied().map(pair).collect(),
            Lambda: rows_of(&op.lambda.to_rows()),
            Gamma: rows_of(&op.gamma.to_rows()),
            Omega: rows_of(&omega),
        }
    }
}

impl TryFrom<&NnoDoc> for Nno {
    type Error = Error;
    fn try_from(d: &NnoDoc) -> Result<Self> {
        let k = d.k;
        let rows = rows_from(&d.Omega);
        if rows.len() != k || rows.iter().any(|r| r.len() != k) {
            return Err(Error::Shape(format!("Omega must be {k}x{k}")));
        }
        let omega = Array2::from_shape_fn((k, k), |(i, j)| rows[i][j]);
        Nno::new(
            cplx(d.A),
            d.alpha.iter().copied().map(cplx).collect(),
            d.beta.iter().copied().map(cplx).collect(),
            sym_from(&d.Lambda, "Lambda", k)?,
            sym_from(&d.Gamma, "Gamma", k)?,
            omega,
        )
    }
}

impl Nno {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NnoDoc::from(self)).expect("operation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NnoDoc = serde_json::from_str(text)?;
        Nno::try_from(&doc)
    }
}
