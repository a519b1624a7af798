use super::{RbmNns, UbmNns};
use crate::error::{Error, Result};
use crate::logmath::{C64, ZERO};
use crate::sym::SymMatrix;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

/// On-disk form of a network state. Complex numbers are `[re, im]`, matrices row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct StateDoc {
    pub n_visible: usize,
    pub n_hidden: usize,
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
    pub W: Vec<Vec<[f64; 2]>>,
    pub X: Vec<Vec<[f64; 2]>>,
    pub Y: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_prefactor: Option<[f64; 2]>,
}

pub(crate) fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub(crate) fn cplx(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

pub(crate) fn rows_of(rows: &[Vec<C64>]) -> Vec<Vec<[f64; 2]>> {
    rows.iter().map(|r| r.iter().copied().map(pair).collect()).collect()
}

pub(crate) fn rows_from(rows: &[Vec<[f64; 2]>]) -> Vec<Vec<C64>> {
    rows.iter().map(|r| r.iter().copied().map(cplx).collect()).collect()
}

pub(crate) fn sym_from(rows: &[Vec<[f64; 2]>], name: &str, n: usize) -> Result<SymMatrix> {
    if rows.len() != n {
        return Err(Error::Shape(format!("{name} has {} rows, expected {n}", rows.len())));
    }
    SymMatrix::from_rows(&rows_from(rows), 0.0)
        .ok_or_else(|| Error::Structure(format!("{name} must be symmetric with zero diagonal")))
}

impl From<&UbmNns> for StateDoc {
    fn from(u: &UbmNns) -> Self {
        let w: Vec<Vec<C64>> = u.w.rows().into_iter().map(|r| r.to_vec()).collect();
        StateDoc {
            n_visible: u.n_visible(),
            n_hidden: u.n_hidden(),
            a: u.a.iter().copied().map(pair).collect(),
            b: u.b.iter().copied().map(pair).collect(),
            W: rows_of(&w),
            X: rows_of(&u.x.to_rows()),
            Y: rows_of(&u.y.to_rows()),
            log_prefactor: (u.log_prefactor != ZERO).then(|| pair(u.log_prefactor)),
        }
    }
}

impl TryFrom<&StateDoc> for UbmNns {
    type Error = Error;
    fn try_from(d: &StateDoc) -> Result<Self> {
        let (n, m) = (d.n_visible, d.n_hidden);
        if d.a.len() != n || d.b.len() != m {
            return Err(Error::Shape(format!(
                "a has {} and b has {} entries for N={n}, M={m}",
                d.a.len(),
                d.b.len()
            )));
        }
        if d.W.len() != m || d.W.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("W must be {m}x{n}")));
        }
        let mut w = Array2::zeros((m, n));
        for (i, row) in d.W.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                w[[i, j]] = cplx(p);
            }
        }
        let x = sym_from(&d.X, "X", m)?;
        let y = sym_from(&d.Y, "Y", n)?;
        let a = d.a.iter().copied().map(cplx).collect();
        let b = d.b.iter().copied().map(cplx).collect();
        let u = UbmNns::new(a, b, w, x, y)?;
        Ok(u.with_log_prefactor(d.log_prefactor.map(cplx).unwrap_or(ZERO)))
    }
}

impl UbmNns {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StateDoc::from(self)).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateDoc = serde_json::from_str(text)?;
        UbmNns::try_from(&doc)
    }
}

impl RbmNns {
    pub fn to_json(&self) -> String {
        self.0.to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        UbmNns::from_json(text)?.into_rbm()
    }
}
