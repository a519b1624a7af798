use crate::logmath::{C64, ZERO};

/// Complex symmetric matrix with zero diagonal, stored as its strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    upper: Vec<C64>,
}

#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, upper: vec![ZERO; n * n.saturating_sub(1) / 2] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => ZERO,
            std::cmp::Ordering::Less => self.upper[tri_index(self.n, i, j)],
            std::cmp::Ordering::Greater => self.upper[tri_index(self.n, j, i)],
        }
    }

    /// Sets both `(i, j)` and `(j, i)`; diagonal writes are ignored.
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        if i == j {
            return;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let k = tri_index(self.n, lo, hi);
        self.upper[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(|v| *v == ZERO)
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> &[C64] {
        &self.upper
    }

    pub fn entries_mut(&mut self) -> &mut [C64] {
        &mut self.upper
    }

    /// Copy into a larger matrix, keeping entries at the same indices.
    pub fn grown(&self, n: usize) -> Self {
        assert!(n >= self.n);
        let mut out = SymMatrix::zeros(n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Builds from a dense matrix; `None` if it is not symmetric with zero diagonal.
    pub fn from_rows(rows: &[Vec<C64>], tol: f64) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            if rows[i][i].norm() > tol {
                return None;
            }
            for j in i + 1..n {
                if (rows[i][j] - rows[j][i]).norm() > tol {
                    return None;
                }
                m.set(i, j, rows[i][j]);
            }
        }
        Some(m)
    }

    /// `x^T M x / 2` for a real ±1 vector.
    pub fn half_quadratic(&self, x: &[f64]) -> C64 {
        let mut acc = ZERO;
        for i in 0..self.n {
            for j in i + 1..self.n {
                acc += self.get(i, j) * (x[i] * x[j]);
            }
        }
        acc
    }

    /// `(M x)_i` for a real vector.
    pub fn row_dot(&self, i: usize, x: &[f64]) -> C64 {
        let mut acc = ZERO;
        for j in 0..self.n {
            if j != i {
                acc += self.get(i, j) * x[j];
            }
        }
        acc
    }
}
