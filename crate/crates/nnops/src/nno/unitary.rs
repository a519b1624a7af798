use super::{nno_to_matrix, Nno};
use crate::logmath::{C64, ONE, ZERO};
use serde::Serialize;

/// Parameter block named in a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Block {
    Alpha,
    Beta,
    Lambda,
    Gamma,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    /// A block that must be purely imaginary has a real part.
    RealPart(Block),
    /// Row of Ω without exactly one non-trivial entry.
    Row { row: usize, nontrivial: usize },
    /// Two rows place their non-trivial entry in the same column.
    Column { col: usize },
    /// `cos(2 Im Ω)` does not vanish at the non-trivial entry.
    Phase { row: usize, col: usize },
    /// `|A|^2 ∏ 2cosh(2 Re Ω)` differs from one.
    Normalization { value: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitarityReport {
    pub unitary: bool,
    pub violations: Vec<Violation>,
    /// `max |U†U - I|`, computed when K ≤ 6.
    pub numeric_deviation: Option<f64>,
}

impl UnitarityReport {
    /// Whether the structural verdict agrees with the numeric one at `tol`.
    pub fn numeric_agrees(&self, tol: f64) -> Option<bool> {
        self.numeric_deviation.map(|d| (d < tol) == self.unitary)
    }
}

/// An Ω entry whose factor `exp(Ω q q')` is constant in `q q' = ±1`.
fn trivial(z: C64, tol: f64) -> bool {
    z.re.abs() <= tol && z.im.sin().abs() <= tol
}

/// Structural unitarity test: imaginary α, β, Λ, Γ; Ω supported on a permutation
/// with `cos(2 Im Ω) = 0` there; and the normalization of `A`.
pub fn check_nno_unitary(op: &Nno, tol: f64) -> UnitarityReport {
    let k = op.k();
    let mut violations = Vec::new();
    let blocks: [(Block, Vec<C64>); 4] = [
        (Block::Alpha, op.alpha.clone()),
        (Block::Beta, op.beta.clone()),
        (Block::Lambda, op.lambda.entries().to_vec()),
        (Block::Gamma, op.gamma.entries().to_vec()),
    ];
    for (block, vals) in blocks {
        if vals.iter().any(|z| z.re.abs() > tol) {
            violations.push(Violation::RealPart(block));
        }
    }
    let mut support = Vec::with_capacity(k);
    for row in 0..k {
        let cols: Vec<usize> = (0..k).filter(|&c| !trivial(op.omega[[row, c]], tol)).collect();
        if cols.len() != 1 {
            violations.push(Violation::Row { row, nontrivial: cols.len() });
            continue;
        }
        let col = cols[0];
        if (2.0 * op.omega[[row, col]].im).cos().abs() > tol {
            violations.push(Violation::Phase { row, col });
        }
        support.push((row, col));
    }
    let mut seen = vec![false; k];
    for &(_, col) in &support {
        if seen[col] {
            violations.push(Violation::Column { col });
        }
        seen[col] = true;
    }
    if support.len() == k {
        let mut log_norm = 2.0 * op.a.norm().ln();
        for &(row, col) in &support {
            log_norm += crate::logmath::log_2cosh_re(2.0 * op.omega[[row, col]].re);
        }
        if log_norm.abs() > tol {
            violations.push(Violation::Normalization { value: log_norm.exp() });
        }
    }
    let numeric_deviation = (k <= 6).then(|| {
        let u = nno_to_matrix(op).expect("K within cap");
        let n = u.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for r in 0..n {
                    acc += u[[r, i]].conj() * u[[r, j]];
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    });
    UnitarityReport { unitary: violations.is_empty(), violations, numeric_deviation }
}
