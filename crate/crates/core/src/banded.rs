//! Pentadiagonal linear systems solved by Gaussian elimination without pivoting.

use crate::error::{Error, Result};

/// A pentadiagonal matrix stored by diagonals.
///
/// Row `i` reads `l2[i]·x[i−2] + l1[i]·x[i−1] + d[i]·x[i] + u1[i]·x[i+1] + u2[i]·x[i+2]`;
/// entries referring outside `0..n` are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct Pentadiagonal {
    pub l2: Vec<f64>,
    pub l1: Vec<f64>,
    pub d: Vec<f64>,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
}

impl Pentadiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            l2: vec![0.0; n],
            l1: vec![0.0; n],
            d: vec![0.0; n],
            u1: vec![0.0; n],
            u2: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Matrix-vector product, used by tests and residual checks.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.d[i] * x[i];
                if i >= 1 {
                    s += self.l1[i] * x[i - 1];
                }
                if i >= 2 {
                    s += self.l2[i] * x[i - 2];
                }
                if i + 1 < n {
                    s += self.u1[i] * x[i + 1];
                }
                if i + 2 < n {
                    s += self.u2[i] * x[i + 2];
                }
                s
            })
            .collect()
    }

    /// Factorizes once; the factorization solves any number of right-hand sides.
    pub fn factor(&self) -> Result<PentaFactor> {
        let n = self.len();
        let (mut l2, mut l1, mut d, mut u1, u2) = (
            self.l2.clone(),
            self.l1.clone(),
            self.d.clone(),
            self.u1.clone(),
            self.u2.clone(),
        );
        for k in 0..n {
            let pivot = d[k];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::LinearSolve { row: k });
            }
            // Eliminate x[k] from rows k+1 and k+2; row k's band is (d, u1, u2).
            if k + 1 < n {
                let f = l1[k + 1] / pivot;
                l1[k + 1] = f;
                d[k + 1] -= f * u1[k];
                if k + 2 < n {
                    u1[k + 1] -= f * u2[k];
                }
            }
            if k + 2 < n {
                let f = l2[k + 2] / pivot;
                l2[k + 2] = f;
                l1[k + 2] -= f * u1[k];
                d[k + 2] -= f * u2[k];
            }
        }
        Ok(PentaFactor { l2, l1, d, u1, u2 })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        Ok(self.factor()?.solve(rhs))
    }
}

/// LU factors of a [`Pentadiagonal`]: unit lower multipliers and the upper band.
#[derive(Clone, Debug)]
pub struct PentaFactor {
    l2: Vec<f64>,
    l1: Vec<f64>,
    d: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl PentaFactor {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut y = rhs.to_vec();
        for k in 0..n {
            if k + 1 < n {
                y[k + 1] -= self.l1[k + 1] * y[k];
            }
            if k + 2 < n {
                y[k + 2] -= self.l2[k + 2] * y[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            if k + 1 < n {
                s -= self.u1[k] * y[k + 1];
            }
            if k + 2 < n {
                s -= self.u2[k] * y[k + 2];
            }
            y[k] = s / self.d[k];
        }
        y
    }
}
