//! Small dense linear algebra: Cholesky (with optional jitter ladder) and
//! Gaussian elimination. Matrices are row-major `n × n` slices.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Lower-triangular Cholesky factor `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

/// Failure of a Cholesky factorization at the given pivot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotPositiveDefinite {
    pub pivot: usize,
}

impl Cholesky {
    /// Plain factorization; fails on the first non-positive pivot.
    pub fn factor(a: &[f64], n: usize) -> Result<Self, NotPositiveDefinite> {
        Self::factor_with_tolerance(a, n, 0.0)
    }

    /// Factorization that also rejects pivots `<= rel_tol * a[j][j]`, used as
    /// a cheap rank-deficiency test.
    pub fn factor_with_tolerance(
        a: &[f64],
        n: usize,
        rel_tol: f64,
    ) -> Result<Self, NotPositiveDefinite> {
        assert_eq!(a.len(), n * n, "matrix must be n x n");
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut diag = a[j * n + j];
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            if !(diag > rel_tol * a[j * n + j]) || !(diag > 0.0) {
                return Err(NotPositiveDefinite { pivot: j });
            }
            let ljj = diag.sqrt();
            l[j * n + j] = ljj;
            for i in (j + 1)..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diag_min_max(&self) -> (f64, f64) {
        (0..self.n)
            .map(|i| self.l[i * self.n + i])
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }
}

/// Cholesky factor obtained after adding `jitter` to the diagonal.
#[derive(Debug, Clone)]
pub struct JitteredCholesky {
    pub factor: Cholesky,
    pub jitter: f64,
}

/// Factor `a`, escalating diagonal jitter from `1e-12·trace/n` by factors of
/// ten up to `1e-6·trace/n` when the plain factorization fails. Returns the
/// largest jitter tried on failure.
pub fn cholesky_with_jitter(a: &[f64], n: usize) -> Result<JitteredCholesky, f64> {
    if let Ok(factor) = Cholesky::factor(a, n) {
        return Ok(JitteredCholesky { factor, jitter: 0.0 });
    }
    let trace: f64 = (0..n).map(|i| a[i * n + i].abs()).sum();
    let scale = if n > 0 && trace > 0.0 { trace / n as f64 } else { 1.0 };
    let mut jitter = 1e-12 * scale;
    let max_jitter = 1e-6 * scale * (1.0 + 1e-9);
    let mut work = a.to_vec();
    while jitter <= max_jitter {
        work.copy_from_slice(a);
        for i in 0..n {
            work[i * n + i] += jitter;
        }
        if let Ok(factor) = Cholesky::factor(&work, n) {
            return Ok(JitteredCholesky { factor, jitter });
        }
        jitter *= 10.0;
    }
    Err(jitter / 10.0)
}

/// Gaussian elimination with partial pivoting. Returns `None` when a pivot
/// falls below `1e-12` times the largest entry of `a`.
pub fn solve_dense(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))
            .unwrap_or(col);
        if m[pivot_row * n + col].abs() <= 1e-12 * scale {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                m.swap(col * n + k, pivot_row * n + k);
            }
            rhs.swap(col, pivot_row);
        }
        let p = m[col * n + col];
        for row in (col + 1)..n {
            let factor = m[row * n + col] / p;
            if factor != 0.0 {
                for k in col..n {
                    m[row * n + k] -= factor * m[col * n + k];
                }
                rhs[row] -= factor * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for k in (i + 1)..n {
            s -= m[i * n + k] * x[k];
        }
        x[i] = s / m[i * n + i];
    }
    Some(x)
}

/// `y = A x` for row-major square `A`.
pub fn mat_vec(a: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    (0..n).map(|i| a[i * n..(i + 1) * n].iter().zip(x).map(|(aij, xj)| aij * xj).sum()).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
