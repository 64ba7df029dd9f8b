//! Small dense complex linear algebra: LU factorization with partial pivoting
//! for the steady-state solve and rank-deficiency detection.
//!
//! Every system here is at most 16x16, so a direct dense factorization is the
//! whole story.

use ndarray::Array2;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    NotSquare { rows: usize, cols: usize },
    Singular,
    DimensionMismatch { expected: usize, got: usize },
}

impl std::fmt::Display for LinalgError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinalgError::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            LinalgError::Singular => write!(f, "matrix is singular to working precision"),
            LinalgError::DimensionMismatch { expected, got } => {
                write!(f, "rhs length {got} does not match matrix dimension {expected}")
            }
        }
    }
}

impl std::error::Error for LinalgError {}

/// LU factorization with partial pivoting, stored in-place.
pub struct Lu {
    lu: Array2<Complex64>,
    perm: Vec<usize>,
    /// Largest |u_kk| encountered; reference scale for pivot tests.
    max_pivot: f64,
    /// |u_kk| in elimination order.
    pivots: Vec<f64>,
}

impl Lu {
    pub fn factor(a: &Array2<Complex64>) -> Result<Lu, LinalgError> {
        let (rows, cols) = a.dim();
        if rows != cols {
            return Err(LinalgError::NotSquare { rows, cols });
        }
        let n = rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut pivots = Vec::with_capacity(n);
        let mut max_pivot = 0.0f64;

        for k in 0..n {
            let mut best = k;
            let mut best_mag = lu[[k, k]].norm();
            for i in (k + 1)..n {
                let mag = lu[[i, k]].norm();
                if mag > best_mag {
                    best = i;
                    best_mag = mag;
                }
            }
            if best != k {
                for j in 0..n {
                    let tmp = lu[[k, j]];
                    lu[[k, j]] = lu[[best, j]];
                    lu[[best, j]] = tmp;
                }
                perm.swap(k, best);
            }
            let pivot = lu[[k, k]];
            let mag = pivot.norm();
            pivots.push(mag);
            max_pivot = max_pivot.max(mag);
            if mag == 0.0 {
                continue; // exactly rank-deficient column; keep going to count
            }
            for i in (k + 1)..n {
                let factor = lu[[i, k]] / pivot;
                lu[[i, k]] = factor;
                if factor != Complex64::new(0.0, 0.0) {
                    for j in (k + 1)..n {
                        let sub = factor * lu[[k, j]];
                        lu[[i, j]] -= sub;
                    }
                }
            }
        }
        Ok(Lu { lu, perm, max_pivot, pivots })
    }

    /// Number of pivots below `rel_tol` times the largest pivot; estimates the
    /// nullity of the factored matrix.
    pub fn near_null_count(&self, rel_tol: f64) -> usize {
        let threshold = self.max_pivot * rel_tol;
        self.pivots.iter().filter(|&&p| p <= threshold).count()
    }

    /// Solve A x = b from the stored factorization.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        let n = self.perm.len();
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, got: b.len() });
        }
        // forward substitution on P b
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[[i, j]] * y[j];
                y[i] -= sub;
            }
        }
        // back substitution
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let sub = self.lu[[i, j]] * y[j];
                y[i] -= sub;
            }
            let pivot = self.lu[[i, i]];
            if pivot.norm() == 0.0 {
                return Err(LinalgError::Singular);
            }
            y[i] /= pivot;
        }
        Ok(y)
    }
}

/// Matrix-vector product for flattened row-major complex matrices.
pub fn matvec(a: &Array2<Complex64>, x: &[Complex64], out: &mut [Complex64]) {
    let n = a.nrows();
    debug_assert_eq!(x.len(), n);
    debug_assert_eq!(out.len(), n);
    let data = a.as_slice().expect("contiguous matrix");
    for (i, out_i) in out.iter_mut().enumerate() {
        let row = &data[i * n..(i + 1) * n];
        let mut acc = Complex64::new(0.0, 0.0);
        for (aij, xj) in row.iter().zip(x) {
            acc += aij * xj;
        }
        *out_i = acc;
    }
}
