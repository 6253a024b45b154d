//! Dense Hermitian eigendecomposition helpers and a Sturm-sequence solver
//! for extreme eigenvalues of real symmetric tridiagonal matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching eigenvector columns.
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

/// Eigendecompose a dense Hermitian matrix.
///
/// The input is symmetrized as `(A + A^dag)/2` first so that accumulated
/// roundoff in the caller cannot feed a non-Hermitian matrix to the solver.
pub fn hermitian_eigen(a: &DMatrix<Complex64>) -> HermitianEigen {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eigen needs a square matrix");
    let sym = (a + a.adjoint()).scale(0.5);
    let decomp = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| decomp.eigenvalues[i].total_cmp(&decomp.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        eigenvectors.set_column(col, &decomp.eigenvectors.column(i));
    }
    HermitianEigen { eigenvalues, eigenvectors }
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Vec<f64> {
    let sym = (a + a.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Real symmetric tridiagonal matrix given by its diagonal and subdiagonal.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
}

impl Tridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via the
    /// LDL^T-style recurrence, with the usual underflow safeguard).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.dim();
        let mut count = 0;
        let mut d = 1.0_f64;
        for i in 0..n {
            let off2 = if i == 0 { 0.0 } else { self.sub[i - 1] * self.sub[i - 1] };
            d = self.diag[i] - x - off2 / d;
            if d == 0.0 {
                d = f64::MIN_POSITIVE;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Smallest and largest eigenvalue by bisection on the Sturm count.
    ///
    /// Accuracy is `~1e-13 * max(1, |spectral bound|)`, plenty below the
    /// 1e-9 cross-check tolerance used by callers.
    pub fn extreme_eigenvalues(&self) -> (f64, f64) {
        let n = self.dim();
        assert!(n > 0);
        // Gershgorin bounds.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.sub[i - 1].abs();
            }
            if i + 1 < n {
                r += self.sub[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let scale = lo.abs().max(hi.abs()).max(1.0);
        let tol = 1e-14 * scale;
        let min = self.bisect_kth(0, lo, hi, tol);
        let max = self.bisect_kth(n - 1, lo, hi, tol);
        (min, max)
    }

    /// Bisect for the (k+1)-th smallest eigenvalue inside `[lo, hi]`.
    fn bisect_kth(&self, k: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= tol || mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Kahan-compensated sum of an iterator of f64 terms.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Kronecker product of two dense complex matrices.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::<Complex64>::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let scale = a[(i, j)];
            if scale.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = scale * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Max absolute entry difference between two equally sized matrices.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest hermiticity violation `max_ij |A_ij - conj(A_ji)|`.
pub fn hermiticity_residual(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// 2-norm of a complex vector.
pub fn vec_norm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
