//! Collective angular-momentum operators `J_alpha` and their powers, in the
//! full `2^N`-dimensional space and in the `(N+1)`-dimensional Dicke
//! (maximal-spin) representation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::axis::Axis;
use crate::error::{Error, Result};
use crate::linalg;

/// Default cap on `N` for full-space (`2^N`) constructions.
pub const DEFAULT_FULL_CAP: usize = 14;

/// Matrix representation tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Repr {
    /// Full `2^N`-dimensional qubit space.
    Full(usize),
    /// `(N+1)`-dimensional symmetric (Dicke) subspace.
    Dicke(usize),
}

impl Repr {
    pub fn n_qubits(&self) -> usize {
        match self {
            Repr::Full(n) | Repr::Dicke(n) => *n,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Repr::Full(n) => 1usize << n,
            Repr::Dicke(n) => n + 1,
        }
    }
}

/// Dense Hermitian operator tagged with its representation.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    matrix: DMatrix<Complex64>,
    repr: Repr,
}

impl OperatorMatrix {
    /// Wrap a matrix after checking the dimension and hermiticity invariants.
    pub fn try_new(matrix: DMatrix<Complex64>, repr: Repr) -> Result<Self> {
        if matrix.nrows() != repr.dim() || matrix.ncols() != repr.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, repr {:?} needs dim {}",
                matrix.nrows(),
                matrix.ncols(),
                repr,
                repr.dim()
            )));
        }
        let res = linalg::hermiticity_residual(&matrix);
        if res > 1e-10 {
            return Err(Error::InvalidMatrix(format!(
                "hermiticity residual {res:.3e} exceeds 1e-10"
            )));
        }
        Ok(Self { matrix, repr })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn n_qubits(&self) -> usize {
        self.repr.n_qubits()
    }

    pub fn dim(&self) -> usize {
        self.repr.dim()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// `(h_max - h_min)^2`, the squared spectral spread.
    pub fn spectral_spread_sq(&self) -> f64 {
        let ev = self.eigenvalues();
        let spread = ev[ev.len() - 1] - ev[0];
        spread * spread
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Capacity { n, cap });
    }
    Ok(())
}

/// Build `J_alpha = (1/2) sum_i sigma_alpha^(i)` in the requested representation.
///
/// Full representation uses the Kronecker (site-by-site) action with qubit `i`
/// on bit `N-1-i`, so a basis index reads left-to-right as the ket string.
/// The Dicke representation uses the ladder construction: `J_z` is diagonal
/// with entries `N/2 - m`, and `J_x`, `J_y` come from `J_+`, `J_-` with
/// `<m-1|J_+|m> = sqrt(m(N-m+1))`.
pub fn build_collective(axis: Axis, n_qubits: usize, repr_kind: ReprKind) -> Result<OperatorMatrix> {
    build_collective_with_cap(axis, n_qubits, repr_kind, DEFAULT_FULL_CAP)
}

/// Which representation to build; the qubit count is passed separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReprKind {
    Full,
    Dicke,
}

/// [`build_collective`] with an explicit full-space qubit cap.
pub fn build_collective_with_cap(
    axis: Axis,
    n_qubits: usize,
    repr_kind: ReprKind,
    cap: usize,
) -> Result<OperatorMatrix> {
    if n_qubits == 0 {
        return Err(Error::Domain("n_qubits must be >= 1".into()));
    }
    match repr_kind {
        ReprKind::Full => {
            check_cap(n_qubits, cap)?;
            let dim = 1usize << n_qubits;
            let p = axis.pauli();
            let mut m = DMatrix::<Complex64>::zeros(dim, dim);
            for col in 0..dim {
                for site in 0..n_qubits {
                    let mask = 1usize << (n_qubits - 1 - site);
                    let bit = usize::from(col & mask != 0);
                    for row_bit in 0..2usize {
                        let entry = p[row_bit][bit];
                        if entry.norm_sqr() == 0.0 {
                            continue;
                        }
                        let row = (col & !mask) | (row_bit << (n_qubits - 1 - site));
                        m[(row, col)] += entry * 0.5;
                    }
                }
            }
            OperatorMatrix::try_new(m, Repr::Full(n_qubits))
        }
        ReprKind::Dicke => {
            let n = n_qubits;
            let dim = n + 1;
            let [nx, ny, nz] = axis.unit();
            let mut m = DMatrix::<Complex64>::zeros(dim, dim);
            for mm in 0..dim {
                let jz = n as f64 / 2.0 - mm as f64;
                m[(mm, mm)] += Complex64::new(nz * jz, 0.0);
                // J_+ |m> = sqrt(m(N-m+1)) |m-1>
                if mm >= 1 {
                    let a = ((mm as f64) * (n as f64 - mm as f64 + 1.0)).sqrt();
                    // J_x picks a/2, J_y picks -i a/2 on the (m-1, m) entry.
                    m[(mm - 1, mm)] += Complex64::new(nx * a / 2.0, -ny * a / 2.0);
                }
                // J_- |m> = sqrt((N-m)(m+1)) |m+1>
                if mm + 1 < dim {
                    let b = ((n as f64 - mm as f64) * (mm as f64 + 1.0)).sqrt();
                    m[(mm + 1, mm)] += Complex64::new(nx * b / 2.0, ny * b / 2.0);
                }
            }
            OperatorMatrix::try_new(m, Repr::Dicke(n))
        }
    }
}

/// `op^k` by repeated multiplication; hermiticity is preserved.
pub fn operator_power(op: &OperatorMatrix, k: u32) -> Result<OperatorMatrix> {
    if k == 0 {
        return Err(Error::Domain("operator power requires k >= 1".into()));
    }
    let mut out = op.matrix.clone();
    for _ in 1..k {
        out = &out * &op.matrix;
    }
    OperatorMatrix::try_new(out, op.repr)
}

/// Apply a single-qubit operator to `site` of a full-space state vector.
pub fn apply_site_operator(
    vec: &DVector<Complex64>,
    n_qubits: usize,
    site: usize,
    op: &[[Complex64; 2]; 2],
) -> DVector<Complex64> {
    let dim = 1usize << n_qubits;
    assert_eq!(vec.len(), dim);
    let mask = 1usize << (n_qubits - 1 - site);
    let mut out = DVector::<Complex64>::zeros(dim);
    for col in 0..dim {
        let bit = usize::from(col & mask != 0);
        let base = col & !mask;
        out[base] += op[0][bit] * vec[col];
        out[base | mask] += op[1][bit] * vec[col];
    }
    out
}

/// Matrix-free `J_alpha |psi>` in the full representation.
pub fn apply_collective(axis: Axis, n_qubits: usize, vec: &DVector<Complex64>) -> DVector<Complex64> {
    let p = axis.pauli();
    let mut out = DVector::<Complex64>::zeros(vec.len());
    for site in 0..n_qubits {
        out += apply_site_operator(vec, n_qubits, site, &p).scale(0.5);
    }
    out
}

/// Compare `J_alpha^k` built by matrix power against the expansion of the
/// power into sums of Pauli strings on distinct sites; returns the max-abs
/// entry difference. Supported for `k <= 6`.
pub fn pauli_expansion_check(axis: Axis, n_qubits: usize, k: u32) -> Result<f64> {
    if !(1..=6).contains(&k) {
        return Err(Error::Unsupported(format!(
            "distinct-site expansion is only available for k in 1..=6, got {k}"
        )));
    }
    let j = build_collective(axis, n_qubits, ReprKind::Full)?;
    let by_power = operator_power(&j, k)?;

    let dim = 1usize << n_qubits;
    let p = axis.pauli();
    // Single-site sigma matrices as dense full-space operators.
    let site_ops: Vec<DMatrix<Complex64>> = (0..n_qubits)
        .map(|site| {
            let mut m = DMatrix::<Complex64>::zeros(dim, dim);
            for col in 0..dim {
                let mask = 1usize << (n_qubits - 1 - site);
                let bit = usize::from(col & mask != 0);
                let base = col & !mask;
                m[(base, col)] += p[0][bit];
                m[(base | mask, col)] += p[1][bit];
            }
            m
        })
        .collect();

    // Elementary symmetric operator polynomials E_r = sum_{|S|=r} prod_{i in S} sigma^(i).
    let kk = k as usize;
    let mut elem: Vec<DMatrix<Complex64>> = vec![DMatrix::zeros(dim, dim); kk + 1];
    elem[0] = DMatrix::identity(dim, dim);
    for s in &site_ops {
        for r in (1..=kk).rev() {
            let add = &elem[r - 1] * s;
            elem[r] = &elem[r] + add;
        }
    }
    // Ordered distinct-site sums D_r = r! E_r.
    let dsum = |r: usize| -> DMatrix<Complex64> {
        let fact: f64 = (1..=r).map(|x| x as f64).product();
        elem[r].scale(fact)
    };

    let nf = n_qubits as f64;
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let expansion = match k {
        1 => dsum(1).scale(0.5),
        2 => (id.scale(nf) + dsum(2)).scale(0.25),
        3 => (dsum(1).scale(3.0 * nf - 2.0) + dsum(3)).scale(1.0 / 8.0),
        4 => (id.scale((3.0 * nf - 2.0) * nf) + dsum(2).scale(2.0 * (3.0 * nf - 4.0)) + dsum(4))
            .scale(1.0 / 16.0),
        5 => (dsum(1).scale(15.0 * nf * (nf - 2.0) + 16.0)
            + dsum(3).scale(10.0 * (nf - 2.0))
            + dsum(5))
        .scale(1.0 / 32.0),
        6 => (id.scale(nf * (15.0 * nf * (nf - 2.0) + 16.0))
            + dsum(2).scale(15.0 * nf * (3.0 * nf - 10.0) + 136.0)
            + dsum(4).scale(5.0 * (3.0 * nf - 8.0))
            + dsum(6))
        .scale(1.0 / 64.0),
        _ => unreachable!(),
    };

    Ok(linalg::max_abs_diff(by_power.matrix(), &expansion))
}
