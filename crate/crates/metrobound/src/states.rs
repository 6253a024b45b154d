//! Every state family entering the bounds: product states, GHZ, Dicke,
//! the singlet family, the optimal superposition state, noisy mixtures, and
//! Haar-random pure symmetric states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::axis::Axis;
use crate::collective::{OperatorMatrix, Repr, DEFAULT_FULL_CAP};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sep_bounds::ProductBloch;

/// Pure vector or density matrix in a declared representation.
#[derive(Debug, Clone)]
pub enum StateData {
    PureVector(DVector<Complex64>),
    DensityMatrix(DMatrix<Complex64>),
}

/// A normalized quantum state tagged with its representation.
#[derive(Debug, Clone)]
pub struct QuantumState {
    data: StateData,
    repr: Repr,
}

impl QuantumState {
    /// Wrap a pure state vector, checking normalization within 1e-12.
    pub fn try_pure(vec: DVector<Complex64>, repr: Repr) -> Result<Self> {
        if vec.len() != repr.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs repr dim {}",
                vec.len(),
                repr.dim()
            )));
        }
        let norm = linalg::vec_norm(&vec);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMatrix(format!(
                "pure state norm {norm} is not 1 within 1e-12"
            )));
        }
        Ok(Self { data: StateData::PureVector(vec), repr })
    }

    /// Wrap a density matrix, checking hermiticity, unit trace, and
    /// positivity (min eigenvalue >= -1e-10).
    pub fn try_density(mat: DMatrix<Complex64>, repr: Repr) -> Result<Self> {
        if mat.nrows() != repr.dim() || mat.ncols() != repr.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} vs repr dim {}",
                mat.nrows(),
                mat.ncols(),
                repr.dim()
            )));
        }
        let herm = linalg::hermiticity_residual(&mat);
        if herm > 1e-10 {
            return Err(Error::InvalidMatrix(format!(
                "density hermiticity residual {herm:.3e} exceeds 1e-10"
            )));
        }
        let trace: Complex64 = mat.diagonal().iter().sum();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidMatrix(format!("density trace {trace} is not 1")));
        }
        let min_eig = linalg::hermitian_eigenvalues(&mat)
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -1e-10 {
            return Err(Error::InvalidMatrix(format!(
                "density min eigenvalue {min_eig:.3e} below -1e-10"
            )));
        }
        Ok(Self { data: StateData::DensityMatrix(mat), repr })
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

    pub fn is_pure(&self) -> bool {
        matches!(self.data, StateData::PureVector(_))
    }

    pub fn pure_vector(&self) -> Option<&DVector<Complex64>> {
        match &self.data {
            StateData::PureVector(v) => Some(v),
            StateData::DensityMatrix(_) => None,
        }
    }

    pub fn density_matrix(&self) -> Option<&DMatrix<Complex64>> {
        match &self.data {
            StateData::DensityMatrix(m) => Some(m),
            StateData::PureVector(_) => None,
        }
    }

    /// Density-matrix form of the state (projector for pure inputs).
    pub fn to_density(&self) -> DMatrix<Complex64> {
        match &self.data {
            StateData::DensityMatrix(m) => m.clone(),
            StateData::PureVector(v) => v * v.adjoint(),
        }
    }

    /// `<H>` for a Hermitian operator in the same representation.
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<f64> {
        self.check_repr(op)?;
        Ok(match &self.data {
            StateData::PureVector(v) => {
                let hv = op.matrix() * v;
                v.dotc(&hv).re
            }
            StateData::DensityMatrix(rho) => {
                let mut tr = Complex64::default();
                for i in 0..rho.nrows() {
                    tr += (rho.row(i) * op.matrix().column(i))[(0, 0)];
                }
                tr.re
            }
        })
    }

    /// `Var(H) = <H^2> - <H>^2`.
    pub fn variance(&self, op: &OperatorMatrix) -> Result<f64> {
        self.check_repr(op)?;
        Ok(match &self.data {
            StateData::PureVector(v) => {
                let hv = op.matrix() * v;
                let mean = v.dotc(&hv).re;
                let sq = hv.dotc(&hv).re;
                sq - mean * mean
            }
            StateData::DensityMatrix(rho) => {
                let rho_h = rho * op.matrix();
                let mut tr1 = Complex64::default();
                let mut tr2 = Complex64::default();
                for i in 0..rho.nrows() {
                    tr1 += rho_h[(i, i)];
                    tr2 += (rho_h.row(i) * op.matrix().column(i))[(0, 0)];
                }
                tr2.re - tr1.re * tr1.re
            }
        })
    }

    /// `Var(J^k)` for a pure state, applying the base operator `k` times.
    pub fn variance_under_power(&self, base: &OperatorMatrix, k: u32) -> Result<f64> {
        self.check_repr(base)?;
        match &self.data {
            StateData::PureVector(v) => {
                let mut hv = v.clone();
                for _ in 0..k {
                    hv = base.matrix() * hv;
                }
                let mean = v.dotc(&hv).re;
                Ok(hv.dotc(&hv).re - mean * mean)
            }
            StateData::DensityMatrix(_) => {
                let power = crate::collective::operator_power(base, k)?;
                self.variance(&power)
            }
        }
    }

    fn check_repr(&self, op: &OperatorMatrix) -> Result<()> {
        if op.repr() != self.repr {
            return Err(Error::DimensionMismatch(format!(
                "state repr {:?} vs operator repr {:?}",
                self.repr,
                op.repr()
            )));
        }
        Ok(())
    }
}

/// Parameters `(lambda1, lambda2, lambda3)` of the optimal superposition state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalStateParams {
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
}

impl OptimalStateParams {
    pub fn new(lambda1: f64, lambda2: f64, lambda3: f64) -> Result<Self> {
        if lambda1 < 0.0 || lambda2 < 0.0 || lambda3 < 0.0 {
            return Err(Error::Domain("lambda weights must be non-negative".into()));
        }
        let sum = lambda1 + lambda2 + lambda3;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "lambda weights must sum to 1 within 1e-12, got {sum}"
            )));
        }
        Ok(Self { lambda1, lambda2, lambda3 })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn lambda3(&self) -> f64 {
        self.lambda3
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > DEFAULT_FULL_CAP {
        return Err(Error::Capacity { n, cap: DEFAULT_FULL_CAP });
    }
    Ok(())
}

/// Kronecker product of per-qubit 2-vectors into a full-space vector.
fn kron_qubits(factors: &[[Complex64; 2]]) -> DVector<Complex64> {
    let n = factors.len();
    let dim = 1usize << n;
    let mut out = DVector::<Complex64>::zeros(dim);
    for idx in 0..dim {
        let mut amp = Complex64::new(1.0, 0.0);
        for (site, f) in factors.iter().enumerate() {
            let bit = (idx >> (n - 1 - site)) & 1;
            amp *= f[bit];
        }
        out[idx] = amp;
    }
    out
}

/// Fully separable pure state with per-qubit Bloch components `alpha_i` along
/// `axis`: each factor is `cos(t_i)|a_+> + sin(t_i)|a_->` with
/// `cos(2 t_i) = alpha_i` and real non-negative amplitudes.
pub fn product_state(bloch: &ProductBloch, axis: Axis) -> Result<QuantumState> {
    let n = bloch.len();
    if n == 0 {
        return Err(Error::Domain("product state needs at least one qubit".into()));
    }
    check_cap(n)?;
    let (plus, minus) = axis.eigenstates();
    let factors: Vec<[Complex64; 2]> = bloch
        .alphas()
        .iter()
        .map(|&a| {
            let c = ((1.0 + a) / 2.0).sqrt();
            let s = ((1.0 - a) / 2.0).sqrt();
            [plus[0] * c + minus[0] * s, plus[1] * c + minus[1] * s]
        })
        .collect();
    QuantumState::try_pure(kron_qubits(&factors), Repr::Full(n))
}

/// `(|0...0> + |1...1>)/sqrt(2)`.
pub fn ghz_state(n: usize) -> Result<QuantumState> {
    if n == 0 {
        return Err(Error::Domain("ghz_state needs n >= 1".into()));
    }
    check_cap(n)?;
    let dim = 1usize << n;
    let mut v = DVector::<Complex64>::zeros(dim);
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = amp;
    v[dim - 1] = amp;
    QuantumState::try_pure(v, Repr::Full(n))
}

/// Dicke state with `m` excitations, in the requested representation.
pub fn dicke_state(n: usize, m: usize, repr_kind: crate::collective::ReprKind) -> Result<QuantumState> {
    if m > n {
        return Err(Error::Domain(format!("excitations m={m} out of range for n={n}")));
    }
    match repr_kind {
        crate::collective::ReprKind::Dicke => {
            let mut v = DVector::<Complex64>::zeros(n + 1);
            v[m] = Complex64::new(1.0, 0.0);
            QuantumState::try_pure(v, Repr::Dicke(n))
        }
        crate::collective::ReprKind::Full => {
            check_cap(n)?;
            let dim = 1usize << n;
            let binom: f64 = (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
            let amp = Complex64::new(1.0 / binom.sqrt(), 0.0);
            let mut v = DVector::<Complex64>::zeros(dim);
            for idx in 0..dim {
                if (idx as u64).count_ones() as usize == m {
                    v[idx] = amp;
                }
            }
            QuantumState::try_pure(v, Repr::Full(n))
        }
    }
}

/// Canonical singlet-family member for even `N`, built from the
/// permutation-sum formula: the amplitude on a basis string with `N/2` ones
/// is `z! (N/2 - z)! (-1)^{N/2 - z}` for `z` zeros among the first `N/2`
/// qubits, normalized by `(N/2)! sqrt(N/2 + 1)`.
pub fn singlet_state(n: usize) -> Result<QuantumState> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::Domain(format!("singlet state requires even n >= 2, got {n}")));
    }
    check_cap(n)?;
    let half = n / 2;
    let dim = 1usize << n;
    let fact = |x: usize| -> f64 { (1..=x).map(|v| v as f64).product() };
    let norm = fact(half) * ((half + 1) as f64).sqrt();
    let mut v = DVector::<Complex64>::zeros(dim);
    for idx in 0..dim {
        if (idx as u64).count_ones() as usize != half {
            continue;
        }
        // Zeros among the first N/2 qubits, i.e. the high half of the index bits.
        let mut z = 0usize;
        for site in 0..half {
            if idx & (1usize << (n - 1 - site)) == 0 {
                z += 1;
            }
        }
        let sign = if (half - z) % 2 == 0 { 1.0 } else { -1.0 };
        v[idx] = Complex64::new(sign * fact(z) * fact(half - z) / norm, 0.0);
    }
    QuantumState::try_pure(v, Repr::Full(n))
}

/// Optimal superposition `sqrt(l1)|a_+^N> + sqrt(l2)|a_-^N> + sqrt(l3)|S_N>`.
///
/// The singlet component exists only for even `N`; odd `N` is accepted when
/// `lambda3 = 0`.
pub fn optimal_state(params: &OptimalStateParams, axis: Axis, n: usize) -> Result<QuantumState> {
    if n == 0 {
        return Err(Error::Domain("optimal_state needs n >= 1".into()));
    }
    if n % 2 != 0 && params.lambda3() > 0.0 {
        return Err(Error::Domain(
            "singlet component requires even n; set lambda3 = 0 for odd n".into(),
        ));
    }
    check_cap(n)?;
    let dim = 1usize << n;
    let (plus, minus) = axis.eigenstates();
    let plus_n = kron_qubits(&vec![plus; n]);
    let minus_n = kron_qubits(&vec![minus; n]);
    let mut v = DVector::<Complex64>::zeros(dim);
    v += plus_n.scale(params.lambda1().sqrt());
    v += minus_n.scale(params.lambda2().sqrt());
    if params.lambda3() > 0.0 {
        let s = singlet_state(n)?;
        v += s.pure_vector().unwrap().scale(params.lambda3().sqrt());
    }
    QuantumState::try_pure(v, Repr::Full(n))
}

/// Noisy mixture `eta |phi><phi| + (1 - eta) I / 2^N`.
pub fn noisy_state(phi: &QuantumState, eta: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("eta must lie in [0, 1], got {eta}")));
    }
    let vec = phi
        .pure_vector()
        .ok_or_else(|| Error::Domain("noisy_state requires a pure input state".into()))?;
    let n = match phi.repr() {
        Repr::Full(n) => n,
        Repr::Dicke(_) => {
            return Err(Error::Domain("noisy_state requires the full representation".into()))
        }
    };
    let dim = 1usize << n;
    let mut rho = (vec * vec.adjoint()).scale(eta);
    let background = (1.0 - eta) / dim as f64;
    for i in 0..dim {
        rho[(i, i)] += Complex64::new(background, 0.0);
    }
    QuantumState::try_density(rho, Repr::Full(n))
}

/// Haar-random pure state of the symmetric subspace in the Dicke
/// representation: i.i.d. standard complex Gaussian amplitudes, normalized.
/// Deterministic given the seed.
pub fn random_symmetric_state(n: usize, seed: u64) -> QuantumState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symmetric_state_from(n, &mut rng)
}

/// Same sampler driven by a caller-owned RNG stream.
pub fn random_symmetric_state_from<R: Rng>(n: usize, rng: &mut R) -> QuantumState {
    let mut v = DVector::<Complex64>::zeros(n + 1);
    for i in 0..=n {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        v[i] = Complex64::new(re, im);
    }
    let norm = linalg::vec_norm(&v);
    QuantumState::try_pure(v.scale(1.0 / norm), Repr::Dicke(n))
        .expect("normalized Gaussian vector is a valid state")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collective::{build_collective, ReprKind};
    use approx::assert_abs_diff_eq;

    #[test]
    fn product_state_all_up_is_computational_zero() {
        let bloch = ProductBloch::new(vec![1.0; 3]).unwrap();
        let psi = product_state(&bloch, Axis::Z).unwrap();
        let v = psi.pure_vector().unwrap();
        assert_abs_diff_eq!(v[0].re, 1.0, epsilon = 1e-14);
        for i in 1..8 {
            assert_abs_diff_eq!(v[i].norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn product_state_zero_bloch_has_zero_jz() {
        let bloch = ProductBloch::new(vec![0.0, 0.0]).unwrap();
        let psi = product_state(&bloch, Axis::Z).unwrap();
        let jz = build_collective(Axis::Z, 2, ReprKind::Full).unwrap();
        assert_abs_diff_eq!(psi.expectation(&jz).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn product_state_rejects_out_of_range_bloch() {
        assert!(ProductBloch::new(vec![1.2]).is_err());
    }

    #[test]
    fn ghz_n2_is_bell_pair() {
        let psi = ghz_state(2).unwrap();
        let v = psi.pure_vector().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(v[0].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(v[3].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1].norm() + v[2].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ghz_variances_under_jz_powers() {
        let psi = ghz_state(4).unwrap();
        let jz = build_collective(Axis::Z, 4, ReprKind::Full).unwrap();
        assert_abs_diff_eq!(4.0 * psi.variance_under_power(&jz, 1).unwrap(), 16.0, epsilon = 1e-10);
        assert_abs_diff_eq!(4.0 * psi.variance_under_power(&jz, 2).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn dicke_states_are_jz_eigenstates_and_orthogonal() {
        let d1 = dicke_state(4, 1, ReprKind::Full).unwrap();
        let jz = build_collective(Axis::Z, 4, ReprKind::Full).unwrap();
        assert_abs_diff_eq!(d1.expectation(&jz).unwrap(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(d1.variance(&jz).unwrap(), 0.0, epsilon = 1e-13);

        let d2 = dicke_state(4, 2, ReprKind::Full).unwrap();
        let overlap = d2.pure_vector().unwrap().dotc(d1.pure_vector().unwrap());
        assert_abs_diff_eq!(overlap.norm(), 0.0, epsilon = 1e-14);

        let d12 = dicke_state(2, 1, ReprKind::Full).unwrap();
        let v = d12.pure_vector().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(v[1].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(v[2].re, r, epsilon = 1e-15);

        assert!(dicke_state(4, 5, ReprKind::Full).is_err());
    }

    #[test]
    fn singlet_n2_and_annihilation() {
        let s2 = singlet_state(2).unwrap();
        let v = s2.pure_vector().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(v[1].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(v[2].re, -r, epsilon = 1e-15);

        for n in [2usize, 4, 6] {
            let s = singlet_state(n).unwrap();
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                let j = build_collective(axis, n, ReprKind::Full).unwrap();
                let jv = j.matrix() * s.pure_vector().unwrap();
                assert!(linalg::vec_norm(&jv) <= 1e-12, "n={n} axis={axis:?}");
            }
        }
        assert!(singlet_state(3).is_err());
    }

    #[test]
    fn noisy_state_eigenvalues_at_half() {
        let phi = ghz_state(4).unwrap();
        let rho = noisy_state(&phi, 0.5).unwrap();
        let ev = linalg::hermitian_eigenvalues(rho.density_matrix().unwrap());
        // one eigenvalue 0.5 + 0.5/16, fifteen at 0.5/16
        assert_abs_diff_eq!(ev[15], 0.5 + 0.5 / 16.0, epsilon = 1e-12);
        for e in ev.iter().take(15) {
            assert_abs_diff_eq!(*e, 0.5 / 16.0, epsilon = 1e-12);
        }
        assert!(noisy_state(&phi, 1.5).is_err());
    }

    #[test]
    fn random_symmetric_state_is_reproducible() {
        let a = random_symmetric_state(100, 42);
        let b = random_symmetric_state(100, 42);
        assert_eq!(a.dim(), 101);
        assert_eq!(
            a.pure_vector().unwrap().as_slice(),
            b.pure_vector().unwrap().as_slice()
        );
        let c = random_symmetric_state(100, 43);
        assert_ne!(
            a.pure_vector().unwrap().as_slice(),
            c.pure_vector().unwrap().as_slice()
        );
    }

    #[test]
    fn optimal_state_reduces_to_ghz() {
        let params = OptimalStateParams::new(0.5, 0.5, 0.0).unwrap();
        let phi = optimal_state(&params, Axis::Z, 4).unwrap();
        let ghz = ghz_state(4).unwrap();
        let overlap = phi.pure_vector().unwrap().dotc(ghz.pure_vector().unwrap());
        assert_abs_diff_eq!(overlap.norm(), 1.0, epsilon = 1e-12);

        let with_singlet = OptimalStateParams::new(0.25, 0.25, 0.5).unwrap();
        assert!(optimal_state(&with_singlet, Axis::Z, 5).is_err());
    }
}
