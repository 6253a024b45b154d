//! Quantum Fisher information: the general eigendecomposition route, the
//! pure-state variance shortcut, and the closed forms for the optimal state
//! and its white-noise mixture.

use crate::collective::OperatorMatrix;
use crate::error::{Error, Result};
use crate::linalg;
use crate::states::{OptimalStateParams, QuantumState};

/// Which route produced a QFI value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfiMethod {
    Eigen,
    PureVariance,
    ClosedFormPhi,
    ClosedFormNoisy,
}

/// A QFI value with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct QfiResult {
    pub value: f64,
    pub method: QfiMethod,
}

fn finish(value: f64, method: QfiMethod) -> Result<QfiResult> {
    if value < -1e-9 {
        return Err(Error::Computation(format!("QFI evaluated to {value} < -1e-9")));
    }
    Ok(QfiResult { value: value.max(0.0), method })
}

/// General QFI `2 sum_{kl} (l_k - l_l)^2/(l_k + l_l) |<k|H|l>|^2` over the
/// eigenbasis of the state, keeping pairs with `l_k + l_l` above
/// `1e-12 * dim`. Negative eigenvalues from roundoff are clamped to zero.
pub fn qfi_general(rho: &QuantumState, h: &OperatorMatrix) -> Result<QfiResult> {
    if rho.repr() != h.repr() {
        return Err(Error::DimensionMismatch(format!(
            "state repr {:?} vs operator repr {:?}",
            rho.repr(),
            h.repr()
        )));
    }
    let dim = rho.dim();
    let dense = rho.to_density();
    let eig = linalg::hermitian_eigen(&dense);
    let lambda: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    // H in the eigenbasis of rho.
    let h_eig = eig.eigenvectors.adjoint() * h.matrix() * &eig.eigenvectors;
    let cut = 1e-12 * dim as f64;
    let mut total = 0.0_f64;
    for k in 0..dim {
        for l in 0..dim {
            if k == l {
                continue;
            }
            let s = lambda[k] + lambda[l];
            if s <= cut {
                continue;
            }
            let d = lambda[k] - lambda[l];
            total += d * d / s * h_eig[(k, l)].norm_sqr();
        }
    }
    finish(2.0 * total, QfiMethod::Eigen)
}

/// Pure-state QFI `4 Var(H)`.
pub fn qfi_pure(psi: &QuantumState, h: &OperatorMatrix) -> Result<QfiResult> {
    if !psi.is_pure() {
        return Err(Error::Domain("qfi_pure requires a pure state".into()));
    }
    finish(4.0 * psi.variance(h)?, QfiMethod::PureVariance)
}

/// Closed-form QFI of the optimal superposition state under `J_alpha^k`:
/// `(N^{2k}/4^{k-1}) {l1 + l2 - [l1 + (-1)^k l2]^2}`.
pub fn qfi_phi_closed(params: &OptimalStateParams, n: usize, k: u32) -> Result<QfiResult> {
    let nf = n as f64;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let l1 = params.lambda1();
    let l2 = params.lambda2();
    let scale = nf.powi(2 * k as i32) / 4.0_f64.powi(k as i32 - 1);
    finish(scale * (l1 + l2 - (l1 + sign * l2).powi(2)), QfiMethod::ClosedFormPhi)
}

/// Closed-form QFI of the white-noise mixture
/// `eta |Phi><Phi| + (1 - eta) I/2^N` under `J_alpha^k`: the pure value is
/// scaled by `eta^2 2^{N-1} / (1 + eta(2^{N-1} - 1))`.
pub fn qfi_noisy_closed(
    params: &OptimalStateParams,
    eta: f64,
    n: usize,
    k: u32,
) -> Result<QfiResult> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("eta must lie in [0, 1], got {eta}")));
    }
    let pure = qfi_phi_closed(params, n, k)?;
    // eta^2 2^{N-1} / (1 + eta (2^{N-1} - 1)) = eta^2 / (2^{1-N}(1 - eta) + eta),
    // which stays finite for any N.
    let tiny = (2.0_f64).powi(1 - n as i32);
    let factor = eta * eta / (tiny * (1.0 - eta) + eta);
    finish(factor * pure.value, QfiMethod::ClosedFormNoisy)
}

/// Shared helper: QFI upper bound `(h_max - h_min)^2` from the spectrum.
pub fn qfi_upper_bound(h: &OperatorMatrix) -> f64 {
    h.spectral_spread_sq()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis::Axis;
    use crate::collective::{build_collective, operator_power, ReprKind};
    use crate::states;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::DVector;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_pure(n: usize, rng: &mut ChaCha8Rng) -> QuantumState {
        let dim = 1usize << n;
        let mut v = DVector::<Complex64>::zeros(dim);
        for i in 0..dim {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            v[i] = Complex64::new(re, im);
        }
        let norm = linalg::vec_norm(&v);
        QuantumState::try_pure(v.scale(1.0 / norm), crate::collective::Repr::Full(n)).unwrap()
    }

    #[test]
    fn ghz_qfi_under_jz() {
        let psi = states::ghz_state(4).unwrap();
        let jz = build_collective(Axis::Z, 4, ReprKind::Full).unwrap();
        assert_abs_diff_eq!(qfi_pure(&psi, &jz).unwrap().value, 16.0, epsilon = 1e-10);
        let zero = crate::sep_bounds::ProductBloch::new(vec![1.0; 4]).unwrap();
        let up = states::product_state(&zero, Axis::Z).unwrap();
        assert_abs_diff_eq!(qfi_pure(&up, &jz).unwrap().value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn general_matches_pure_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.random_range(2..=4usize);
            let psi = random_pure(n, &mut rng);
            let j = build_collective(Axis::X, n, ReprKind::Full).unwrap();
            let h = operator_power(&j, 2).unwrap();
            let a = qfi_general(&psi, &h).unwrap().value;
            let b = qfi_pure(&psi, &h).unwrap().value;
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }

    #[test]
    fn maximally_mixed_has_zero_qfi() {
        let n = 3usize;
        let dim = 1usize << n;
        let mut rho = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            rho[(i, i)] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        let state =
            QuantumState::try_density(rho, crate::collective::Repr::Full(n)).unwrap();
        let jz = build_collective(Axis::Z, n, ReprKind::Full).unwrap();
        assert_abs_diff_eq!(qfi_general(&state, &jz).unwrap().value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn phi_closed_form_anchors() {
        let ghz = OptimalStateParams::new(0.5, 0.5, 0.0).unwrap();
        assert_abs_diff_eq!(qfi_phi_closed(&ghz, 4, 1).unwrap().value, 16.0, epsilon = 1e-12);
        let mixed = OptimalStateParams::new(0.25, 0.25, 0.5).unwrap();
        assert_abs_diff_eq!(qfi_phi_closed(&mixed, 4, 2).unwrap().value, 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(qfi_phi_closed(&mixed, 4, 1).unwrap().value, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn noisy_closed_form_limits_and_oracle() {
        let params = OptimalStateParams::new(0.25, 0.25, 0.5).unwrap();
        let pure = qfi_phi_closed(&params, 6, 2).unwrap().value;
        assert_abs_diff_eq!(
            qfi_noisy_closed(&params, 1.0, 6, 2).unwrap().value,
            pure,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            qfi_noisy_closed(&params, 0.0, 6, 2).unwrap().value,
            0.0,
            epsilon = 1e-15
        );

        // eigendecomposition oracle on the explicitly built state
        let eta = 0.9;
        let phi = states::optimal_state(&params, Axis::Z, 6).unwrap();
        let rho = states::noisy_state(&phi, eta).unwrap();
        let jz = build_collective(Axis::Z, 6, ReprKind::Full).unwrap();
        let h = operator_power(&jz, 2).unwrap();
        let direct = qfi_general(&rho, &h).unwrap().value;
        let closed = qfi_noisy_closed(&params, eta, 6, 2).unwrap().value;
        assert_abs_diff_eq!(direct, closed, epsilon = 1e-8);
    }

    #[test]
    fn qfi_is_convex_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 3usize;
        let j = build_collective(Axis::Y, n, ReprKind::Full).unwrap();
        let h = operator_power(&j, 2).unwrap();
        let bound = qfi_upper_bound(&h);
        for _ in 0..25 {
            let psi1 = random_pure(n, &mut rng);
            let psi2 = random_pure(n, &mut rng);
            let p: f64 = rng.random_range(0.0..1.0);
            let mix = psi1.to_density().scale(p) + psi2.to_density().scale(1.0 - p);
            let rho =
                QuantumState::try_density(mix, crate::collective::Repr::Full(n)).unwrap();
            let fq = qfi_general(&rho, &h).unwrap().value;
            let f1 = qfi_pure(&psi1, &h).unwrap().value;
            let f2 = qfi_pure(&psi2, &h).unwrap().value;
            assert!(fq <= p * f1 + (1.0 - p) * f2 + 1e-8);
            assert!(fq <= bound + 1e-8);
        }
    }

    #[test]
    fn unitary_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 3usize;
        let dim = 1usize << n;
        let j = build_collective(Axis::Z, n, ReprKind::Full).unwrap();
        let h = operator_power(&j, 3).unwrap();
        for _ in 0..5 {
            // Haar-ish unitary via Gram-Schmidt on a Ginibre matrix.
            let mut g = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
            for i in 0..dim {
                for jj in 0..dim {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    g[(i, jj)] = Complex64::new(re, im);
                }
            }
            let qr = g.qr();
            let u = qr.q();
            let psi = random_pure(n, &mut rng);
            let fq = qfi_pure(&psi, &h).unwrap().value;
            let rotated_state = QuantumState::try_pure(
                &u * psi.pure_vector().unwrap(),
                crate::collective::Repr::Full(n),
            )
            .unwrap();
            let rotated_h = crate::collective::OperatorMatrix::try_new(
                &u * h.matrix() * u.adjoint(),
                h.repr(),
            )
            .unwrap();
            let fq_rot = qfi_pure(&rotated_state, &rotated_h).unwrap().value;
            assert_relative_eq!(fq, fq_rot, max_relative = 1e-8, epsilon = 1e-8);
        }
    }
}
