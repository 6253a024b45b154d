//! Optimal spin-squeezing inequalities: collective-moment matrices, the
//! three separability conditions, and detection-region sweeps for the noisy
//! optimal state.

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axis::Axis;
use crate::collective::{build_collective, OperatorMatrix, Repr, ReprKind};
use crate::error::{Error, Result};
use crate::qfi;
use crate::sep_bounds;
use crate::states::{OptimalStateParams, QuantumState};

/// The collective second-moment matrices `C`, `Gamma`, and
/// `X = (N-1) Gamma + C` over the axes `x, y, z`.
#[derive(Debug, Clone)]
pub struct CorrelationMatrices {
    pub c: Matrix3<f64>,
    pub gamma: Matrix3<f64>,
    pub x: Matrix3<f64>,
}

/// Evaluation of the three optimal spin-squeezing inequalities.
#[derive(Debug, Clone)]
pub struct SqueezingReport {
    pub matrices: CorrelationMatrices,
    pub trace_gamma: f64,
    pub chi_min: f64,
    pub chi_max: f64,
    /// Violation flags for the three inequalities; any violation certifies
    /// multipartite spin-squeezed entanglement.
    pub violated: [bool; 3],
}

impl SqueezingReport {
    pub fn any_violated(&self) -> bool {
        self.violated.iter().any(|&v| v)
    }
}

/// Collective moment matrices of an arbitrary full-representation state:
/// `C_kl = <J_k J_l + J_l J_k>/2`, `Gamma_kl = C_kl - <J_k><J_l>`.
pub fn correlation_matrices(rho: &QuantumState) -> Result<CorrelationMatrices> {
    let n = match rho.repr() {
        Repr::Full(n) => n,
        Repr::Dicke(_) => {
            return Err(Error::Unsupported(
                "correlation matrices are computed in the full representation".into(),
            ))
        }
    };
    if n < 2 {
        return Err(Error::Domain("correlation_matrices needs n >= 2".into()));
    }
    let ops: Vec<OperatorMatrix> = [Axis::X, Axis::Y, Axis::Z]
        .into_iter()
        .map(|a| build_collective(a, n, ReprKind::Full))
        .collect::<Result<_>>()?;

    let mut c = Matrix3::<f64>::zeros();
    let mut first = [0.0_f64; 3];
    match rho.pure_vector() {
        Some(v) => {
            let jv: Vec<_> = ops.iter().map(|op| op.matrix() * v).collect();
            for k in 0..3 {
                first[k] = v.dotc(&jv[k]).re;
                for l in k..3 {
                    let val = jv[k].dotc(&jv[l]).re;
                    c[(k, l)] = val;
                    c[(l, k)] = val;
                }
            }
        }
        None => {
            let rho_m = rho.density_matrix().unwrap();
            let rho_j: Vec<_> = ops.iter().map(|op| rho_m * op.matrix()).collect();
            for k in 0..3 {
                first[k] = rho_j[k].diagonal().iter().map(|z| z.re).sum();
                for l in k..3 {
                    // tr(rho J_k J_l) = sum_ij (rho J_k)_ij (J_l)_ji
                    let mut tr = num_complex::Complex64::default();
                    for i in 0..rho_j[k].nrows() {
                        tr += (rho_j[k].row(i) * ops[l].matrix().column(i))[(0, 0)];
                    }
                    c[(k, l)] = tr.re;
                    c[(l, k)] = tr.re;
                }
            }
        }
    }
    let mut gamma = c;
    for k in 0..3 {
        for l in 0..3 {
            gamma[(k, l)] -= first[k] * first[l];
        }
    }
    let x = gamma.scale(n as f64 - 1.0) + c;
    Ok(CorrelationMatrices { c, gamma, x })
}

/// Evaluate the three inequalities from precomputed matrices. Violation uses
/// strict inequalities with `1e-12` slack toward non-detection.
pub fn classify_from_matrices(n: usize, m: &CorrelationMatrices) -> SqueezingReport {
    let nf = n as f64;
    let trace_gamma = m.gamma.trace();
    let trace_c = m.c.trace();
    let mut chis: Vec<f64> = m
        .x
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    chis.sort_by(f64::total_cmp);
    let (chi_min, chi_max) = (chis[0], chis[2]);
    let slack = 1e-12;
    let violated = [
        trace_gamma < nf / 2.0 - slack,
        chi_min < trace_c - nf / 2.0 - slack,
        chi_max > (nf - 1.0) * trace_gamma - nf * (nf - 2.0) / 4.0 + slack,
    ];
    SqueezingReport { matrices: m.clone(), trace_gamma, chi_min, chi_max, violated }
}

/// Full classification of an arbitrary state.
pub fn squeezing_classify(rho: &QuantumState) -> Result<SqueezingReport> {
    let m = correlation_matrices(rho)?;
    Ok(classify_from_matrices(rho.n_qubits(), &m))
}

/// Closed-form matrices for `rho_eta` built from the optimal state along `z`:
/// both `C` and `Gamma` are diagonal with equal `x` and `y` entries
/// `f = (N/4)[eta (l1 + l2) + 1 - eta]`. Valid for `N >= 3` (two-spin flips
/// connect the poles at `N = 2`).
pub fn noisy_phi_matrices(n: usize, eta: f64, lambda1: f64, lambda2: f64) -> Result<CorrelationMatrices> {
    if n < 3 {
        return Err(Error::Domain("closed-form matrices need n >= 3".into()));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("eta must lie in [0, 1], got {eta}")));
    }
    let nf = n as f64;
    let lsum = lambda1 + lambda2;
    let ldiff = lambda1 - lambda2;
    let f = nf / 4.0 * (eta * lsum + (1.0 - eta));
    let czz = nf * nf / 4.0 * eta * lsum + nf / 4.0 * (1.0 - eta);
    let gzz = nf * nf / 4.0 * (eta * lsum - eta * eta * ldiff * ldiff) + nf / 4.0 * (1.0 - eta);
    let c = Matrix3::from_diagonal(&nalgebra::Vector3::new(f, f, czz));
    let gamma = Matrix3::from_diagonal(&nalgebra::Vector3::new(f, f, gzz));
    let x = gamma.scale(nf - 1.0) + c;
    Ok(CorrelationMatrices { c, gamma, x })
}

/// Noise threshold above which `rho_{eta,lambda}` (with `l1 + l2 = 1/2`)
/// violates the third inequality: `eta > 2(N-1)/(3N-4)`.
pub fn ss3_threshold(n: usize) -> f64 {
    2.0 * (n as f64 - 1.0) / (3.0 * n as f64 - 4.0)
}

/// One sampled or gridded `(lambda1, lambda2, eta)` point with its detection
/// verdicts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub eta: f64,
    /// `F_Q(rho_eta, J^k)` for `k = 1, 2, 3`.
    pub fq: [f64; 3],
    /// `C_sep(J^k)` for `k = 1, 2, 3`.
    pub csep: [f64; 3],
    /// Metrological detection flags per `k`.
    pub detected: [bool; 3],
    /// Per-inequality spin-squeezing violations.
    pub ss_violated: [bool; 3],
    pub ss_any: bool,
}

fn detection_point(n: usize, lambda1: f64, lambda2: f64, eta: f64, csep: &[f64; 3]) -> Result<DetectionRecord> {
    let lambda3 = (1.0 - lambda1 - lambda2).max(0.0);
    let params = OptimalStateParams::new(lambda1, lambda2, lambda3)?;
    let mut fq = [0.0; 3];
    let mut detected = [false; 3];
    for (i, k) in (1..=3u32).enumerate() {
        fq[i] = qfi::qfi_noisy_closed(&params, eta, n, k)?.value;
        detected[i] = fq[i] > csep[i] + 1e-12;
    }
    let report = classify_from_matrices(n, &noisy_phi_matrices(n, eta, lambda1, lambda2)?);
    Ok(DetectionRecord {
        lambda1,
        lambda2,
        lambda3,
        eta,
        fq,
        csep: *csep,
        detected,
        ss_violated: report.violated,
        ss_any: report.any_violated(),
    })
}

fn csep_triple(n: usize) -> Result<[f64; 3]> {
    Ok([
        n as f64,
        sep_bounds::csep_analytic(n, 2)?.value,
        sep_bounds::csep_analytic(n, 3)?.value,
    ])
}

/// Random-sample sweep over `(lambda1, lambda2, eta)` with
/// `0 <= lambda1 + lambda2 <= 1` uniform on the triangle and `eta` uniform
/// on `[0, 1]`. `n` must be even (the singlet component).
pub fn detection_region_sample(n: usize, n_samples: usize, seed: u64) -> Result<Vec<DetectionRecord>> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::Domain("detection sweep needs even n >= 4".into()));
    }
    let csep = csep_triple(n)?;
    let chunk = 4096usize;
    let n_chunks = n_samples.div_ceil(chunk);
    let records: Vec<Vec<DetectionRecord>> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ci as u64);
            let count = chunk.min(n_samples - ci * chunk);
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                let mut u: f64 = rng.random();
                let mut v: f64 = rng.random();
                if u + v > 1.0 {
                    u = 1.0 - u;
                    v = 1.0 - v;
                }
                let eta: f64 = rng.random();
                out.push(detection_point(n, u, v, eta, &csep).expect("valid sampled point"));
            }
            out
        })
        .collect();
    Ok(records.into_iter().flatten().collect())
}

/// Which `lambda` family a grid sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaFamily {
    /// `lambda1 = lambda`, `lambda2 = 0` (and `lambda3 = 1 - lambda`).
    SingleWeight,
    /// `lambda1 = lambda2 = lambda/2` (and `lambda3 = 1 - lambda`).
    SplitWeight,
}

/// Grid sweep over `(lambda, eta)` for one family.
pub fn detection_region_grid(
    n: usize,
    family: LambdaFamily,
    n_lambda: usize,
    n_eta: usize,
) -> Result<Vec<DetectionRecord>> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::Domain("detection sweep needs even n >= 4".into()));
    }
    if n_lambda < 2 || n_eta < 2 {
        return Err(Error::Domain("grid needs at least 2 points per side".into()));
    }
    let csep = csep_triple(n)?;
    let mut out = Vec::with_capacity(n_lambda * n_eta);
    for il in 0..n_lambda {
        let lambda = il as f64 / (n_lambda - 1) as f64;
        let (l1, l2) = match family {
            LambdaFamily::SingleWeight => (lambda, 0.0),
            LambdaFamily::SplitWeight => (lambda / 2.0, lambda / 2.0),
        };
        for ie in 0..n_eta {
            let eta = ie as f64 / (n_eta - 1) as f64;
            out.push(detection_point(n, l1, l2, eta, &csep)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sep_bounds::ProductBloch;
    use crate::states;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coherent_state_saturates_first_inequality() {
        let bloch = ProductBloch::new(vec![1.0; 4]).unwrap();
        let psi = states::product_state(&bloch, Axis::Z).unwrap();
        let report = squeezing_classify(&psi).unwrap();
        assert_abs_diff_eq!(report.trace_gamma, 2.0, epsilon = 1e-10);
        let g = report.matrices.gamma;
        assert_abs_diff_eq!(g[(0, 0)], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(g[(1, 1)], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(g[(2, 2)], 0.0, epsilon = 1e-10);
        assert!(!report.any_violated());
    }

    #[test]
    fn two_qubit_singlet_violates_first_inequality() {
        let s2 = states::singlet_state(2).unwrap();
        let report = squeezing_classify(&s2).unwrap();
        assert_abs_diff_eq!(report.trace_gamma, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.matrices.c.norm(), 0.0, epsilon = 1e-12);
        assert!(report.violated[0]);
    }

    #[test]
    fn ghz_is_not_detected() {
        for n in [4usize, 6] {
            let ghz = states::ghz_state(n).unwrap();
            let report = squeezing_classify(&ghz).unwrap();
            assert!(!report.any_violated(), "GHZ flagged at n={n}: {:?}", report.violated);
        }
    }

    #[test]
    fn optimal_state_family_violates_third_inequality() {
        for n in [4usize, 6] {
            for lambda in [0.0, 0.25, 0.5] {
                let params = OptimalStateParams::new(lambda, 0.5 - lambda, 0.5).unwrap();
                let phi = states::optimal_state(&params, Axis::Z, n).unwrap();
                let report = squeezing_classify(&phi).unwrap();
                assert!(report.violated[2], "no ss3 violation at n={n}, lambda={lambda}");
            }
        }
    }

    #[test]
    fn closed_form_matches_direct_computation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [4usize, 6] {
            for _ in 0..10 {
                let mut l1: f64 = rng.random();
                let mut l2: f64 = rng.random();
                if l1 + l2 > 1.0 {
                    l1 = 1.0 - l1;
                    l2 = 1.0 - l2;
                }
                let eta: f64 = rng.random();
                let params = OptimalStateParams::new(l1, l2, 1.0 - l1 - l2).unwrap();
                let phi = states::optimal_state(&params, Axis::Z, n).unwrap();
                let rho = states::noisy_state(&phi, eta).unwrap();
                let direct = correlation_matrices(&rho).unwrap();
                let closed = noisy_phi_matrices(n, eta, l1, l2).unwrap();
                assert!((direct.c - closed.c).norm() <= 1e-10, "C mismatch n={n}");
                assert!((direct.gamma - closed.gamma).norm() <= 1e-10, "Gamma mismatch n={n}");
                assert!((direct.x - closed.x).norm() <= 1e-10, "X mismatch n={n}");
            }
        }
    }

    #[test]
    fn x_identity_holds_for_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = 4usize;
            let mut l1: f64 = rng.random();
            let mut l2: f64 = rng.random();
            if l1 + l2 > 1.0 {
                l1 = 1.0 - l1;
                l2 = 1.0 - l2;
            }
            let eta: f64 = rng.random();
            let params = OptimalStateParams::new(l1, l2, 1.0 - l1 - l2).unwrap();
            let phi = states::optimal_state(&params, Axis::Z, n).unwrap();
            let rho = states::noisy_state(&phi, eta).unwrap();
            let m = correlation_matrices(&rho).unwrap();
            let rebuilt = m.gamma.scale(n as f64 - 1.0) + m.c;
            assert!((m.x - rebuilt).norm() <= 1e-10);
        }
    }

    #[test]
    fn no_separable_product_state_is_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = rng.random_range(2..=5usize);
            let alphas: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let bloch = ProductBloch::new(alphas).unwrap();
            // random axis
            let v = loop {
                let x: f64 = rng.random_range(-1.0..1.0);
                let y: f64 = rng.random_range(-1.0..1.0);
                let z: f64 = rng.random_range(-1.0..1.0);
                let norm = (x * x + y * y + z * z).sqrt();
                if norm > 0.1 {
                    break [x / norm, y / norm, z / norm];
                }
            };
            let psi = states::product_state(&bloch, Axis::from_vector(v).unwrap()).unwrap();
            let report = squeezing_classify(&psi).unwrap();
            let nf = n as f64;
            // slack 1e-9 on each inequality
            assert!(report.trace_gamma >= nf / 2.0 - 1e-9);
            assert!(report.chi_min >= report.matrices.c.trace() - nf / 2.0 - 1e-9);
            assert!(report.chi_max <= (nf - 1.0) * report.trace_gamma - nf * (nf - 2.0) / 4.0 + 1e-9);
        }
    }

    #[test]
    fn ss3_threshold_splits_detection() {
        for n in [6usize, 10] {
            let thr = ss3_threshold(n);
            for lambda in [0.0, 0.25, 0.5] {
                let above = classify_from_matrices(
                    n,
                    &noisy_phi_matrices(n, thr + 1e-3, lambda, 0.5 - lambda).unwrap(),
                );
                let below = classify_from_matrices(
                    n,
                    &noisy_phi_matrices(n, thr - 1e-3, lambda, 0.5 - lambda).unwrap(),
                );
                assert!(above.violated[2], "no violation just above threshold, n={n}");
                assert!(!below.violated[2], "violation just below threshold, n={n}");
            }
        }
    }

    #[test]
    fn sampled_sweep_contains_all_regions() {
        let records = detection_region_sample(6, 20_000, 5).unwrap();
        let both = records.iter().any(|r| r.detected[0] && r.detected[1]);
        let only_k2 = records.iter().any(|r| !r.detected[0] && r.detected[1]);
        let only_k1 = records.iter().any(|r| r.detected[0] && !r.detected[1]);
        let neither = records.iter().any(|r| !r.detected[0] && !r.detected[1]);
        assert!(both && only_k2 && only_k1 && neither);
    }

    #[test]
    fn nothing_detected_at_eta_zero() {
        let grid = detection_region_grid(6, LambdaFamily::SplitWeight, 11, 2).unwrap();
        for r in grid.iter().filter(|r| r.eta == 0.0) {
            assert!(!r.detected.iter().any(|&d| d));
            assert!(!r.ss_any);
        }
    }
}
