//! The mixed Hamiltonian `H = mu J_a + nu J_b^2` for orthogonal axes:
//! separability bound on the symmetric ansatz, entanglement bound from
//! extreme eigenvalues, and usefulness-ratio sweeps.

use serde::{Deserialize, Serialize};

use crate::axis::Axis;
use crate::collective::{self, ReprKind, DEFAULT_FULL_CAP};
use crate::error::{Error, Result};
use crate::linalg::Tridiagonal;
use crate::optim;
use crate::sep_bounds::BoundMethod;

/// Parameters of `H = mu J_a + nu J_b^2` on `n` qubits.
#[derive(Debug, Clone, Copy)]
pub struct MixedHamiltonianParams {
    pub mu: f64,
    pub nu: f64,
    pub axis_a: Axis,
    pub axis_b: Axis,
    pub n: usize,
}

impl MixedHamiltonianParams {
    /// Default axes `a = x`, `b = z`.
    pub fn xz(mu: f64, nu: f64, n: usize) -> Self {
        Self { mu, nu, axis_a: Axis::X, axis_b: Axis::Z, n }
    }

    fn axes_dot(&self) -> f64 {
        let a = self.axis_a.unit();
        let b = self.axis_b.unit();
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    /// Both terms active but along the same axis: the Hamiltonian reduces to
    /// a polynomial in a single `J`, which the `J^k` machinery already covers.
    pub fn is_trivial_same_axis(&self) -> bool {
        self.mu != 0.0 && self.nu != 0.0 && (self.axes_dot().abs() - 1.0).abs() < 1e-12
    }

    fn require_orthogonal(&self) -> Result<()> {
        if self.axes_dot().abs() > 1e-12 {
            return Err(Error::Unsupported(
                "the symmetric-ansatz variance formula requires orthogonal axes".into(),
            ));
        }
        Ok(())
    }
}

/// Variance of `H` on the symmetric product state with per-qubit Bloch
/// components `alpha` (along `a`) and `beta` (along `b`):
/// `(N/8) { 2(1-a^2) mu^2 - 4 a b^2 mu nu (N-1)
///          + (1-b)(1+b) nu^2 (N-1) [b^2 (2N-3) + 1] }`.
pub fn hab_symmetric_variance(
    alpha: f64,
    beta: f64,
    params: &MixedHamiltonianParams,
) -> Result<f64> {
    params.require_orthogonal()?;
    if alpha * alpha + beta * beta > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "purity condition alpha^2 + beta^2 <= 1 violated: {alpha}, {beta}"
        )));
    }
    Ok(hab_variance_raw(alpha, beta, params))
}

fn hab_variance_raw(alpha: f64, beta: f64, params: &MixedHamiltonianParams) -> f64 {
    let nf = params.n as f64;
    let (mu, nu) = (params.mu, params.nu);
    nf / 8.0
        * (2.0 * (1.0 - alpha * alpha) * mu * mu
            - 4.0 * alpha * beta * beta * mu * nu * (nf - 1.0)
            + (1.0 - beta) * (1.0 + beta) * nu * nu * (nf - 1.0) * (beta * beta * (2.0 * nf - 3.0) + 1.0))
}

/// Disk-search settings for the symmetric-ansatz bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiskConfig {
    pub n_angles: usize,
    pub n_radii: usize,
    pub refine_tol: f64,
}

impl Default for DiskConfig {
    fn default() -> Self {
        Self { n_angles: 721, n_radii: 361, refine_tol: 1e-10 }
    }
}

/// Separability bound of `H` over the symmetric ansatz.
#[derive(Debug, Clone)]
pub struct HabBoundReport {
    pub value: f64,
    pub method: BoundMethod,
    /// `(alpha, beta)` at the optimum.
    pub argmax: (f64, f64),
}

/// `C_sep(H)` over the symmetric product ansatz: `4 max Var` on the disk
/// `alpha^2 + beta^2 <= 1`, via a dense polar grid and Nelder-Mead
/// refinement.
pub fn csep_hab(params: &MixedHamiltonianParams, cfg: &DiskConfig) -> Result<HabBoundReport> {
    params.require_orthogonal()?;
    if params.n < 2 {
        return Err(Error::Domain("csep_hab needs n >= 2".into()));
    }
    // Polar objective with the radius clamped to the disk, so the refiners
    // can walk along the boundary where the optimum often sits.
    let polar = |t: f64, r: f64| {
        let rc = r.clamp(0.0, 1.0);
        hab_variance_raw(rc * t.cos(), rc * t.sin(), params)
    };
    let mut best = f64::NEG_INFINITY;
    let mut best_tr = (0.0, 0.0);
    let dt = 2.0 * std::f64::consts::PI / (cfg.n_angles - 1) as f64;
    for ia in 0..cfg.n_angles {
        let t = ia as f64 * dt;
        for ir in 0..cfg.n_radii {
            let r = ir as f64 / (cfg.n_radii - 1) as f64;
            let v = polar(t, r);
            if v > best {
                best = v;
                best_tr = (t, r);
            }
        }
    }
    let mut value = best;
    let mut argmax_tr = best_tr;
    // Boundary refinement: golden section over the angle at r = 1.
    let (tb, vb) = optim::golden_section_max(
        |t| polar(t, 1.0),
        best_tr.0 - 2.0 * dt,
        best_tr.0 + 2.0 * dt,
        1e-12,
    );
    if vb > value {
        value = vb;
        argmax_tr = (tb, 1.0);
    }
    // Interior/general refinement with Nelder-Mead on (t, r).
    let ((tn, rn), vn) = optim::nelder_mead_max_2d(polar, argmax_tr, 1e-3, cfg.refine_tol, 4000);
    if vn > value {
        value = vn;
        argmax_tr = (tn, rn.clamp(0.0, 1.0));
    }
    // Coordinate polish around the winner.
    let (tp, vp) = optim::golden_section_max(
        |t| polar(t, argmax_tr.1),
        argmax_tr.0 - dt,
        argmax_tr.0 + dt,
        1e-12,
    );
    if vp > value {
        value = vp;
        argmax_tr.0 = tp;
    }
    let (rp, vr) = optim::golden_section_max(
        |r| polar(argmax_tr.0, r),
        (argmax_tr.1 - 0.01).max(0.0),
        (argmax_tr.1 + 0.01).min(1.0),
        1e-13,
    );
    if vr > value {
        value = vr;
        argmax_tr.1 = rp;
    }
    let argmax = (
        argmax_tr.1 * argmax_tr.0.cos(),
        argmax_tr.1 * argmax_tr.0.sin(),
    );
    Ok(HabBoundReport {
        value: 4.0 * value,
        method: BoundMethod::NumericSymmetric,
        argmax,
    })
}

fn orthonormal_frame(params: &MixedHamiltonianParams) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let a = params.axis_a.unit();
    let b = params.axis_b.unit();
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    (a, b, c)
}

/// Product state from per-qubit spherical angles `(theta_i, phi_i)` in the
/// frame `(a, b, a x b)`: the Bloch vector of qubit `i` is
/// `sin(theta) cos(phi) a + cos(theta) b + sin(theta) sin(phi) (a x b)`.
fn product_state_from_angles(
    params: &MixedHamiltonianParams,
    angles: &[f64],
) -> nalgebra::DVector<num_complex::Complex64> {
    let (a, b, c) = orthonormal_frame(params);
    let n = params.n;
    assert_eq!(angles.len(), 2 * n);
    let dim = 1usize << n;
    let factors: Vec<[num_complex::Complex64; 2]> = (0..n)
        .map(|i| {
            let (theta, phi) = (angles[2 * i], angles[2 * i + 1]);
            let (st, ct) = (theta.sin(), theta.cos());
            let (sp, cp) = (phi.sin(), phi.cos());
            let r = [
                st * cp * a[0] + ct * b[0] + st * sp * c[0],
                st * cp * a[1] + ct * b[1] + st * sp * c[1],
                st * cp * a[2] + ct * b[2] + st * sp * c[2],
            ];
            let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            let axis = Axis::Dir([r[0] / norm, r[1] / norm, r[2] / norm]);
            axis.eigenstates().0
        })
        .collect();
    let mut out = nalgebra::DVector::zeros(dim);
    for idx in 0..dim {
        let mut amp = num_complex::Complex64::new(1.0, 0.0);
        for (site, f) in factors.iter().enumerate() {
            amp *= f[(idx >> (n - 1 - site)) & 1];
        }
        out[idx] = amp;
    }
    out
}

fn hab_variance_on_state(
    params: &MixedHamiltonianParams,
    psi: &nalgebra::DVector<num_complex::Complex64>,
) -> f64 {
    let n = params.n;
    let ja = collective::apply_collective(params.axis_a, n, psi);
    let jb = collective::apply_collective(params.axis_b, n, psi);
    let jb2 = collective::apply_collective(params.axis_b, n, &jb);
    let hpsi = ja.scale(params.mu) + jb2.scale(params.nu);
    let mean = psi.dotc(&hpsi).re;
    hpsi.dotc(&hpsi).re - mean * mean
}

/// Cross-validation path: maximize `4 Var(H)` over unrestricted per-qubit
/// Bloch vectors (two spherical angles per qubit, full sphere). Gradient
/// ascent with central finite differences from `n_starts` random starts.
pub fn csep_hab_full_product(
    params: &MixedHamiltonianParams,
    n_starts: usize,
    seed: u64,
) -> Result<f64> {
    params.require_orthogonal()?;
    if params.n > DEFAULT_FULL_CAP {
        return Err(Error::Capacity { n: params.n, cap: DEFAULT_FULL_CAP });
    }
    use rand::{Rng, SeedableRng};
    let dims = 2 * params.n;
    let fg = |t: &[f64]| {
        let f0 = 4.0 * hab_variance_on_state(params, &product_state_from_angles(params, t));
        let h = 1e-6;
        let mut grad = vec![0.0; dims];
        let mut tp = t.to_vec();
        for i in 0..dims {
            tp[i] = t[i] + h;
            let fp = 4.0 * hab_variance_on_state(params, &product_state_from_angles(params, &tp));
            tp[i] = t[i] - h;
            let fm = 4.0 * hab_variance_on_state(params, &product_state_from_angles(params, &tp));
            tp[i] = t[i];
            grad[i] = (fp - fm) / (2.0 * h);
        }
        (f0, grad)
    };
    let cfg = optim::AscentConfig { grad_tol: 1e-8, step_tol: 1e-12, max_iter: 500 };
    let mut best = f64::NEG_INFINITY;
    for s in 0..n_starts {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64);
        let t0: Vec<f64> = (0..dims)
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        // Angles are periodic; a wide box keeps the ascent effectively unconstrained.
        let run = optim::projected_gradient_ascent(&fg, &t0, -10.0, 10.0, &cfg);
        best = best.max(run.value);
    }
    Ok(best)
}

/// Where the extreme eigenvalues of `H` are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentMode {
    /// Dense eigendecomposition in the full `2^N` space.
    FullSpace,
    /// Maximal-spin (Dicke) sector only, as a tridiagonal problem.
    MaxSector,
    /// Union over every total-spin sector (the exact full spectrum range).
    AllSectors,
}

/// Extreme eigenvalues of the spin-`j` sector of `mu J_a + nu J_b^2`.
///
/// Rotating `b` to `z` leaves `a` at polar angle `chi` with `cos(chi) = a.b`;
/// the sector matrix is real symmetric tridiagonal.
fn sector_extremes(dim: usize, mu: f64, nu: f64, cos_chi: f64) -> (f64, f64) {
    let j = (dim as f64 - 1.0) / 2.0;
    let sin_chi = (1.0 - cos_chi * cos_chi).max(0.0).sqrt();
    let diag: Vec<f64> = (0..dim)
        .map(|i| {
            let mt = j - i as f64;
            mu * cos_chi * mt + nu * mt * mt
        })
        .collect();
    let sub: Vec<f64> = (0..dim - 1)
        .map(|i| {
            let x = (i as f64 + 1.0) * (2.0 * j - i as f64);
            mu * sin_chi * 0.5 * x.sqrt()
        })
        .collect();
    Tridiagonal { diag, sub }.extreme_eigenvalues()
}

/// `C_ent(H) = (h_max - h_min)^2` in the requested mode.
pub fn cent_hab(params: &MixedHamiltonianParams, mode: CentMode) -> Result<f64> {
    let n = params.n;
    if n == 0 {
        return Err(Error::Domain("cent_hab needs n >= 1".into()));
    }
    match mode {
        CentMode::FullSpace => {
            if n > DEFAULT_FULL_CAP {
                return Err(Error::Capacity { n, cap: DEFAULT_FULL_CAP });
            }
            let ja = collective::build_collective(params.axis_a, n, ReprKind::Full)?;
            let jb = collective::build_collective(params.axis_b, n, ReprKind::Full)?;
            let h = ja.matrix().scale(params.mu) + (jb.matrix() * jb.matrix()).scale(params.nu);
            let ev = crate::linalg::hermitian_eigenvalues(&h);
            let spread = ev[ev.len() - 1] - ev[0];
            Ok(spread * spread)
        }
        CentMode::MaxSector => {
            let (lo, hi) = sector_extremes(n + 1, params.mu, params.nu, params.axes_dot());
            Ok((hi - lo) * (hi - lo))
        }
        CentMode::AllSectors => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut dim = n + 1;
            loop {
                let (slo, shi) = sector_extremes(dim, params.mu, params.nu, params.axes_dot());
                lo = lo.min(slo);
                hi = hi.max(shi);
                if dim <= 2 {
                    break;
                }
                dim -= 2;
            }
            Ok((hi - lo) * (hi - lo))
        }
    }
}

/// One `(N, mu)` cell of the usefulness sweep for `H = mu J_a + (1-mu) J_b^2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HabSweepRecord {
    pub n: usize,
    pub mu: f64,
    pub nu: f64,
    pub csep: f64,
    pub cent: f64,
    pub s: f64,
    /// Relative deviation of the max-sector extremes from the all-sector
    /// extremes, recorded where the cross-check ran (`n <= 12`).
    pub sector_check_dev: Option<f64>,
}

/// Sweep `(N, mu)` cells with `nu = 1 - mu`. The entanglement bound uses the
/// maximal-spin sector; for `n <= 12` the all-sector spectrum is compared and
/// a mismatch beyond `1e-9` (relative) aborts the sweep.
pub fn s_hab_sweep(
    mu_list: &[f64],
    n_list: &[usize],
    axis_a: Axis,
    axis_b: Axis,
    disk: &DiskConfig,
) -> Result<Vec<HabSweepRecord>> {
    let mut out = Vec::new();
    for &n in n_list {
        for &mu in mu_list {
            let params = MixedHamiltonianParams { mu, nu: 1.0 - mu, axis_a, axis_b, n };
            let csep = csep_hab(&params, disk)?.value;
            let cent_max = cent_hab(&params, CentMode::MaxSector)?;
            let sector_check_dev = if n <= 12 {
                let cent_all = cent_hab(&params, CentMode::AllSectors)?;
                let dev = (cent_all - cent_max).abs() / cent_all.abs().max(1.0);
                if dev > 1e-9 {
                    return Err(Error::Computation(format!(
                        "extreme eigenvalues left the maximal-spin sector at n={n}, mu={mu}: \
                         sector {cent_max} vs full {cent_all}"
                    )));
                }
                Some(dev)
            } else {
                None
            };
            let s = cent_max / csep;
            out.push(HabSweepRecord { n, mu, nu: 1.0 - mu, csep, cent: cent_max, s, sector_check_dev });
        }
    }
    out.sort_by(|a, b| (a.n, a.mu).partial_cmp(&(b.n, b.mu)).unwrap());
    Ok(out)
}
