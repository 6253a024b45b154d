//! Haar-average QFI over pure symmetric states: `tau` spectral moments with
//! a dual-path (direct sum vs Bernoulli/Faulhaber) consistency check, the
//! closed-form average, Monte Carlo estimates, `t_k` ratios, and the
//! concentration-bound confidence.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::kahan_sum;
use crate::sep_bounds;
use crate::states;

/// Bernoulli numbers `B_0..B_24` with the `B_1 = +1/2` convention.
const BERNOULLI: [f64; 25] = [
    1.0,
    0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
];

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Direct spectral moment `sum_{m=0}^{N} (N/2 - m)^k`, with exact pair
/// cancellation for odd `k` and compensated summation.
fn tau_direct(n: usize, k: u32) -> f64 {
    if k == 0 {
        return (n + 1) as f64;
    }
    let half = n as f64 / 2.0;
    let mut terms = Vec::with_capacity(n / 2 + 1);
    let mut m = 0usize;
    while (m as f64) < half {
        let x = half - m as f64;
        terms.push(x.powi(k as i32) + (-x).powi(k as i32));
        m += 1;
    }
    if n % 2 == 0 {
        terms.push(0.0);
    }
    kahan_sum(terms)
}

/// Faulhaber power sum `sum_{m=1}^{N} m^p`.
fn faulhaber_power_sum(n: usize, p: u32) -> f64 {
    let nf = n as f64;
    let terms = (0..=p).map(|r| binomial(p + 1, r) * BERNOULLI[r as usize] * nf.powi((p - r + 1) as i32));
    kahan_sum(terms) / (p + 1) as f64
}

/// `tau` via the binomial expansion in `m` and Faulhaber's formula.
fn tau_faulhaber(n: usize, k: u32) -> f64 {
    let half = n as f64 / 2.0;
    let terms = (0..=k).map(|p| {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        binomial(k, p) * half.powi((k - p) as i32) * sign * faulhaber_power_sum(n, p)
    });
    half.powi(k as i32) + kahan_sum(terms)
}

/// Spectral moment `tau_{N,k} = sum_m (N/2 - m)^k`, computed by direct
/// summation and cross-checked against the Faulhaber expansion within
/// `1e-9` of the natural moment scale. Supported for `k <= 24`.
pub fn tau(n: usize, k: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("tau needs n >= 1".into()));
    }
    if k as usize >= BERNOULLI.len() {
        return Err(Error::Unsupported(format!(
            "tau supports k <= {}, got {k}",
            BERNOULLI.len() - 1
        )));
    }
    let direct = tau_direct(n, k);
    let expanded = tau_faulhaber(n, k);
    // Scale of the alternating sums feeding both paths; odd-k moments are
    // exactly zero so a plain relative test would be meaningless.
    let scale = ((n + 1) as f64 * (n as f64 / 2.0).powi(k as i32)).max(1.0);
    if (direct - expanded).abs() > 1e-9 * scale {
        return Err(Error::Computation(format!(
            "tau({n},{k}) paths disagree: direct {direct} vs Faulhaber {expanded}"
        )));
    }
    Ok(direct)
}

/// Analytic Haar-average QFI over the symmetric subspace:
/// `(4/(N+1)) [tau_{N,2k} - (tau_{N,k}^2 + tau_{N,2k})/(N+2)]`.
pub fn avg_qfi_analytic(n: usize, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("avg_qfi_analytic needs k >= 1".into()));
    }
    let t_k = tau(n, k)?;
    let t_2k = tau(n, 2 * k)?;
    let nf = n as f64;
    Ok(4.0 / (nf + 1.0) * (t_2k - (t_k * t_k + t_2k) / (nf + 2.0)))
}

/// Monte Carlo average QFI with statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AverageQfiResult {
    pub analytic: Option<f64>,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl AverageQfiResult {
    /// Statistical consistency gate: analytic within four standard errors.
    pub fn consistent(&self) -> Option<bool> {
        self.analytic
            .map(|a| (a - self.mc_mean).abs() <= 4.0 * self.mc_stderr)
    }
}

#[derive(Clone, Copy)]
struct Welford {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn merge(self, other: Welford) -> Welford {
        if other.count == 0.0 {
            return self;
        }
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Welford {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
        }
    }
}

/// Monte Carlo `E[4 Var(J_z^k)]` over Haar-random Dicke-representation
/// states. Deterministic given the seed; batches own disjoint RNG streams
/// and are merged in index order.
pub fn avg_qfi_mc(n: usize, k: u32, n_samples: usize, seed: u64) -> Result<AverageQfiResult> {
    if n_samples < 2 {
        return Err(Error::Domain("avg_qfi_mc needs at least 2 samples".into()));
    }
    let xs: Vec<f64> = (0..=n).map(|m| n as f64 / 2.0 - m as f64).collect();
    let xk: Vec<f64> = xs.iter().map(|x| x.powi(k as i32)).collect();
    let x2k: Vec<f64> = xs.iter().map(|x| x.powi(2 * k as i32)).collect();
    let chunk = 2048usize;
    let n_chunks = n_samples.div_ceil(chunk);
    let stats: Vec<Welford> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ci as u64);
            let count = chunk.min(n_samples - ci * chunk);
            let mut w = Welford { count: 0.0, mean: 0.0, m2: 0.0 };
            for _ in 0..count {
                let state = states::random_symmetric_state_from(n, &mut rng);
                let v = state.pure_vector().unwrap();
                let mut e1 = 0.0;
                let mut e2 = 0.0;
                for (i, z) in v.iter().enumerate() {
                    let p = z.norm_sqr();
                    e1 += p * xk[i];
                    e2 += p * x2k[i];
                }
                let qfi = 4.0 * (e2 - e1 * e1);
                w.count += 1.0;
                let delta = qfi - w.mean;
                w.mean += delta / w.count;
                w.m2 += delta * (qfi - w.mean);
            }
            w
        })
        .collect();
    let total = stats
        .into_iter()
        .fold(Welford { count: 0.0, mean: 0.0, m2: 0.0 }, Welford::merge);
    let variance = total.m2 / (total.count - 1.0);
    Ok(AverageQfiResult {
        analytic: avg_qfi_analytic(n, k).ok(),
        mc_mean: total.mean,
        mc_stderr: (variance / total.count).sqrt(),
        n_samples,
        seed,
    })
}

/// Closed-form `t_k = avg QFI / C_sep` for `k = 1, 2, 3`, self-checked
/// against the quotient of the two analytic expressions.
pub fn t_ratio(n: usize, k: u32) -> Result<f64> {
    let nf = n as f64;
    let t = match k {
        1 => (nf + 1.0) / 3.0,
        2 => {
            if n < 3 {
                return Err(Error::Domain("t_ratio(k=2) requires n >= 3".into()));
            }
            2.0 * (nf + 1.0) * (nf + 3.0) * (2.0 * nf - 3.0) / (45.0 * (nf - 1.0).powi(2))
        }
        3 => {
            if n < 3 {
                return Err(Error::Domain("t_ratio(k=3) requires n >= 3".into()));
            }
            avg_qfi_analytic(n, 3)? / sep_bounds::csep_analytic(n, 3)?.value
        }
        _ => return Err(Error::Unsupported("t_k closed forms exist for k = 1, 2, 3".into())),
    };
    let quotient = avg_qfi_analytic(n, k)? / sep_bounds::csep_analytic(n, k)?.value;
    if (t - quotient).abs() > 1e-9 * quotient.abs().max(1.0) {
        return Err(Error::Computation(format!(
            "t_{k}({n}) closed form {t} disagrees with quotient {quotient}"
        )));
    }
    Ok(t)
}

/// Confidence `gamma` that a Haar-random symmetric state beats the
/// separability bound, from the one-sided large-deviation inequality with
/// `L = 32 (N/2)^{2k}`: zero when the average does not exceed the bound,
/// else `1 - exp[-(N+1) eps^2 / (4096 (N/2)^{4k})]`.
pub fn concentration_confidence(n: usize, k: u32) -> Result<f64> {
    let csep = sep_bounds::csep_analytic(n, k)?.value;
    concentration_confidence_with_csep(n, k, csep)
}

/// Same bound with a caller-supplied separability bound (for `k > 3`).
pub fn concentration_confidence_with_csep(n: usize, k: u32, csep: f64) -> Result<f64> {
    let avg = avg_qfi_analytic(n, k)?;
    let eps = avg - csep;
    if eps <= 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let denom = 4096.0 * (nf / 2.0).powi(4 * k as i32);
    Ok(1.0 - (-(nf + 1.0) * eps * eps / denom).exp())
}
