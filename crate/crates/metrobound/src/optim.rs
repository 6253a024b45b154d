//! Small self-contained optimization tools: projected gradient ascent on a
//! box, golden-section line search, a 2-D Nelder-Mead refiner, and
//! finite-difference Hessians.

/// Result of one local ascent run.
#[derive(Debug, Clone)]
pub struct AscentRun {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Stopping rules for projected gradient ascent.
#[derive(Debug, Clone, Copy)]
pub struct AscentConfig {
    pub grad_tol: f64,
    pub step_tol: f64,
    pub max_iter: usize,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self { grad_tol: 1e-9, step_tol: 1e-12, max_iter: 2000 }
    }
}

fn clamp_box(x: &mut [f64], lo: f64, hi: f64) {
    for v in x.iter_mut() {
        *v = v.clamp(lo, hi);
    }
}

/// Infinity norm of the projected gradient on the box `[lo, hi]^n`.
fn projected_grad_norm(x: &[f64], g: &[f64], lo: f64, hi: f64) -> f64 {
    let mut worst = 0.0_f64;
    for (xi, gi) in x.iter().zip(g.iter()) {
        let active_hi = *xi >= hi - 1e-14 && *gi > 0.0;
        let active_lo = *xi <= lo + 1e-14 && *gi < 0.0;
        if !active_hi && !active_lo {
            worst = worst.max(gi.abs());
        }
    }
    worst
}

/// Maximize `f` over the box `[lo, hi]^n` by projected gradient ascent with
/// backtracking line search. `fg` returns the value and gradient.
pub fn projected_gradient_ascent<F>(
    fg: F,
    x0: &[f64],
    lo: f64,
    hi: f64,
    cfg: &AscentConfig,
) -> AscentRun
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let mut x = x0.to_vec();
    clamp_box(&mut x, lo, hi);
    let (mut value, mut grad) = fg(&x);
    let mut converged = false;
    let mut iterations = 0;
    let mut step = 1.0_f64;
    while iterations < cfg.max_iter {
        iterations += 1;
        if projected_grad_norm(&x, &grad, lo, hi) < cfg.grad_tol {
            converged = true;
            break;
        }
        // Backtracking with an Armijo condition on the projected step.
        let mut t = step;
        let mut accepted = false;
        while t >= cfg.step_tol {
            let mut cand: Vec<f64> = x.iter().zip(grad.iter()).map(|(xi, gi)| xi + t * gi).collect();
            clamp_box(&mut cand, lo, hi);
            let ip: f64 = cand
                .iter()
                .zip(x.iter())
                .zip(grad.iter())
                .map(|((c, xi), gi)| (c - xi) * gi)
                .sum();
            let (cand_val, cand_grad) = fg(&cand);
            if cand_val >= value + 1e-4 * ip && cand_val > value {
                x = cand;
                value = cand_val;
                grad = cand_grad;
                accepted = true;
                // Allow the step to grow back after successes.
                step = (t * 2.0).min(1.0e3);
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // No improving step above the step tolerance: stationary enough.
            converged = true;
            break;
        }
    }
    AscentRun { x, value, converged, iterations }
}

/// Golden-section maximization of a unimodal bracket `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while (hi - lo).abs() > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Dense grid scan followed by golden-section refinement of the best bracket.
pub fn grid_then_golden<F: Fn(f64) -> f64 + Copy>(
    f: F,
    lo: f64,
    hi: f64,
    n_grid: usize,
    tol: f64,
) -> (f64, f64) {
    assert!(n_grid >= 3);
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    let xs: Vec<f64> = (0..n_grid)
        .map(|i| lo + (hi - lo) * i as f64 / (n_grid - 1) as f64)
        .collect();
    for (i, &x) in xs.iter().enumerate() {
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let bl = if best_i == 0 { xs[0] } else { xs[best_i - 1] };
    let bh = if best_i + 1 == n_grid { xs[n_grid - 1] } else { xs[best_i + 1] };
    let (x, v) = golden_section_max(f, bl, bh, tol);
    if v >= best_v {
        (x, v)
    } else {
        (xs[best_i], best_v)
    }
}

/// Central finite-difference Hessian from function values.
///
/// For objectives that are polynomials of degree <= 2 in each coordinate
/// (the product-variance polynomials are), the central stencil is exact up
/// to roundoff for any step size.
pub fn fd_hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let f0 = f(x);
    let mut hess = vec![vec![0.0; n]; n];
    let mut xp = x.to_vec();
    for i in 0..n {
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        hess[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in (i + 1)..n {
            xp[i] = x[i] + h;
            xp[j] = x[j] + h;
            let fpp = f(&xp);
            xp[j] = x[j] - h;
            let fpm = f(&xp);
            xp[i] = x[i] - h;
            let fmm = f(&xp);
            xp[j] = x[j] + h;
            let fmp = f(&xp);
            xp[i] = x[i];
            xp[j] = x[j];
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    hess
}

/// Eigenvalues (ascending) of a real symmetric matrix given as nested rows.
pub fn symmetric_eigenvalues(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let m = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| 0.5 * (rows[i][j] + rows[j][i]));
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Maximize a 2-D function with Nelder-Mead; returns best point and value.
/// The objective may return `f64::NEG_INFINITY` outside its domain.
pub fn nelder_mead_max_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    start: (f64, f64),
    scale: f64,
    tol: f64,
    max_iter: usize,
) -> ((f64, f64), f64) {
    // Standard NM coefficients; minimize -f.
    let obj = |p: &[f64; 2]| -f(p[0], p[1]);
    let mut simplex = [
        [start.0, start.1],
        [start.0 + scale, start.1],
        [start.0, start.1 + scale],
    ];
    let mut vals = [obj(&simplex[0]), obj(&simplex[1]), obj(&simplex[2])];
    for _ in 0..max_iter {
        // order ascending by value (best first)
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = [simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];
        if (vals[2] - vals[0]).abs() <= tol
            && simplex
                .iter()
                .skip(1)
                .all(|p| (p[0] - simplex[0][0]).abs() + (p[1] - simplex[0][1]).abs() <= tol)
        {
            break;
        }
        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let reflect = [
            centroid[0] + (centroid[0] - simplex[2][0]),
            centroid[1] + (centroid[1] - simplex[2][1]),
        ];
        let fr = obj(&reflect);
        if fr < vals[0] {
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - simplex[2][0]),
                centroid[1] + 2.0 * (centroid[1] - simplex[2][1]),
            ];
            let fe = obj(&expand);
            if fe < fr {
                simplex[2] = expand;
                vals[2] = fe;
            } else {
                simplex[2] = reflect;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            simplex[2] = reflect;
            vals[2] = fr;
        } else {
            let contract = [
                centroid[0] + 0.5 * (simplex[2][0] - centroid[0]),
                centroid[1] + 0.5 * (simplex[2][1] - centroid[1]),
            ];
            let fc = obj(&contract);
            if fc < vals[2] {
                simplex[2] = contract;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        0.5 * (simplex[k][0] + simplex[0][0]),
                        0.5 * (simplex[k][1] + simplex[0][1]),
                    ];
                    vals[k] = obj(&simplex[k]);
                }
            }
        }
    }
    let mut best = 0usize;
    for k in 1..3 {
        if vals[k] < vals[best] {
            best = k;
        }
    }
    ((simplex[best][0], simplex[best][1]), -vals[best])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_section_finds_parabola_peak() {
        // Value-based 1-D search localizes x only to ~sqrt(eps).
        let (x, v) = golden_section_max(|x| 1.0 - (x - 0.3) * (x - 0.3), -1.0, 1.0, 1e-12);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-6);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn projected_ascent_respects_box() {
        // max of x0 + x1 on [-1,1]^2 is at (1,1)
        let run = projected_gradient_ascent(
            |x| (x[0] + x[1], vec![1.0, 1.0]),
            &[0.0, 0.0],
            -1.0,
            1.0,
            &AscentConfig::default(),
        );
        assert!(run.converged);
        assert_abs_diff_eq!(run.x[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(run.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn fd_hessian_exact_for_quadratics() {
        // f = x0^2 x1^2 (degree 2 per variable): H at (1,2) is [[8, 8],[8, 2... ]]
        let f = |x: &[f64]| x[0] * x[0] * x[1] * x[1];
        let h = fd_hessian(f, &[1.0, 2.0], 1.0 / 64.0);
        assert_abs_diff_eq!(h[0][0], 8.0, epsilon = 1e-9);
        assert_abs_diff_eq!(h[0][1], 8.0, epsilon = 1e-9);
        assert_abs_diff_eq!(h[1][1], 2.0, epsilon = 1e-9);
    }

    #[test]
    fn nelder_mead_refines_2d_peak() {
        let f = |x: f64, y: f64| {
            if x * x + y * y > 1.0 {
                f64::NEG_INFINITY
            } else {
                1.0 - (x - 0.2).powi(2) - (y - 0.5).powi(2)
            }
        };
        let ((x, y), v) = nelder_mead_max_2d(f, (0.0, 0.0), 0.1, 1e-12, 500);
        assert_abs_diff_eq!(x, 0.2, epsilon = 1e-6);
        assert_abs_diff_eq!(y, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
    }
}
