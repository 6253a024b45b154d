//! Quantum Fisher information and metrologically useful entanglement for
//! nonlinear collective Hamiltonians `J_alpha^k` on `N` qubits.
//!
//! The crate provides:
//!
//! - collective angular-momentum operators in the full `2^N` space and in the
//!   `(N+1)`-dimensional Dicke (maximal-spin) representation ([`collective`]),
//! - the state families entering the bounds: product states, GHZ, Dicke,
//!   singlet, the optimal superposition state, noisy mixtures, and Haar-random
//!   symmetric states ([`states`]),
//! - QFI evaluation for arbitrary states plus closed-form fast paths ([`qfi`]),
//! - separability bounds `C_sep(J_alpha^k)` (analytic for `k <= 3`, numeric
//!   multi-start optimization for any `k`), the entanglement bound `C_ent`,
//!   usefulness ratios `s_k`, and Hessian certificates ([`sep_bounds`]),
//! - the mixed Hamiltonian `mu J_a + nu J_b^2` ([`mixed_ham`]),
//! - optimal spin-squeezing inequalities and detection-region sweeps
//!   ([`squeezing`]),
//! - Haar-average QFI over the symmetric subspace, `tau` moments, `t_k`
//!   ratios, and concentration confidence ([`random_avg`]).
//!
//! All stochastic routines take explicit seeds and are bit-reproducible.

pub mod axis;
pub mod collective;
pub mod error;
pub mod linalg;
pub mod mixed_ham;
pub mod optim;
pub mod qfi;
pub mod random_avg;
pub mod sep_bounds;
pub mod squeezing;
pub mod states;

pub use axis::Axis;
pub use collective::{build_collective, operator_power, OperatorMatrix, Repr, DEFAULT_FULL_CAP};
pub use error::{Error, Result};
pub use qfi::{qfi_general, qfi_noisy_closed, qfi_phi_closed, qfi_pure, QfiMethod, QfiResult};
pub use sep_bounds::{cent, csep_analytic, csep_numeric, product_variance, ProductBloch};
pub use states::{OptimalStateParams, QuantumState};

/// Crate version string carried in emitted records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Configure the global rayon pool from the `METROBOUND_THREADS` env var.
///
/// Call once at process start; returns the thread count in effect. Without
/// the variable (or after the pool is already built) this is a no-op.
pub fn init_thread_pool() -> usize {
    if let Ok(v) = std::env::var("METROBOUND_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    rayon::current_num_threads()
}
