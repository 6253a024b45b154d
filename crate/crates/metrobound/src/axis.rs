use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A measurement/rotation axis on the Bloch sphere.
///
/// The labeled axes cover everything in the bounds themselves (they are
/// direction independent); arbitrary unit vectors are accepted so rotation
/// covariance can be exercised directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
    /// Arbitrary direction; must have unit norm within 1e-12.
    Dir([f64; 3]),
}

impl Axis {
    /// Build an axis from an arbitrary Bloch vector, checking the unit norm.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "axis vector must have unit norm, got |v| = {norm}"
            )));
        }
        Ok(Axis::Dir(v))
    }

    /// Unit Bloch vector of the axis.
    pub fn unit(&self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
            Axis::Dir(v) => *v,
        }
    }

    /// The 2x2 Pauli matrix `n . sigma` along this axis, row-major.
    pub fn pauli(&self) -> [[Complex64; 2]; 2] {
        let [nx, ny, nz] = self.unit();
        [
            [Complex64::new(nz, 0.0), Complex64::new(nx, -ny)],
            [Complex64::new(nx, ny), Complex64::new(-nz, 0.0)],
        ]
    }

    /// Eigenvectors `|n_+>`, `|n_->` of the Pauli matrix with eigenvalues +1/-1.
    ///
    /// Phase convention: for `n = (sin T cos p, sin T sin p, cos T)`,
    /// `|n_+> = (cos(T/2), e^{ip} sin(T/2))` and
    /// `|n_-> = (sin(T/2), -e^{ip} cos(T/2))`.
    pub fn eigenstates(&self) -> ([Complex64; 2], [Complex64; 2]) {
        let [nx, ny, nz] = self.unit();
        let theta = nz.clamp(-1.0, 1.0).acos();
        let phi = ny.atan2(nx);
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let ph = Complex64::new(phi.cos(), phi.sin());
        let plus = [Complex64::new(c, 0.0), ph * s];
        let minus = [Complex64::new(s, 0.0), -ph * c];
        (plus, minus)
    }

    pub fn label(&self) -> String {
        match self {
            Axis::X => "x".into(),
            Axis::Y => "y".into(),
            Axis::Z => "z".into(),
            Axis::Dir(v) => format!("({:.6},{:.6},{:.6})", v[0], v[1], v[2]),
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::Domain(format!("unknown axis label '{other}'"))),
        }
    }
}
