//! Bloch-parametrized qubit preparations.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg2::{DensityMatrix2, HermitianOp2};
use crate::{Error, Result};

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_pi(angle: f64) -> f64 {
    let wrapped = angle - 2.0 * PI * ((angle + PI) / (2.0 * PI)).floor();
    if wrapped >= PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

/// Wraps an angle into `[0, 2 pi)`.
pub fn wrap_two_pi(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(2.0 * PI);
    if wrapped >= 2.0 * PI {
        0.0
    } else {
        wrapped
    }
}

/// Qubit state `rho = (I + n_vec . sigma)/2` with
/// `n_vec = n (sin theta cos phi, sin theta sin phi, cos theta)`.
///
/// `n = 1` is a pure state; `n = 0` is maximally mixed. `phi` is kept as
/// given and wrapped into `[-pi, pi)` on read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    n: f64,
    theta: f64,
    phi: f64,
}

impl BlochState {
    pub fn new(n: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&n) {
            return Err(Error::param("n", "0 <= n <= 1", n));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::param("theta", "0 <= theta <= pi", theta));
        }
        if !phi.is_finite() {
            return Err(Error::param("phi", "must be finite", phi));
        }
        Ok(Self { n, theta, phi })
    }

    pub fn pure(theta: f64, phi: f64) -> Result<Self> {
        Self::new(1.0, theta, phi)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            n: 0.0,
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// Same preparation with a different relative phase.
    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Self::new(self.n, self.theta, phi)
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        wrap_pi(self.phi)
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [self.n * st * cp, self.n * st * sp, self.n * ct]
    }

    pub fn density_matrix(&self) -> DensityMatrix2 {
        let [nx, ny, nz] = self.bloch_vector();
        let rho = HermitianOp2::new(
            0.5 * (1.0 + nz),
            0.5 * (1.0 - nz),
            Complex64::new(0.5 * nx, -0.5 * ny),
        )
        .expect("finite Bloch components");
        DensityMatrix2::new(rho).expect("valid Bloch state yields a valid density matrix")
    }

    /// Energy-basis coherence `sum_{j != k} |rho_jk| = n sin theta`.
    pub fn coherence(&self) -> f64 {
        self.n * self.theta.sin()
    }
}

/// One balance arm: `count` identical, uncorrelated copies of `qubit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmState {
    pub qubit: BlochState,
    count: u64,
}

impl ArmState {
    pub fn new(qubit: BlochState, count: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::param("count", "N >= 1", 0.0));
        }
        Ok(Self { qubit, count })
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}
