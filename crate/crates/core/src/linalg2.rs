//! Exact 2x2 complex Hermitian algebra.
//!
//! Everything here is closed form: products, traces, eigenvalues and
//! expectation values of single-qubit operators. Larger operators are never
//! materialized by the rest of the crate.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Trace and positivity tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-12;
/// Largest negative variance that is treated as rounding and clamped to zero,
/// relative to `max(1, <op^2>)`.
pub const VARIANCE_CLAMP: f64 = 1e-12;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

fn finite_c(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// General 2x2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[C1, C0], [C0, C1]]);

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    /// Returns the Hermitian part if the matrix is Hermitian to `tol` (absolute).
    pub fn to_hermitian(&self, tol: f64) -> Option<HermitianOp2> {
        let m = &self.0;
        let ok = m[0][0].im.abs() <= tol
            && m[1][1].im.abs() <= tol
            && (m[0][1] - m[1][0].conj()).norm() <= tol;
        ok.then(|| HermitianOp2 {
            a11: m[0][0].re,
            a22: m[1][1].re,
            a12: 0.5 * (m[0][1] + m[1][0].conj()),
        })
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[C0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2(out)
    }
}

/// 2x2 Hermitian operator. The lower off-diagonal element is implied as the
/// conjugate of `a12`, so Hermiticity cannot be broken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOp2 {
    a11: f64,
    a22: f64,
    a12: Complex64,
}

impl HermitianOp2 {
    pub const ZERO: HermitianOp2 = HermitianOp2 {
        a11: 0.0,
        a22: 0.0,
        a12: C0,
    };
    pub const IDENTITY: HermitianOp2 = HermitianOp2 {
        a11: 1.0,
        a22: 1.0,
        a12: C0,
    };
    pub const SIGMA_X: HermitianOp2 = HermitianOp2 {
        a11: 0.0,
        a22: 0.0,
        a12: C1,
    };
    pub const SIGMA_Y: HermitianOp2 = HermitianOp2 {
        a11: 0.0,
        a22: 0.0,
        a12: Complex64::new(0.0, -1.0),
    };
    pub const SIGMA_Z: HermitianOp2 = HermitianOp2 {
        a11: 1.0,
        a22: -1.0,
        a12: C0,
    };

    pub fn new(a11: f64, a22: f64, a12: Complex64) -> Result<Self> {
        if !a11.is_finite() {
            return Err(Error::param("a11", "must be finite", a11));
        }
        if !a22.is_finite() {
            return Err(Error::param("a22", "must be finite", a22));
        }
        if !finite_c(a12) {
            return Err(Error::param("a12", "must be finite", a12.norm()));
        }
        Ok(Self { a11, a22, a12 })
    }

    /// Diagonal operator `diag(a11, a22)`. Panics on non-finite input.
    pub fn diag(a11: f64, a22: f64) -> Self {
        Self::new(a11, a22, C0).expect("finite diagonal")
    }

    pub fn scaled_identity(c: f64) -> Self {
        Self::diag(c, c)
    }

    pub fn a11(&self) -> f64 {
        self.a11
    }

    pub fn a22(&self) -> f64 {
        self.a22
    }

    pub fn a12(&self) -> Complex64 {
        self.a12
    }

    pub fn a21(&self) -> Complex64 {
        self.a12.conj()
    }

    pub fn is_diagonal(&self) -> bool {
        self.a12 == C0
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn to_matrix(&self) -> Matrix2 {
        Matrix2([
            [Complex64::new(self.a11, 0.0), self.a12],
            [self.a12.conj(), Complex64::new(self.a22, 0.0)],
        ])
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mid = 0.5 * (self.a11 + self.a22);
        let half_gap = (0.5 * (self.a11 - self.a22)).hypot(self.a12.norm());
        [mid - half_gap, mid + half_gap]
    }

    /// Eigenpairs `(lambda, unit eigenvector)` in ascending eigenvalue order.
    pub fn eigen(&self) -> [(f64, [Complex64; 2]); 2] {
        let [lo, hi] = self.eigenvalues();
        if self.a12.norm() == 0.0 {
            let e1 = [C1, C0];
            let e2 = [C0, C1];
            return if self.a11 <= self.a22 {
                [(lo, e1), (hi, e2)]
            } else {
                [(lo, e2), (hi, e1)]
            };
        }
        // (A - lambda) v = 0 with v = (a12, lambda - a11) up to normalization.
        let vec_for = |lambda: f64| {
            let v = [self.a12, Complex64::new(lambda - self.a11, 0.0)];
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / norm, v[1] / norm]
        };
        [(lo, vec_for(lo)), (hi, vec_for(hi))]
    }

    /// Largest element magnitude, used for scale-aware tolerances.
    pub fn max_abs(&self) -> f64 {
        self.a11.abs().max(self.a22.abs()).max(self.a12.norm())
    }
}

impl Add for HermitianOp2 {
    type Output = HermitianOp2;

    fn add(self, rhs: HermitianOp2) -> HermitianOp2 {
        HermitianOp2 {
            a11: self.a11 + rhs.a11,
            a22: self.a22 + rhs.a22,
            a12: self.a12 + rhs.a12,
        }
    }
}

impl Sub for HermitianOp2 {
    type Output = HermitianOp2;

    fn sub(self, rhs: HermitianOp2) -> HermitianOp2 {
        self + (-rhs)
    }
}

impl Neg for HermitianOp2 {
    type Output = HermitianOp2;

    fn neg(self) -> HermitianOp2 {
        -1.0 * self
    }
}

impl Mul<HermitianOp2> for f64 {
    type Output = HermitianOp2;

    fn mul(self, rhs: HermitianOp2) -> HermitianOp2 {
        HermitianOp2 {
            a11: self * rhs.a11,
            a22: self * rhs.a22,
            a12: self * rhs.a12,
        }
    }
}

/// Matrix product of two Hermitian operators; in general not Hermitian.
impl Mul for HermitianOp2 {
    type Output = Matrix2;

    fn mul(self, rhs: HermitianOp2) -> Matrix2 {
        self.to_matrix() * rhs.to_matrix()
    }
}

/// Validated qubit density matrix: unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    rho: HermitianOp2,
}

impl DensityMatrix2 {
    pub fn new(rho: HermitianOp2) -> Result<Self> {
        let tr = rho.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let [lo, _] = rho.eigenvalues();
        if lo < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:e}")));
        }
        Ok(Self { rho })
    }

    /// Projector onto a (not necessarily normalized) state vector.
    pub fn from_pure(psi: [Complex64; 2]) -> Result<Self> {
        let norm2 = psi[0].norm_sqr() + psi[1].norm_sqr();
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::InvalidState(
                "zero or non-finite state vector".into(),
            ));
        }
        let rho = HermitianOp2::new(
            psi[0].norm_sqr() / norm2,
            psi[1].norm_sqr() / norm2,
            psi[0] * psi[1].conj() / norm2,
        )?;
        Self::new(rho)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho: HermitianOp2::scaled_identity(0.5),
        }
    }

    pub fn op(&self) -> &HermitianOp2 {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        (self.rho * self.rho).trace().re
    }
}

/// `tr(rho op)`. The imaginary residual is checked against a scale-aware
/// `1e-12` bound and then discarded.
pub fn expectation(op: &HermitianOp2, state: &DensityMatrix2) -> Result<f64> {
    let value = (state.rho * *op).trace();
    let scale = op.max_abs().max(1.0);
    if value.im.abs() > 1e-12 * scale {
        return Err(Error::InvalidState(format!(
            "expectation has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// `<op^2> - <op>^2`, evaluated on the traceless part of `op` to avoid
/// cancellation when `op` is close to a multiple of the identity.
pub fn variance(op: &HermitianOp2, state: &DensityMatrix2) -> Result<f64> {
    let shifted = *op - HermitianOp2::scaled_identity(0.5 * op.trace());
    let mean = expectation(&shifted, state)?;
    let second = (state.rho.to_matrix() * (shifted * shifted)).trace().re;
    let var = second - mean * mean;
    if var >= 0.0 {
        return Ok(var);
    }
    if var >= -VARIANCE_CLAMP * second.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::InvalidState(format!("negative variance {var:e}")))
    }
}
