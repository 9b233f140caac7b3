//! Free-fall acceleration operator and its statistics.
//!
//! In the eigenbasis of the inertial internal Hamiltonian the acceleration
//! operator is `a = g [[r1, r], [r*, r2]]` with `r = |r| e^{i phi_r}`. The WEP
//! holds exactly when `r1 = r2 = 1` and `r = 0`, i.e. `a = g I`.
//!
//! The form factors `F` and `G` are the mean and variance of `a/g` in a
//! Bloch-parametrized state. Phase averages use the normalized mean
//! `(1/2pi) \int dphi`.
//!
//! The robustness helpers take the relative phase under the name `gamma`;
//! it is the same angle as the Bloch `phi`. Their preparation error `epsilon`
//! tilts the polar angle towards the `|1>` pole: `theta = pi/2 - epsilon`.

use num_complex::Complex64;

use crate::linalg2::HermitianOp2;
use crate::state::{wrap_two_pi, BlochState};
use crate::{Error, Result};

/// Largest `|E_jk|/(m c^2)` accepted by the leading-order expansion.
pub const PERTURBATIVE_LIMIT: f64 = 1e-3;
/// Largest state-preparation error accepted by the robustness expansions.
pub const MAX_PREPARATION_ERROR: f64 = 0.3;

/// WEP-violation parameters `(r1, r2, |r|, phi_r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WepParams {
    r1: f64,
    r2: f64,
    r_abs: f64,
    phi_r: f64,
}

impl WepParams {
    /// `r1 = r2 = 1`, `r = 0`.
    pub const WEP: WepParams = WepParams {
        r1: 1.0,
        r2: 1.0,
        r_abs: 0.0,
        phi_r: 0.0,
    };

    pub fn new(r1: f64, r2: f64, r_abs: f64, phi_r: f64) -> Result<Self> {
        if !r1.is_finite() {
            return Err(Error::param("r1", "must be finite", r1));
        }
        if !r2.is_finite() {
            return Err(Error::param("r2", "must be finite", r2));
        }
        if !(r_abs >= 0.0 && r_abs.is_finite()) {
            return Err(Error::param("|r|", "|r| >= 0", r_abs));
        }
        if !phi_r.is_finite() {
            return Err(Error::param("phi_r", "must be finite", phi_r));
        }
        Ok(Self {
            r1,
            r2,
            r_abs,
            phi_r: wrap_two_pi(phi_r),
        })
    }

    pub fn from_complex(r1: f64, r2: f64, r: Complex64) -> Result<Self> {
        let phi = if r.norm() == 0.0 { 0.0 } else { r.arg() };
        Self::new(r1, r2, r.norm(), phi)
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn r_abs(&self) -> f64 {
        self.r_abs
    }

    /// Off-diagonal phase in `[0, 2 pi)`.
    pub fn phi_r(&self) -> f64 {
        self.phi_r
    }

    pub fn r(&self) -> Complex64 {
        Complex64::from_polar(self.r_abs, self.phi_r)
    }

    pub fn half_splitting(&self) -> f64 {
        0.5 * (self.r1 - self.r2)
    }

    /// `a/g` as a matrix.
    pub fn matrix(&self) -> HermitianOp2 {
        HermitianOp2::new(self.r1, self.r2, self.r()).expect("finite parameters")
    }

    /// `(H_g - H_i)/(m c^2)` per two-level system when `m_g = m_i = m`,
    /// i.e. `a/g - I`.
    pub fn deviation_matrix(&self) -> HermitianOp2 {
        self.matrix() - HermitianOp2::IDENTITY
    }
}

/// Classical masses and internal Hamiltonians of one test body.
///
/// `h_i` must be diagonal: its eigenbasis is the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassHamiltonians {
    pub m_i: f64,
    pub m_g: f64,
    pub h_i: HermitianOp2,
    pub h_g: HermitianOp2,
    pub c: f64,
}

impl MassHamiltonians {
    pub fn new(m_i: f64, m_g: f64, h_i: HermitianOp2, h_g: HermitianOp2, c: f64) -> Result<Self> {
        if !(m_i > 0.0 && m_i.is_finite()) {
            return Err(Error::param("m_i", "m_i > 0", m_i));
        }
        if !(m_g > 0.0 && m_g.is_finite()) {
            return Err(Error::param("m_g", "m_g > 0", m_g));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::param("c", "c > 0", c));
        }
        if !h_i.is_diagonal() {
            return Err(Error::param(
                "H_i",
                "must be diagonal in its own eigenbasis",
                h_i.a12().norm(),
            ));
        }
        Ok(Self {
            m_i,
            m_g,
            h_i,
            h_g,
            c,
        })
    }

    /// Checks every `|E_jk|/(m c^2)` against [`PERTURBATIVE_LIMIT`].
    pub fn check_perturbative(&self) -> Result<()> {
        check_small("E^(i)", &self.h_i, self.m_i * self.c * self.c)?;
        check_small("E^(g)", &self.h_g, self.m_g * self.c * self.c)
    }
}

pub(crate) fn check_small(element: &'static str, h: &HermitianOp2, rest_energy: f64) -> Result<()> {
    let ratio = h.max_abs() / rest_energy;
    if ratio < PERTURBATIVE_LIMIT {
        Ok(())
    } else {
        Err(Error::PerturbativeRegime {
            element,
            ratio,
            limit: PERTURBATIVE_LIMIT,
        })
    }
}

/// Leading-order `(r1, r2, r)` from the mass operators `M = m + H/c^2`.
pub fn params_from_hamiltonians(mh: &MassHamiltonians) -> Result<WepParams> {
    mh.check_perturbative()?;
    let ratio = mh.m_g / mh.m_i;
    let eg = mh.m_g * mh.c * mh.c;
    let ei = mh.m_i * mh.c * mh.c;
    let r1 = ratio * (1.0 + mh.h_g.a11() / eg - mh.h_i.a11() / ei);
    let r2 = ratio * (1.0 + mh.h_g.a22() / eg - mh.h_i.a22() / ei);
    let r = ratio * mh.h_g.a12() / eg;
    WepParams::from_complex(r1, r2, r)
}

/// `a = g [[r1, r], [r*, r2]]`.
pub fn acceleration_operator(p: &WepParams, g: f64) -> Result<HermitianOp2> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::param("g", "g > 0", g));
    }
    Ok(g * p.matrix())
}

/// The bracket `(r1-r2)/2 cos theta + |r| cos(phi_r + phi) sin theta`.
fn bracket(p: &WepParams, s: &BlochState) -> f64 {
    p.half_splitting() * s.theta().cos() + p.r_abs * (p.phi_r + s.phi()).cos() * s.theta().sin()
}

/// `<a>/g`.
pub fn form_factor_f(p: &WepParams, s: &BlochState) -> f64 {
    0.5 * (p.r1 + p.r2) + s.n() * bracket(p, s)
}

/// `(Delta a^2)/g^2`.
pub fn form_factor_g(p: &WepParams, s: &BlochState) -> f64 {
    let b = bracket(p, s);
    let d = p.half_splitting();
    d * d + p.r_abs * p.r_abs - s.n() * s.n() * b * b
}

/// The same variance with the terms regrouped by `(r1-r2)`, `|r|` and the
/// cross term.
pub fn form_factor_g_rearranged(p: &WepParams, s: &BlochState) -> f64 {
    let d = p.half_splitting();
    let n2 = s.n() * s.n();
    let (st, ct) = s.theta().sin_cos();
    let cp = (p.phi_r + s.phi()).cos();
    d * d * (1.0 - n2 * ct * ct) + p.r_abs * p.r_abs * (1.0 - n2 * cp * cp * st * st)
        - 2.0 * n2 * p.r_abs * d * cp * st * ct
}

/// Mean of `F` over a uniformly random relative phase `phi`. The phase of `s`
/// is ignored.
pub fn phase_averaged_f(p: &WepParams, s: &BlochState) -> f64 {
    0.5 * (p.r1 + p.r2) + p.half_splitting() * s.n() * s.theta().cos()
}

/// Mean of `G` over a uniformly random relative phase `phi`. The phase of `s`
/// is ignored.
pub fn phase_averaged_g(p: &WepParams, s: &BlochState) -> f64 {
    let d = p.half_splitting();
    let n2 = s.n() * s.n();
    let (st, ct) = s.theta().sin_cos();
    d * d * (1.0 - n2 * ct * ct) + p.r_abs * p.r_abs * (1.0 - 0.5 * n2 * st * st)
}

/// Eötvös ratio `2|<a>_A - <a>_B| / |<a>_A + <a>_B|` of two bodies.
pub fn eotvos_ratio(
    p_a: &WepParams,
    s_a: &BlochState,
    p_b: &WepParams,
    s_b: &BlochState,
    g: f64,
) -> Result<f64> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::param("g", "g > 0", g));
    }
    let a = g * form_factor_f(p_a, s_a);
    let b = g * form_factor_f(p_b, s_b);
    let denom = (a + b).abs();
    if denom == 0.0 {
        return Err(Error::Singular("mean accelerations sum to zero".into()));
    }
    Ok(2.0 * (a - b).abs() / denom)
}

fn check_preparation_error(epsilon: f64) -> Result<()> {
    if epsilon.abs() < MAX_PREPARATION_ERROR {
        Ok(())
    } else {
        Err(Error::param("epsilon", "|epsilon| < 0.3", epsilon))
    }
}

/// `<a>/g` for the pure state at `theta = pi/2 - epsilon`, relative phase `gamma`:
/// `(r1+r2)/2 - (r2-r1)/2 sin eps + |r| cos(phi_r + gamma) cos eps`.
pub fn robustness_mean(p: &WepParams, epsilon: f64, gamma: f64) -> Result<f64> {
    check_preparation_error(epsilon)?;
    let (se, ce) = epsilon.sin_cos();
    Ok(0.5 * (p.r1 + p.r2) - 0.5 * (p.r2 - p.r1) * se + p.r_abs * (p.phi_r + gamma).cos() * ce)
}

/// `(Delta a^2)/g^2` for the pure state at `theta = pi/2 - epsilon`, relative
/// phase `gamma`.
pub fn robustness_variance(p: &WepParams, epsilon: f64, gamma: f64) -> Result<f64> {
    check_preparation_error(epsilon)?;
    let theta = std::f64::consts::FRAC_PI_2 - epsilon;
    let (st, ct) = theta.sin_cos();
    let d = p.half_splitting();
    let cp = (p.phi_r + gamma).cos();
    Ok(
        d * d * st * st + p.r_abs * p.r_abs * (1.0 - cp * cp * st * st)
            - 2.0 * p.r_abs * d * cp * st * ct,
    )
}

/// Exact `gamma` average of [`robustness_variance`]:
/// `((r1-r2)/2)^2 cos^2 eps + |r|^2 (1 - cos^2 eps / 2)`.
pub fn robustness_variance_phase_avg(p: &WepParams, epsilon: f64) -> Result<f64> {
    check_preparation_error(epsilon)?;
    let c2 = epsilon.cos().powi(2);
    let d = p.half_splitting();
    Ok(d * d * c2 + p.r_abs * p.r_abs * (1.0 - 0.5 * c2))
}
