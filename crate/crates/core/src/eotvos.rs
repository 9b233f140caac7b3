//! Torque on a static Eötvös balance whose arms carry two-level systems.
//!
//! Only the masses are quantized; the arm vector `r_AB` stays classical. Each
//! arm holds `N` uncorrelated copies of the same qubit preparation, so means
//! and variances follow from single-qubit form factors by additivity and no
//! `2^N` operator is ever built.

use crate::frames::{beta_vector, gamma_vector, BalanceGeometry, EotvosGeometry, Vec3};
use crate::linalg2::{expectation, variance, HermitianOp2};
use crate::state::ArmState;
use crate::wep::{form_factor_f, form_factor_g, MassHamiltonians, WepParams};
use crate::{Error, Result};

/// Classical arm masses (kg).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmMasses {
    m_a: f64,
    m_b: f64,
}

impl ArmMasses {
    pub fn new(m_a: f64, m_b: f64) -> Result<Self> {
        if !(m_a > 0.0 && m_a.is_finite()) {
            return Err(Error::param("m_A", "m_A > 0", m_a));
        }
        if !(m_b > 0.0 && m_b.is_finite()) {
            return Err(Error::param("m_B", "m_B > 0", m_b));
        }
        Ok(Self { m_a, m_b })
    }

    pub fn equal(m: f64) -> Result<Self> {
        Self::new(m, m)
    }

    pub fn m_a(&self) -> f64 {
        self.m_a
    }

    pub fn m_b(&self) -> f64 {
        self.m_b
    }

    pub fn reduced(&self) -> f64 {
        self.m_a * self.m_b / (self.m_a + self.m_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueScenario {
    pub geo: EotvosGeometry,
    pub bg: BalanceGeometry,
    pub masses: ArmMasses,
    pub params: WepParams,
    pub arm_a: ArmState,
    pub arm_b: ArmState,
}

impl TorqueScenario {
    /// Mirror image with the two arm preparations exchanged.
    pub fn swapped_states(&self) -> Self {
        Self {
            arm_a: self.arm_b,
            arm_b: self.arm_a,
            ..*self
        }
    }
}

/// `r_AB . (F_A x F_B) / |F_A + F_B|`.
pub fn classical_torque_parallel(f_a: &Vec3, f_b: &Vec3, r_ab: &Vec3) -> Result<f64> {
    let total = (*f_a + *f_b).norm();
    if !(total > 0.0) {
        return Err(Error::Singular(
            "zero net force: fiber tension undefined".into(),
        ));
    }
    Ok(Vec3::triple(r_ab, f_a, f_b) / total)
}

fn triple_over_net(r: &Vec3, beta: &Vec3, gamma: &Vec3, net: &Vec3, t: f64) -> Result<f64> {
    let denom = net.norm();
    if !(denom > 0.0) {
        return Err(Error::Singular(format!(
            "|beta + gamma| vanishes at t = {t}"
        )));
    }
    Ok(Vec3::triple(r, gamma, beta) / denom)
}

/// `tau_0 = mu r_AB . (gamma x beta) / |beta + gamma|`.
pub fn tau0(s: &TorqueScenario, t: f64) -> Result<f64> {
    tau0_parts(&s.geo, &s.bg, &s.masses, t)
}

pub fn tau0_parts(
    geo: &EotvosGeometry,
    bg: &BalanceGeometry,
    masses: &ArmMasses,
    t: f64,
) -> Result<f64> {
    let beta = beta_vector(geo, t);
    let gamma = gamma_vector(geo, t)?;
    let r = bg.r_ab();
    Ok(masses.reduced() * triple_over_net(&r, &beta, &gamma, &(beta + gamma), t)?)
}

/// `N tau_0 [F(s_A) - F(s_B)]` for arms with `N` copies each.
pub fn torque_mean(s: &TorqueScenario, t: f64) -> Result<f64> {
    let tau = tau0(s, t)?;
    Ok(mean_from_tau0(s, tau))
}

/// Mean torque for a precomputed `tau_0`.
pub fn mean_from_tau0(s: &TorqueScenario, tau: f64) -> f64 {
    let fa = form_factor_f(&s.params, &s.arm_a.qubit);
    let fb = form_factor_f(&s.params, &s.arm_b.qubit);
    let (na, nb) = (s.arm_a.count() as f64, s.arm_b.count() as f64);
    if na == nb {
        tau * na * (fa - fb)
    } else {
        // Each copy contributes a/g - I.
        tau * (na * (fa - 1.0) - nb * (fb - 1.0))
    }
}

/// `N tau_0^2 [G(s_A) + G(s_B)]`.
pub fn torque_variance(s: &TorqueScenario, t: f64) -> Result<f64> {
    let tau = tau0(s, t)?;
    Ok(variance_from_tau0(s, tau))
}

pub fn variance_from_tau0(s: &TorqueScenario, tau: f64) -> f64 {
    let ga = form_factor_g(&s.params, &s.arm_a.qubit);
    let gb = form_factor_g(&s.params, &s.arm_b.qubit);
    tau * tau * (s.arm_a.count() as f64 * ga + s.arm_b.count() as f64 * gb)
}

/// `N tau_0 (r1-r2)/2 (n_A cos theta_A - n_B cos theta_B)`: the mean torque
/// averaged over independent uniform relative phases in both arms.
pub fn phase_averaged_torque_mean(s: &TorqueScenario, t: f64) -> Result<f64> {
    let tau = tau0(s, t)?;
    let arm = |a: &ArmState| a.count() as f64 * a.qubit.n() * a.qubit.theta().cos();
    Ok(tau * s.params.half_splitting() * (arm(&s.arm_a) - arm(&s.arm_b)))
}

/// Operator `c I + O_A (x) I + I (x) O_B` on one qubit of each arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmPairOp {
    pub identity: f64,
    pub arm_a: HermitianOp2,
    pub arm_b: HermitianOp2,
}

impl ArmPairOp {
    /// Mean when each arm term is summed over the arm's `N` copies.
    pub fn mean(&self, a: &ArmState, b: &ArmState) -> Result<f64> {
        let ea = expectation(&self.arm_a, &a.qubit.density_matrix())?;
        let eb = expectation(&self.arm_b, &b.qubit.density_matrix())?;
        Ok(self.identity + a.count() as f64 * ea + b.count() as f64 * eb)
    }

    pub fn variance(&self, a: &ArmState, b: &ArmState) -> Result<f64> {
        let va = variance(&self.arm_a, &a.qubit.density_matrix())?;
        let vb = variance(&self.arm_b, &b.qubit.density_matrix())?;
        Ok(a.count() as f64 * va + b.count() as f64 * vb)
    }

    /// Eigenvalue on the product of computational basis states `|j> (x) |k>`,
    /// valid when both arm operators are diagonal.
    pub fn diagonal_entry(&self, j: usize, k: usize) -> f64 {
        let pick = |op: &HermitianOp2, i: usize| if i == 0 { op.a11() } else { op.a22() };
        self.identity + pick(&self.arm_a, j) + pick(&self.arm_b, k)
    }
}

/// Pieces of the torque operator when inertial and gravitational masses and
/// internal Hamiltonians differ arbitrarily.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralTorque {
    /// `N~ = m_iA m_iB r_AB . (gamma x beta) / |(m_iA+m_iB) beta + (m_gA+m_gB) gamma|`.
    pub prefactor: f64,
    /// `m_gA/m_iA - m_gB/m_iB`.
    pub ratio_difference: f64,
    /// `H_iA/(m_iA c^2) + H_iB/(m_iB c^2)`.
    pub t1: ArmPairOp,
    pub t2: ArmPairOp,
    pub delta: ArmPairOp,
    /// `N~ [ratio_difference (I + T1 - T2) + Delta]`.
    pub torque: ArmPairOp,
}

/// Torque operator to first order in `H/(m c^2)` for arms described by
/// `a` and `b`. Masses are classical arm totals; `T2` collects the expansion
/// of the fiber tension:
/// `T2 = [beta^2 M_i H_i + gamma^2 M_g H_g + (beta.gamma)(M_i H_g + M_g H_i)] / (|M_i beta + M_g gamma|^2 c^2)`
/// with `M_i, M_g, H_i, H_g` summed over both arms.
pub fn general_torque_operator(
    geo: &EotvosGeometry,
    bg: &BalanceGeometry,
    a: &MassHamiltonians,
    b: &MassHamiltonians,
    t: f64,
) -> Result<GeneralTorque> {
    if a.c != b.c {
        return Err(Error::param("c", "both arms must use the same c", b.c));
    }
    a.check_perturbative()?;
    b.check_perturbative()?;
    let c2 = a.c * a.c;
    let beta = beta_vector(geo, t);
    let gamma = gamma_vector(geo, t)?;
    let r = bg.r_ab();

    let m_i = a.m_i + b.m_i;
    let m_g = a.m_g + b.m_g;
    let v0 = beta * m_i + gamma * m_g;
    let prefactor = a.m_i * b.m_i * triple_over_net(&r, &beta, &gamma, &v0, t)?;
    let ratio_difference = a.m_g / a.m_i - b.m_g / b.m_i;

    let bb = beta.dot(&beta);
    let gg = gamma.dot(&gamma);
    let bgd = beta.dot(&gamma);
    let v2c2 = v0.dot(&v0) * c2;
    let t2_arm = |mh: &MassHamiltonians| {
        ((bb * m_i + bgd * m_g) / v2c2) * mh.h_i + ((gg * m_g + bgd * m_i) / v2c2) * mh.h_g
    };
    let t1 = ArmPairOp {
        identity: 0.0,
        arm_a: (1.0 / (a.m_i * c2)) * a.h_i,
        arm_b: (1.0 / (b.m_i * c2)) * b.h_i,
    };
    let t2 = ArmPairOp {
        identity: 0.0,
        arm_a: t2_arm(a),
        arm_b: t2_arm(b),
    };
    let delta_arm = |mh: &MassHamiltonians| {
        (1.0 / (mh.m_i * c2)) * mh.h_g - (mh.m_g / (mh.m_i * mh.m_i * c2)) * mh.h_i
    };
    let delta = ArmPairOp {
        identity: 0.0,
        arm_a: delta_arm(a),
        arm_b: -delta_arm(b),
    };
    let arm = |t1: HermitianOp2, t2: HermitianOp2, d: HermitianOp2| {
        prefactor * (ratio_difference * (t1 - t2) + d)
    };
    let torque = ArmPairOp {
        identity: prefactor * ratio_difference,
        arm_a: arm(t1.arm_a, t2.arm_a, delta.arm_a),
        arm_b: arm(t1.arm_b, t2.arm_b, delta.arm_b),
    };
    Ok(GeneralTorque {
        prefactor,
        ratio_difference,
        t1,
        t2,
        delta,
        torque,
    })
}
