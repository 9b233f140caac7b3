//! Dynamical Cavendish configuration: a torsion balance between two source
//! masses rotating at constant angular speed.
//!
//! Everything lives in the balance plane. Test mass A sits at
//! `R_t (cos Theta, sin Theta)` and B at the opposite point; the sources sit at
//! `+-R_s (cos Omega t, sin Omega t)`. Fields are attractive Newtonian fields,
//! and the angular acceleration follows from `R_t x g` with the moment of
//! inertia `I = R_t^2 (M_A + M_B)`, summed over `N` pairs. With this chain the
//! classical acceleration carries `sin(Theta - Omega t)`.

use std::f64::consts::PI;

use crate::frames::Vec3;
use crate::state::BlochState;
use crate::wep::{form_factor_f, form_factor_g, WepParams};
use crate::{Error, Result};

/// Returned by the qSNR functions when both quantum and classical variances
/// vanish but the signal does not.
pub const QSNR_CAP: f64 = 1e9;
/// Variances below this are treated as zero by the qSNR functions.
pub const QSNR_TINY: f64 = 1e-300;
/// Largest `R_t/R_s` for which the far-field forms are considered reliable.
pub const FAR_FIELD_LIMIT: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavendishConfig {
    /// Mass of each source (kg).
    pub m_s: f64,
    /// Radius of the source orbit (m).
    pub r_s: f64,
    /// Radius of the test masses (m).
    pub r_t: f64,
    /// Angular speed of the sources (rad/s).
    pub omega: f64,
    /// Balance angle (rad).
    pub theta: f64,
    /// Mass of one two-level system (kg).
    pub m: f64,
    /// Number of pairs.
    pub n: u64,
    pub g_newton: f64,
}

impl CavendishConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("m_s", self.m_s),
            ("R_s", self.r_s),
            ("R_t", self.r_t),
            ("m", self.m),
            ("G_N", self.g_newton),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, "must be > 0", v));
            }
        }
        if self.r_t == self.r_s {
            return Err(Error::param("R_t", "R_t != R_s", self.r_t));
        }
        if !(self.omega.is_finite() && self.theta.is_finite()) {
            return Err(Error::param("Omega/Theta", "must be finite", f64::NAN));
        }
        if self.n == 0 {
            return Err(Error::param("N", "N >= 1", 0.0));
        }
        Ok(())
    }

    /// `Omega t - Theta`.
    pub fn phase(&self, t: f64) -> f64 {
        self.omega * t - self.theta
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega.abs()
    }

    pub fn test_position(&self) -> Vec3 {
        let (s, c) = self.theta.sin_cos();
        Vec3::new(c, s, 0.0) * self.r_t
    }

    pub fn source_position(&self, t: f64) -> Vec3 {
        let (s, c) = (self.omega * t).sin_cos();
        Vec3::new(c, s, 0.0) * self.r_s
    }

    /// `G_N m_s (R_s/R_t)(R_+^-3 - R_-^-3)` per pair.
    fn prefactor(&self, t: f64) -> Result<f64> {
        let (rp, rm) = r_plus_minus(self, t)?;
        Ok(self.g_newton * self.m_s * (self.r_s / self.r_t) * (rp.powi(-3) - rm.powi(-3)))
    }

    /// Per-pair classical angular acceleration.
    fn alpha_pair(&self, t: f64) -> Result<f64> {
        Ok(self.prefactor(t)? * (-self.phase(t)).sin())
    }
}

/// `R_+- = sqrt(R_t^2 + R_s^2 +- 2 R_t R_s cos(Omega t - Theta))`.
pub fn r_plus_minus(cfg: &CavendishConfig, t: f64) -> Result<(f64, f64)> {
    let base = cfg.r_t * cfg.r_t + cfg.r_s * cfg.r_s;
    let cross = 2.0 * cfg.r_t * cfg.r_s * cfg.phase(t).cos();
    let rp = (base + cross).max(0.0).sqrt();
    let rm = (base - cross).max(0.0).sqrt();
    if !(rp > 0.0 && rm > 0.0) {
        return Err(Error::Singular(format!(
            "test mass coincides with a source at t = {t} (R_t = {}, R_s = {})",
            cfg.r_t, cfg.r_s
        )));
    }
    Ok((rp, rm))
}

/// Newtonian fields of both sources at the two test masses.
pub fn g_fields(cfg: &CavendishConfig, t: f64) -> Result<(Vec3, Vec3)> {
    let src = cfg.source_position(t);
    let at = |x: Vec3| -> Result<Vec3> {
        let mut g = Vec3::ZERO;
        for s in [src, -src] {
            let d = s - x;
            let dist = d.norm();
            if !(dist > 0.0) {
                return Err(Error::Singular(format!(
                    "test mass coincides with a source at t = {t}"
                )));
            }
            g = g + d * (cfg.g_newton * cfg.m_s / dist.powi(3));
        }
        Ok(g)
    };
    let x = cfg.test_position();
    Ok((at(x)?, at(-x)?))
}

/// `N G_N m_s (R_s/R_t)(R_+^-3 - R_-^-3) sin(Theta - Omega t)`.
pub fn alpha_classical(cfg: &CavendishConfig, t: f64) -> Result<f64> {
    Ok(cfg.n as f64 * cfg.alpha_pair(t)?)
}

/// Mean angular acceleration with every two-level system prepared in `s`:
/// `alpha_cl F`.
pub fn alpha_mean(cfg: &CavendishConfig, p: &WepParams, s: &BlochState, t: f64) -> Result<f64> {
    Ok(alpha_classical(cfg, t)? * form_factor_f(p, s))
}

/// `N [G_N m_s (R_s/R_t)(R_+^-3 - R_-^-3)]^2 sin^2(Omega t - Theta) G`.
pub fn alpha_variance(cfg: &CavendishConfig, p: &WepParams, s: &BlochState, t: f64) -> Result<f64> {
    let pair = cfg.alpha_pair(t)?;
    Ok(cfg.n as f64 * pair * pair * form_factor_g(p, s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarField {
    pub mean: f64,
    pub variance: f64,
    /// False when `R_t/R_s` exceeds [`FAR_FIELD_LIMIT`]; the values are still
    /// returned.
    pub within_validity: bool,
}

/// Leading order in `R_t/R_s`:
/// mean `3 N G_N m_s / R_s^3 sin(2 Omega t - 2 Theta) F`,
/// variance `9 N G_N^2 m_s^2 / R_s^6 sin^2(2 Omega t - 2 Theta) G`.
pub fn alpha_far_field(cfg: &CavendishConfig, p: &WepParams, s: &BlochState, t: f64) -> FarField {
    let n = cfg.n as f64;
    let k = 3.0 * cfg.g_newton * cfg.m_s / cfg.r_s.powi(3);
    let s2 = (2.0 * cfg.phase(t)).sin();
    FarField {
        mean: n * k * s2 * form_factor_f(p, s),
        variance: n * k * k * s2 * s2 * form_factor_g(p, s),
        within_validity: cfg.r_t / cfg.r_s < FAR_FIELD_LIMIT,
    }
}

fn check_unit_diagonal(p: &WepParams) -> Result<()> {
    if (p.r1() - 1.0).abs() > 1e-12 || (p.r2() - 1.0).abs() > 1e-12 {
        return Err(Error::Regime(format!(
            "qSNR requires r1 = r2 = 1, got r1 = {}, r2 = {}",
            p.r1(),
            p.r2()
        )));
    }
    Ok(())
}

fn ratio_or_cap(num: f64, var: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if var < QSNR_TINY {
        QSNR_CAP
    } else {
        (num / var.sqrt()).min(QSNR_CAP)
    }
}

/// `|<alpha> - alpha_cl| / sqrt(Var(alpha) + delta_alpha_cl^2)`, with the
/// classical uncertainty `delta_alpha_cl` in rad/s^2.
///
/// Also evaluates the reduced form in terms of `delta_alpha_cl/alpha_cl` and
/// fails if the two disagree. Requires `r1 = r2 = 1`.
pub fn qsnr(
    cfg: &CavendishConfig,
    p: &WepParams,
    s: &BlochState,
    t: f64,
    delta_alpha_cl: f64,
) -> Result<f64> {
    check_unit_diagonal(p)?;
    if !(delta_alpha_cl >= 0.0 && delta_alpha_cl.is_finite()) {
        return Err(Error::param(
            "delta_alpha_cl",
            "must be >= 0",
            delta_alpha_cl,
        ));
    }
    let cl = alpha_classical(cfg, t)?;
    let num = (alpha_mean(cfg, p, s, t)? - cl).abs();
    let var = alpha_variance(cfg, p, s, t)? + delta_alpha_cl * delta_alpha_cl;
    let direct = ratio_or_cap(num, var);
    if cl == 0.0 || num == 0.0 {
        return Ok(direct);
    }
    let reduced = qsnr_relative(p, s, cfg.n, delta_alpha_cl / cl.abs())?;
    // The direct numerator is a difference of nearly equal numbers.
    let tol = 1e-10 * reduced.max(1e-300) + 4.0 * f64::EPSILON * cl.abs() / var.sqrt();
    if direct < QSNR_CAP && reduced < QSNR_CAP && (direct - reduced).abs() > tol {
        return Err(Error::InvalidState(format!(
            "qSNR forms disagree: {direct} vs {reduced}"
        )));
    }
    Ok(direct)
}

/// `n|r||cos(phi_r+phi) sin theta| / sqrt(|r|^2/N (1 - n^2 cos^2(phi_r+phi) sin^2 theta) + rel^2)`
/// with `rel = delta_alpha_cl/alpha_cl`. Requires `r1 = r2 = 1`.
pub fn qsnr_relative(p: &WepParams, s: &BlochState, n_pairs: u64, rel: f64) -> Result<f64> {
    check_unit_diagonal(p)?;
    if n_pairs == 0 {
        return Err(Error::param("N", "N >= 1", 0.0));
    }
    if !(rel >= 0.0 && rel.is_finite()) {
        return Err(Error::param("delta_alpha_cl/alpha_cl", "must be >= 0", rel));
    }
    let x = s.n() * (p.phi_r() + s.phi()).cos() * s.theta().sin();
    let num = (p.r_abs() * x).abs();
    let var = p.r_abs().powi(2) / n_pairs as f64 * (1.0 - x * x).max(0.0) + rel * rel;
    Ok(ratio_or_cap(num, var))
}

/// Cartesian grid for [`qsnr_sweep`]; angles in radians.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QsnrGrid {
    pub n: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub r_abs: Vec<f64>,
    pub phi_r: Vec<f64>,
}

impl QsnrGrid {
    pub fn len(&self) -> usize {
        self.n.len() * self.theta.len() * self.phi.len() * self.r_abs.len() * self.phi_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid point `i` in row-major order with `phi_r` varying fastest.
    pub fn point(&self, i: usize) -> [f64; 5] {
        let mut rest = i;
        let mut take = |axis: &Vec<f64>| {
            let v = axis[rest % axis.len()];
            rest /= axis.len();
            v
        };
        let phi_r = take(&self.phi_r);
        let r_abs = take(&self.r_abs);
        let phi = take(&self.phi);
        let theta = take(&self.theta);
        let n = take(&self.n);
        [n, theta, phi, r_abs, phi_r]
    }
}

pub const QSNR_COLUMNS: [&str; 6] = ["n", "theta", "phi", "r_abs", "phi_r", "qsnr"];

/// One row `(n, theta, phi, |r|, phi_r, qSNR)` of a sweep.
pub fn qsnr_row(point: [f64; 5], n_pairs: u64, rel: f64) -> Result<[f64; 6]> {
    let [n, theta, phi, r_abs, phi_r] = point;
    let s = BlochState::new(n, theta, phi)?;
    let p = WepParams::new(1.0, 1.0, r_abs, phi_r)?;
    let q = qsnr_relative(&p, &s, n_pairs, rel)?;
    Ok([n, theta, phi, r_abs, phi_r, q])
}

/// Evaluates every grid point in index order.
pub fn qsnr_sweep(grid: &QsnrGrid, n_pairs: u64, rel: f64) -> Result<Vec<[f64; 6]>> {
    (0..grid.len())
        .map(|i| qsnr_row(grid.point(i), n_pairs, rel))
        .collect()
}
