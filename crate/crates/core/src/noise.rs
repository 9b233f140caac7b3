//! Thermal torque noise and the resulting sensitivity to the WEP-violating
//! variance of the Cavendish signal.
//!
//! Detectability is defined as the period-averaged variance signal
//! `N G <(P(t) sin(Omega t - Theta))^2>` reaching the noise-limited
//! angular-acceleration power `ASD^2 / (I^2 T_int)`, where `P(t)` is the
//! per-pair prefactor `G_N m_s (R_s/R_t)(R_+^-3 - R_-^-3)`.

use crate::cavendish::{r_plus_minus, CavendishConfig};
use crate::{Error, Result};

/// Samples per source period used for the signal-power average.
pub const PERIOD_SAMPLES: usize = 4096;

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, "must be > 0", v))
    }
}

/// Torsional oscillator in contact with a thermal bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorNoise {
    /// Torsional mode frequency (rad/s).
    pub omega_m: f64,
    pub quality_factor: f64,
    /// Moment of inertia (kg m^2).
    pub moment_of_inertia: f64,
    pub temperature: f64,
    pub k_b: f64,
}

impl OscillatorNoise {
    pub fn validate(&self) -> Result<()> {
        positive("omega_m", self.omega_m)?;
        positive("Q", self.quality_factor)?;
        positive("I", self.moment_of_inertia)?;
        positive("T", self.temperature)?;
        positive("k_B", self.k_b)
    }

    /// Damping rate `omega_m^2 / (omega Q)` at signal frequency `omega`.
    pub fn damping(&self, omega: f64) -> f64 {
        self.omega_m * self.omega_m / (omega * self.quality_factor)
    }
}

/// Amplitude spectral density `sqrt(4 gamma I k_B T)` of the thermal torque
/// (N m/sqrt(Hz)), valid well below the torsional mode frequency.
pub fn thermal_torque_asd(n: &OscillatorNoise, omega: f64) -> Result<f64> {
    n.validate()?;
    positive("omega", omega)?;
    Ok((4.0 * n.damping(omega) * n.moment_of_inertia * n.k_b * n.temperature).sqrt())
}

/// Quality factor at which [`thermal_torque_asd`] equals `target` at `omega`.
/// The `quality_factor` of `n` is ignored.
pub fn quality_factor_for_asd(n: &OscillatorNoise, omega: f64, target: f64) -> Result<f64> {
    positive("omega", omega)?;
    positive("target", target)?;
    let probe = OscillatorNoise {
        quality_factor: 1.0,
        ..*n
    };
    let at_unit_q = thermal_torque_asd(&probe, omega)?;
    Ok((at_unit_q / target).powi(2))
}

/// Instrument numbers for the variance measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityBudget {
    /// Torque amplitude spectral density (N m/sqrt(Hz)).
    pub torque_asd: f64,
    /// Integration time (s).
    pub integration_time: f64,
    /// Frequency at which `torque_asd` is quoted (rad/s).
    pub signal_freq: f64,
    /// Moment of inertia of the detector (kg m^2).
    pub moment_of_inertia: f64,
}

impl SensitivityBudget {
    pub fn validate(&self) -> Result<()> {
        positive("torque_asd", self.torque_asd)?;
        positive("integration_time", self.integration_time)?;
        positive("signal_freq", self.signal_freq)?;
        positive("moment_of_inertia", self.moment_of_inertia)
    }

    /// Noise-limited angular-acceleration power `ASD^2 / (I^2 T_int)`.
    pub fn acceleration_power(&self) -> f64 {
        (self.torque_asd / self.moment_of_inertia).powi(2) / self.integration_time
    }
}

/// `<(P(t) sin(Omega t - Theta))^2>` over one source period.
pub fn signal_power_per_pair(cfg: &CavendishConfig) -> Result<f64> {
    cfg.validate()?;
    positive("Omega", cfg.omega.abs())?;
    let mut sum = 0.0;
    for k in 0..PERIOD_SAMPLES {
        let t =
            (cfg.theta + 2.0 * std::f64::consts::PI * k as f64 / PERIOD_SAMPLES as f64) / cfg.omega;
        let (rp, rm) = r_plus_minus(cfg, t)?;
        let p = cfg.g_newton * cfg.m_s * (cfg.r_s / cfg.r_t) * (rp.powi(-3) - rm.powi(-3));
        sum += (p * cfg.phase(t).sin()).powi(2);
    }
    Ok(sum / PERIOD_SAMPLES as f64)
}

/// Smallest form factor `G` whose variance signal reaches the noise floor.
pub fn min_detectable_g(budget: &SensitivityBudget, cfg: &CavendishConfig) -> Result<f64> {
    budget.validate()?;
    let signal = cfg.n as f64 * signal_power_per_pair(cfg)?;
    if !(signal > 0.0) {
        return Err(Error::Singular("vanishing signal power".into()));
    }
    Ok(budget.acceleration_power() / signal)
}

/// Largest `|r|` compatible with `G <= g_min` for `r1 = r2`, using the
/// phase-averaged variance: `sqrt(g_min / (1 - n^2 sin^2 theta / 2))`.
pub fn r_bound_from_gmin(g_min: f64, n: f64, theta: f64) -> Result<f64> {
    if !(g_min >= 0.0 && g_min.is_finite()) {
        return Err(Error::param("G_min", "must be >= 0", g_min));
    }
    if !(0.0..=1.0).contains(&n) {
        return Err(Error::param("n", "0 <= n <= 1", n));
    }
    if !theta.is_finite() {
        return Err(Error::param("theta", "must be finite", theta));
    }
    let denom = 1.0 - 0.5 * n * n * theta.sin().powi(2);
    Ok((g_min / denom).sqrt())
}
