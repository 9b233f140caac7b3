//! TOML scenario files.
//!
//! One scenario per file. Every section rejects unknown keys, TOML itself
//! rejects duplicate keys, and every value is revalidated by the core types.
//! Angles are given in degrees under keys ending in `_deg` and converted to
//! radians here; everything else is SI.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use wep_torsim_core::cavendish::{CavendishConfig, QsnrGrid};
use wep_torsim_core::ensemble::RngSpec;
use wep_torsim_core::eotvos::ArmMasses;
use wep_torsim_core::frames::EotvosGeometry;
use wep_torsim_core::noise::{OscillatorNoise, SensitivityBudget};
use wep_torsim_core::state::{ArmState, BlochState};
use wep_torsim_core::wep::{WepParams, MAX_PREPARATION_ERROR};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Freefall,
    Eotvos,
    Cavendish,
    Montecarlo,
    Sweep,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Freefall => "freefall",
            Mode::Eotvos => "eotvos",
            Mode::Cavendish => "cavendish",
            Mode::Montecarlo => "montecarlo",
            Mode::Sweep => "sweep",
        }
    }

    fn sections(self) -> &'static [&'static str] {
        match self {
            Mode::Freefall => &["params", "state", "freefall"],
            Mode::Eotvos => &[
                "params", "state_a", "state_b", "geometry", "balance", "masses", "time",
            ],
            Mode::Cavendish => &[
                "params",
                "state",
                "cavendish",
                "time",
                "noise",
                "budget",
                "bound",
            ],
            Mode::Montecarlo => &["rng", "montecarlo"],
            Mode::Sweep => &["sweep"],
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<String>,
    params: Option<ParamsCfg>,
    state: Option<StateCfg>,
    state_a: Option<StateCfg>,
    state_b: Option<StateCfg>,
    geometry: Option<GeometryCfg>,
    balance: Option<BalanceCfg>,
    masses: Option<MassesCfg>,
    time: Option<TimeCfg>,
    cavendish: Option<CavendishCfg>,
    noise: Option<NoiseCfg>,
    budget: Option<BudgetCfg>,
    bound: Option<BoundCfg>,
    rng: Option<RngCfg>,
    montecarlo: Option<MonteCarloCfg>,
    sweep: Option<SweepCfg>,
    freefall: Option<FreefallCfg>,
}

impl RawConfig {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |name, set: bool| {
            if set {
                out.push(name)
            }
        };
        mark("params", self.params.is_some());
        mark("state", self.state.is_some());
        mark("state_a", self.state_a.is_some());
        mark("state_b", self.state_b.is_some());
        mark("geometry", self.geometry.is_some());
        mark("balance", self.balance.is_some());
        mark("masses", self.masses.is_some());
        mark("time", self.time.is_some());
        mark("cavendish", self.cavendish.is_some());
        mark("noise", self.noise.is_some());
        mark("budget", self.budget.is_some());
        mark("bound", self.bound.is_some());
        mark("rng", self.rng.is_some());
        mark("montecarlo", self.montecarlo.is_some());
        mark("sweep", self.sweep.is_some());
        mark("freefall", self.freefall.is_some());
        out
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsCfg {
    r1: f64,
    r2: f64,
    r_abs: f64,
    #[serde(default)]
    phi_r_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateCfg {
    n: f64,
    theta_deg: f64,
    #[serde(default)]
    phi_deg: f64,
    count: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryCfg {
    latitudes_deg: Option<Vec<f64>>,
    axial_tilt_deg: Option<f64>,
    spin_rate: Option<f64>,
    orbital_rate: Option<f64>,
    orbital_phase_deg: Option<f64>,
    earth_radius: Option<f64>,
    sun_distance: Option<f64>,
    g_earth: Option<f64>,
    g_newton: Option<f64>,
    sun_mass: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BalanceCfg {
    length: f64,
    theta_tilde_deg: Option<Vec<f64>>,
    #[serde(default)]
    phi_tilde_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MassesCfg {
    m_a: f64,
    m_b: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeCfg {
    start: Option<f64>,
    stop: f64,
    steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CavendishCfg {
    m_s: f64,
    r_s: f64,
    r_t: f64,
    omega: f64,
    #[serde(default)]
    theta_deg: f64,
    m: f64,
    n: u64,
    g_newton: Option<f64>,
    delta_alpha_cl_rel: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseCfg {
    omega_m: f64,
    quality_factor: f64,
    moment_of_inertia: f64,
    temperature: f64,
    k_b: Option<f64>,
    signal_freq: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BudgetCfg {
    torque_asd: f64,
    integration_time: f64,
    signal_freq: f64,
    moment_of_inertia: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundCfg {
    n: f64,
    #[serde(default)]
    theta_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RngCfg {
    algorithm: Option<String>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonteCarloCfg {
    samples: Option<u64>,
    bins: Option<usize>,
    checkpoints: Option<Vec<u64>>,
}

/// A sweep axis: one value, an explicit list, or an inclusive linear range.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum AxisCfg {
    Value(f64),
    List(Vec<f64>),
    Range(RangeCfg),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RangeCfg {
    start: f64,
    stop: f64,
    steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepCfg {
    n: Option<AxisCfg>,
    theta_deg: Option<AxisCfg>,
    phi_deg: Option<AxisCfg>,
    r_abs: Option<AxisCfg>,
    phi_r_deg: Option<AxisCfg>,
    n_pairs: Option<u64>,
    delta_alpha_cl_rel: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FreefallCfg {
    g: Option<f64>,
    phi_steps: Option<usize>,
    epsilon_max_deg: Option<f64>,
    epsilon_steps: Option<usize>,
}

/// Inclusive grid `start..=stop` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.steps)
    }
}

pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreefallScenario {
    pub params: WepParams,
    /// Bloch state; its phase is replaced by the grid values.
    pub state: BlochState,
    pub g: f64,
    pub phi_steps: usize,
    pub epsilon_max: f64,
    pub epsilon_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EotvosScenario {
    pub geo: EotvosGeometry,
    pub latitudes_deg: Vec<f64>,
    pub length: f64,
    pub theta_tilde_deg: Vec<f64>,
    pub phi_tilde: f64,
    pub masses: ArmMasses,
    pub params: WepParams,
    pub arm_a: ArmState,
    pub arm_b: ArmState,
    pub time: TimeGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseScenario {
    pub oscillator: OscillatorNoise,
    pub signal_freq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CavendishScenario {
    pub cfg: CavendishConfig,
    pub params: WepParams,
    pub state: BlochState,
    pub time: TimeGrid,
    pub delta_alpha_cl_rel: Option<f64>,
    pub noise: Option<NoiseScenario>,
    pub budget: Option<SensitivityBudget>,
    /// `(n, theta)` used to turn `G_min` into a bound on `|r|`.
    pub bound: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloScenario {
    pub rng: RngSpec,
    pub samples: u64,
    pub bins: usize,
    pub checkpoints: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepScenario {
    pub grid: QsnrGrid,
    pub n_pairs: u64,
    pub delta_alpha_cl_rel: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Freefall(FreefallScenario),
    Eotvos(EotvosScenario),
    Cavendish(CavendishScenario),
    Montecarlo(MonteCarloScenario),
    Sweep(SweepScenario),
}

/// A validated scenario together with the hash of the file it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub scenario: Scenario,
    pub sha256: String,
    /// Seed recorded in the output metadata.
    pub seed: u64,
}

fn bad(section: &str, e: impl fmt::Display) -> CliError {
    CliError::Config(format!("[{section}]: {e}"))
}

fn missing(section: &str, mode: Mode) -> CliError {
    CliError::Config(format!(
        "missing section [{section}] required by {mode} mode"
    ))
}

fn check_positive(section: &str, key: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(section, format!("{key} must be > 0 (got {v})")))
    }
}

fn params(raw: &Option<ParamsCfg>) -> Result<WepParams, CliError> {
    match raw {
        None => Ok(WepParams::WEP),
        Some(p) => WepParams::new(p.r1, p.r2, p.r_abs, p.phi_r_deg.to_radians())
            .map_err(|e| bad("params", e)),
    }
}

fn bloch(section: &str, s: &StateCfg) -> Result<BlochState, CliError> {
    BlochState::new(s.n, s.theta_deg.to_radians(), s.phi_deg.to_radians())
        .map_err(|e| bad(section, e))
}

fn arm(section: &str, s: &Option<StateCfg>, mode: Mode) -> Result<ArmState, CliError> {
    let s = s.as_ref().ok_or_else(|| missing(section, mode))?;
    let count = s
        .count
        .ok_or_else(|| bad(section, "count (number of two-level systems) is required"))?;
    ArmState::new(bloch(section, s)?, count).map_err(|e| bad(section, e))
}

fn time_grid(raw: &Option<TimeCfg>, default: TimeGrid) -> Result<TimeGrid, CliError> {
    let grid = match raw {
        None => default,
        Some(t) => TimeGrid {
            start: t.start.unwrap_or(0.0),
            stop: t.stop,
            steps: t.steps,
        },
    };
    if grid.steps == 0 {
        return Err(bad("time", "steps must be >= 1"));
    }
    if !(grid.start.is_finite() && grid.stop.is_finite()) {
        return Err(bad("time", "start and stop must be finite"));
    }
    Ok(grid)
}

fn axis(name: &str, raw: &Option<AxisCfg>, default: f64, scale: f64) -> Result<Vec<f64>, CliError> {
    let values = match raw {
        None => vec![default],
        Some(AxisCfg::Value(v)) => vec![*v],
        Some(AxisCfg::List(v)) => v.clone(),
        Some(AxisCfg::Range(r)) => {
            if r.steps == 0 {
                return Err(bad("sweep", format!("{name}.steps must be >= 1")));
            }
            linspace(r.start, r.stop, r.steps)
        }
    };
    if values.is_empty() {
        return Err(bad("sweep", format!("{name} must not be empty")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("sweep", format!("{name} values must be finite")));
    }
    Ok(values.into_iter().map(|v| v * scale).collect())
}

/// 1, 2, 5, 10, 20, 50, ... up to and including `samples`.
pub fn default_checkpoints(samples: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            let c = m * decade;
            if c >= samples {
                break 'outer;
            }
            if c >= 10 {
                out.push(c);
            }
        }
        decade *= 10;
    }
    out.push(samples);
    out
}

fn geometry(raw: &Option<GeometryCfg>) -> Result<(EotvosGeometry, Vec<f64>), CliError> {
    let mut geo = EotvosGeometry::default();
    let mut lats = vec![45.0];
    if let Some(g) = raw {
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut geo.axial_tilt, g.axial_tilt_deg.map(f64::to_radians));
        set(&mut geo.spin_rate, g.spin_rate);
        set(&mut geo.orbital_rate, g.orbital_rate);
        set(
            &mut geo.orbital_phase,
            g.orbital_phase_deg.map(f64::to_radians),
        );
        set(&mut geo.earth_radius, g.earth_radius);
        set(&mut geo.sun_distance, g.sun_distance);
        set(&mut geo.g_earth, g.g_earth);
        set(&mut geo.g_newton, g.g_newton);
        set(&mut geo.sun_mass, g.sun_mass);
        if let Some(l) = &g.latitudes_deg {
            lats = l.clone();
        }
    }
    if lats.is_empty() {
        return Err(bad("geometry", "latitudes_deg must not be empty"));
    }
    for &lat in &lats {
        geo.with_latitude(lat.to_radians())
            .validate()
            .map_err(|e| bad("geometry", e))?;
    }
    Ok((geo, lats))
}

fn build(
    mode: Mode,
    raw: RawConfig,
    seed_override: Option<u64>,
) -> Result<(Scenario, u64), CliError> {
    if let Some(m) = &raw.mode {
        if m != mode.name() {
            return Err(CliError::Config(format!(
                "config declares mode = {m:?} but {mode} was requested"
            )));
        }
    }
    let allowed = mode.sections();
    if let Some(extra) = raw.present().into_iter().find(|s| !allowed.contains(s)) {
        return Err(CliError::Config(format!(
            "section [{extra}] is not used in {mode} mode"
        )));
    }
    let mut seed = seed_override.unwrap_or(0);

    let scenario = match mode {
        Mode::Freefall => {
            let s = raw.state.as_ref().ok_or_else(|| missing("state", mode))?;
            if s.count.is_some() {
                return Err(bad("state", "count is not used in freefall mode"));
            }
            let ff = raw.freefall.clone();
            let g = ff.as_ref().and_then(|f| f.g).unwrap_or(9.81);
            check_positive("freefall", "g", g)?;
            let epsilon_max = ff
                .as_ref()
                .and_then(|f| f.epsilon_max_deg)
                .unwrap_or(15.0)
                .to_radians();
            if !(0.0..MAX_PREPARATION_ERROR).contains(&epsilon_max) {
                return Err(bad(
                    "freefall",
                    format!(
                        "epsilon_max_deg must lie in [0, {:.4})",
                        MAX_PREPARATION_ERROR.to_degrees()
                    ),
                ));
            }
            let phi_steps = ff.as_ref().and_then(|f| f.phi_steps).unwrap_or(72);
            let epsilon_steps = ff.as_ref().and_then(|f| f.epsilon_steps).unwrap_or(31);
            if phi_steps == 0 || epsilon_steps == 0 {
                return Err(bad("freefall", "phi_steps and epsilon_steps must be >= 1"));
            }
            Scenario::Freefall(FreefallScenario {
                params: params(&raw.params)?,
                state: bloch("state", s)?,
                g,
                phi_steps,
                epsilon_max,
                epsilon_steps,
            })
        }
        Mode::Eotvos => {
            let (geo, latitudes_deg) = geometry(&raw.geometry)?;
            let b = raw
                .balance
                .as_ref()
                .ok_or_else(|| missing("balance", mode))?;
            check_positive("balance", "length", b.length)?;
            let theta_tilde_deg = b.theta_tilde_deg.clone().unwrap_or_else(|| vec![0.0, 45.0]);
            if theta_tilde_deg.is_empty() || theta_tilde_deg.iter().any(|v| !v.is_finite()) {
                return Err(bad(
                    "balance",
                    "theta_tilde_deg must be a non-empty list of finite values",
                ));
            }
            let m = raw.masses.as_ref().ok_or_else(|| missing("masses", mode))?;
            let masses = ArmMasses::new(m.m_a, m.m_b).map_err(|e| bad("masses", e))?;
            Scenario::Eotvos(EotvosScenario {
                geo,
                latitudes_deg,
                length: b.length,
                theta_tilde_deg,
                phi_tilde: b.phi_tilde_deg.to_radians(),
                masses,
                params: params(&raw.params)?,
                arm_a: arm("state_a", &raw.state_a, mode)?,
                arm_b: arm("state_b", &raw.state_b, mode)?,
                time: time_grid(
                    &raw.time,
                    TimeGrid {
                        start: 0.0,
                        stop: 86_400.0,
                        steps: 97,
                    },
                )?,
            })
        }
        Mode::Cavendish => {
            let c = raw
                .cavendish
                .as_ref()
                .ok_or_else(|| missing("cavendish", mode))?;
            let cfg = CavendishConfig {
                m_s: c.m_s,
                r_s: c.r_s,
                r_t: c.r_t,
                omega: c.omega,
                theta: c.theta_deg.to_radians(),
                m: c.m,
                n: c.n,
                g_newton: c.g_newton.unwrap_or(wep_torsim_core::G_NEWTON),
            };
            cfg.validate().map_err(|e| bad("cavendish", e))?;
            if let Some(rel) = c.delta_alpha_cl_rel {
                if !(rel >= 0.0 && rel.is_finite()) {
                    return Err(bad(
                        "cavendish",
                        format!("delta_alpha_cl_rel must be >= 0 (got {rel})"),
                    ));
                }
            }
            let default_time = TimeGrid {
                start: 0.0,
                stop: if cfg.omega != 0.0 { cfg.period() } else { 1.0 },
                steps: 101,
            };
            let noise = match &raw.noise {
                None => None,
                Some(n) => {
                    let oscillator = OscillatorNoise {
                        omega_m: n.omega_m,
                        quality_factor: n.quality_factor,
                        moment_of_inertia: n.moment_of_inertia,
                        temperature: n.temperature,
                        k_b: n.k_b.unwrap_or(wep_torsim_core::K_BOLTZMANN),
                    };
                    oscillator.validate().map_err(|e| bad("noise", e))?;
                    check_positive("noise", "signal_freq", n.signal_freq)?;
                    Some(NoiseScenario {
                        oscillator,
                        signal_freq: n.signal_freq,
                    })
                }
            };
            let budget = match &raw.budget {
                None => None,
                Some(b) => {
                    let budget = SensitivityBudget {
                        torque_asd: b.torque_asd,
                        integration_time: b.integration_time,
                        signal_freq: b.signal_freq,
                        moment_of_inertia: b.moment_of_inertia,
                    };
                    budget.validate().map_err(|e| bad("budget", e))?;
                    if cfg.omega == 0.0 {
                        return Err(bad(
                            "cavendish",
                            "omega must be nonzero for a sensitivity budget",
                        ));
                    }
                    Some(budget)
                }
            };
            let bound = match &raw.bound {
                None => (0.0, 0.0),
                Some(b) => {
                    if !(0.0..=1.0).contains(&b.n) {
                        return Err(bad("bound", format!("0 <= n <= 1 (got {})", b.n)));
                    }
                    (b.n, b.theta_deg.to_radians())
                }
            };
            if raw.bound.is_some() && budget.is_none() {
                return Err(bad("bound", "requires a [budget] section"));
            }
            if let Some(s) = &raw.state {
                if s.count.is_some() {
                    return Err(bad("state", "count is set by [cavendish] n"));
                }
            }
            let params = params(&raw.params)?;
            if c.delta_alpha_cl_rel.is_some()
                && ((params.r1() - 1.0).abs() > 1e-12 || (params.r2() - 1.0).abs() > 1e-12)
            {
                return Err(bad(
                    "cavendish",
                    "delta_alpha_cl_rel (qSNR) requires params r1 = r2 = 1",
                ));
            }
            Scenario::Cavendish(CavendishScenario {
                cfg,
                params,
                state: match &raw.state {
                    Some(s) => bloch("state", s)?,
                    None => BlochState::maximally_mixed(),
                },
                time: time_grid(&raw.time, default_time)?,
                delta_alpha_cl_rel: c.delta_alpha_cl_rel,
                noise,
                budget,
                bound,
            })
        }
        Mode::Montecarlo => {
            let r = raw.rng.clone();
            let algorithm = r.as_ref().and_then(|r| r.algorithm.clone());
            let algorithm = algorithm
                .as_deref()
                .unwrap_or(wep_torsim_core::ensemble::CHACHA8);
            seed = seed_override
                .or(r.as_ref().and_then(|r| r.seed))
                .unwrap_or(0);
            let rng = RngSpec::new(algorithm, seed).map_err(|e| bad("rng", e))?;
            let mc = raw.montecarlo.clone();
            let samples = mc.as_ref().and_then(|m| m.samples).unwrap_or(100_000);
            if samples < 2 {
                return Err(bad(
                    "montecarlo",
                    format!("samples must be >= 2 (got {samples})"),
                ));
            }
            let bins = mc.as_ref().and_then(|m| m.bins).unwrap_or(50);
            if bins == 0 {
                return Err(bad("montecarlo", "bins must be >= 1"));
            }
            let checkpoints = match mc.as_ref().and_then(|m| m.checkpoints.clone()) {
                None => default_checkpoints(samples),
                Some(c) => {
                    if c.is_empty()
                        || c.windows(2).any(|w| w[0] >= w[1])
                        || c[0] < 2
                        || *c.last().unwrap() > samples
                    {
                        return Err(bad(
                            "montecarlo",
                            "checkpoints must be strictly increasing, >= 2 and <= samples",
                        ));
                    }
                    c
                }
            };
            Scenario::Montecarlo(MonteCarloScenario {
                rng,
                samples,
                bins,
                checkpoints,
            })
        }
        Mode::Sweep => {
            let s = raw.sweep.as_ref().ok_or_else(|| missing("sweep", mode))?;
            let deg = PI / 180.0;
            let grid = QsnrGrid {
                n: axis("n", &s.n, 1.0, 1.0)?,
                theta: axis("theta_deg", &s.theta_deg, 90.0, deg)?,
                phi: axis("phi_deg", &s.phi_deg, 0.0, deg)?,
                r_abs: axis("r_abs", &s.r_abs, 1e-3, 1.0)?,
                phi_r: axis("phi_r_deg", &s.phi_r_deg, 0.0, deg)?,
            };
            if grid.n.iter().any(|n| !(0.0..=1.0).contains(n)) {
                return Err(bad("sweep", "n values must satisfy 0 <= n <= 1"));
            }
            if grid.theta.iter().any(|t| !(0.0..=PI + 1e-12).contains(t)) {
                return Err(bad("sweep", "theta_deg values must lie in [0, 180]"));
            }
            if grid.r_abs.iter().any(|r| *r < 0.0) {
                return Err(bad("sweep", "r_abs values must be >= 0"));
            }
            let n_pairs = s.n_pairs.unwrap_or(100_000);
            if n_pairs == 0 {
                return Err(bad("sweep", "n_pairs must be >= 1"));
            }
            let rel = s.delta_alpha_cl_rel.unwrap_or(1e-5);
            if !(rel >= 0.0 && rel.is_finite()) {
                return Err(bad(
                    "sweep",
                    format!("delta_alpha_cl_rel must be >= 0 (got {rel})"),
                ));
            }
            Scenario::Sweep(SweepScenario {
                grid,
                n_pairs,
                delta_alpha_cl_rel: rel,
            })
        }
    };
    Ok((scenario, seed))
}

/// Parses and validates a scenario held in memory.
pub fn parse_config(text: &str, mode: Mode, seed: Option<u64>) -> Result<ScenarioConfig, CliError> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| CliError::Config(format!("parse error: {e}")))?;
    let (scenario, seed) = build(mode, raw, seed)?;
    Ok(ScenarioConfig {
        mode,
        scenario,
        sha256: sha256_hex(text.as_bytes()),
        seed,
    })
}

pub fn load_config(path: &Path, mode: Mode, seed: Option<u64>) -> Result<ScenarioConfig, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Config(format!("{} is not valid UTF-8", path.display())))?;
    parse_config(&text, mode, seed)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
