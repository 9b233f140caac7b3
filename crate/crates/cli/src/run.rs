//! Table definitions per mode, parallel evaluation and `--verify`.
//!
//! Every table is a list of input rows plus a function from inputs to the
//! remaining columns. The same definitions drive generation and
//! verification, so a CSV row can always be recomputed from its own leading
//! columns.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;
use wep_torsim_core::cavendish::{
    alpha_classical, alpha_far_field, alpha_mean, alpha_variance, qsnr, qsnr_row, r_plus_minus,
};
use wep_torsim_core::ensemble::{
    cos_gamma_experiment, par_ensemble_average, Histogram, DEFAULT_CHUNK,
};
use wep_torsim_core::eotvos::{
    mean_from_tau0, phase_averaged_torque_mean, tau0, variance_from_tau0, TorqueScenario,
};
use wep_torsim_core::frames::{fiber_tilt, BalanceGeometry};
use wep_torsim_core::linalg2::{expectation, variance};
use wep_torsim_core::noise::{
    min_detectable_g, r_bound_from_gmin, signal_power_per_pair, thermal_torque_asd,
};
use wep_torsim_core::wep::{
    acceleration_operator, eotvos_ratio, form_factor_f, form_factor_g, phase_averaged_f,
    phase_averaged_g, robustness_mean, robustness_variance, robustness_variance_phase_avg,
    WepParams,
};

use crate::config::{linspace, Scenario, ScenarioConfig};
use crate::table::{format_f64, read_csv, ResultTable};
use crate::{CliError, TOOL_VERSION};

/// Every `VERIFY_STRIDE`-th row (and the last) is recomputed by `--verify`.
pub const VERIFY_STRIDE: usize = 100;
pub const MANIFEST: &str = "manifest.txt";

type RowFn<'a> = Box<dyn Fn(&[f64]) -> wep_torsim_core::Result<Vec<f64>> + Sync + 'a>;

struct TableSpec<'a> {
    name: &'static str,
    columns: Vec<&'static str>,
    inputs: Vec<Vec<f64>>,
    row: RowFn<'a>,
}

impl TableSpec<'_> {
    fn input_count(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }

    fn eval(&self, inputs: &[f64]) -> Result<Vec<f64>, CliError> {
        let out = (self.row)(inputs).map_err(|e| {
            let mut ctx = String::new();
            for (c, v) in self.columns.iter().zip(inputs) {
                let _ = write!(ctx, " {c}={}", format_f64(*v));
            }
            CliError::Numerical(format!(
                "{} at{}: {e}",
                self.name,
                if ctx.is_empty() { " -" } else { &ctx }
            ))
        })?;
        let mut full = inputs.to_vec();
        full.extend(out);
        Ok(full)
    }

    /// Rows in input order whatever the pool size; the first failing row in
    /// that order is reported.
    fn compute(&self) -> Result<Vec<Vec<f64>>, CliError> {
        let rows: Vec<Result<Vec<f64>, CliError>> =
            self.inputs.par_iter().map(|i| self.eval(i)).collect();
        rows.into_iter().collect()
    }
}

fn metadata(cfg: &ScenarioConfig, table: &str) -> Vec<(String, String)> {
    vec![
        ("tool".into(), TOOL_VERSION.into()),
        ("mode".into(), cfg.mode.name().into()),
        ("config_sha256".into(), cfg.sha256.clone()),
        ("seed".into(), cfg.seed.to_string()),
        ("table".into(), table.into()),
    ]
}

fn grid3(a: &[f64], b: &[f64], c: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for &x in a {
        for &y in b {
            for &z in c {
                out.push(vec![x, y, z]);
            }
        }
    }
    out
}

fn column(values: Vec<f64>) -> Vec<Vec<f64>> {
    values.into_iter().map(|v| vec![v]).collect()
}

fn specs(cfg: &ScenarioConfig) -> Vec<TableSpec<'_>> {
    match &cfg.scenario {
        Scenario::Freefall(s) => {
            let phis = linspace(-std::f64::consts::PI, std::f64::consts::PI, s.phi_steps + 1);
            let phis = phis[..s.phi_steps].to_vec();
            vec![
                TableSpec {
                    name: "freefall_phase",
                    columns: vec![
                        "phi_rad",
                        "f",
                        "g",
                        "accel_mean",
                        "accel_variance",
                        "accel_mean_trace",
                        "accel_variance_trace",
                    ],
                    inputs: column(phis),
                    row: Box::new(move |x| {
                        let state = s.state.with_phi(x[0])?;
                        let op = acceleration_operator(&s.params, s.g)?;
                        let rho = state.density_matrix();
                        let f = form_factor_f(&s.params, &state);
                        let g = form_factor_g(&s.params, &state);
                        Ok(vec![
                            f,
                            g,
                            s.g * f,
                            s.g * s.g * g,
                            expectation(&op, &rho)?,
                            variance(&op, &rho)?,
                        ])
                    }),
                },
                TableSpec {
                    name: "freefall_summary",
                    columns: vec!["f_phase_avg", "g_phase_avg", "eta_vs_wep_body"],
                    inputs: vec![vec![]],
                    row: Box::new(move |_| {
                        Ok(vec![
                            phase_averaged_f(&s.params, &s.state),
                            phase_averaged_g(&s.params, &s.state),
                            eotvos_ratio(&s.params, &s.state, &WepParams::WEP, &s.state, s.g)?,
                        ])
                    }),
                },
                TableSpec {
                    name: "robustness",
                    columns: vec![
                        "epsilon_rad",
                        "mean_gamma0",
                        "variance_gamma0",
                        "variance_phase_avg",
                    ],
                    inputs: column(linspace(0.0, s.epsilon_max, s.epsilon_steps)),
                    row: Box::new(move |x| {
                        Ok(vec![
                            robustness_mean(&s.params, x[0], 0.0)?,
                            robustness_variance(&s.params, x[0], 0.0)?,
                            robustness_variance_phase_avg(&s.params, x[0])?,
                        ])
                    }),
                },
            ]
        }
        Scenario::Eotvos(s) => vec![TableSpec {
            name: "eotvos_torque",
            columns: vec![
                "latitude_deg",
                "theta_tilde_deg",
                "t",
                "tau0_over_mu_l",
                "tau0",
                "torque_mean",
                "torque_variance",
                "torque_mean_phase_avg",
                "fiber_tilt_rad",
            ],
            inputs: grid3(&s.latitudes_deg, &s.theta_tilde_deg, &s.time.points()),
            row: Box::new(move |x| {
                let geo = s.geo.with_latitude(x[0].to_radians());
                let bg = BalanceGeometry::new(s.length, x[1].to_radians(), s.phi_tilde)?;
                let sc = TorqueScenario {
                    geo,
                    bg,
                    masses: s.masses,
                    params: s.params,
                    arm_a: s.arm_a,
                    arm_b: s.arm_b,
                };
                let t = x[2];
                let tau = tau0(&sc, t)?;
                Ok(vec![
                    tau / (s.masses.reduced() * s.length),
                    tau,
                    mean_from_tau0(&sc, tau),
                    variance_from_tau0(&sc, tau),
                    phase_averaged_torque_mean(&sc, t)?,
                    fiber_tilt(&geo, t)?,
                ])
            }),
        }],
        Scenario::Cavendish(s) => {
            let mut columns = vec![
                "t",
                "r_plus",
                "r_minus",
                "alpha_cl",
                "alpha_mean",
                "alpha_variance",
                "alpha_mean_far",
                "alpha_variance_far",
            ];
            if s.delta_alpha_cl_rel.is_some() {
                columns.push("qsnr");
            }
            let mut out = vec![TableSpec {
                name: "cavendish_signal",
                columns,
                inputs: column(s.time.points()),
                row: Box::new(move |x| {
                    let t = x[0];
                    let (rp, rm) = r_plus_minus(&s.cfg, t)?;
                    let cl = alpha_classical(&s.cfg, t)?;
                    let far = alpha_far_field(&s.cfg, &s.params, &s.state, t);
                    let mut row = vec![
                        rp,
                        rm,
                        cl,
                        alpha_mean(&s.cfg, &s.params, &s.state, t)?,
                        alpha_variance(&s.cfg, &s.params, &s.state, t)?,
                        far.mean,
                        far.variance,
                    ];
                    if let Some(rel) = s.delta_alpha_cl_rel {
                        row.push(qsnr(&s.cfg, &s.params, &s.state, t, rel * cl.abs())?);
                    }
                    Ok(row)
                }),
            }];
            if let Some(n) = &s.noise {
                out.push(TableSpec {
                    name: "thermal_noise",
                    columns: vec!["signal_freq", "damping", "torque_asd"],
                    inputs: vec![vec![n.signal_freq]],
                    row: Box::new(move |x| {
                        Ok(vec![
                            n.oscillator.damping(x[0]),
                            thermal_torque_asd(&n.oscillator, x[0])?,
                        ])
                    }),
                });
            }
            if let Some(b) = &s.budget {
                out.push(TableSpec {
                    name: "sensitivity",
                    columns: vec!["signal_power_per_pair", "g_min", "r_abs_bound"],
                    inputs: vec![vec![]],
                    row: Box::new(move |_| {
                        let g_min = min_detectable_g(b, &s.cfg)?;
                        Ok(vec![
                            signal_power_per_pair(&s.cfg)?,
                            g_min,
                            r_bound_from_gmin(g_min, s.bound.0, s.bound.1)?,
                        ])
                    }),
                });
            }
            out
        }
        Scenario::Montecarlo(s) => {
            let histogram: OnceLock<wep_torsim_core::Result<Histogram>> = OnceLock::new();
            let centers = Histogram::new(-1.0, 1.0, s.bins)
                .map(|h| (0..s.bins).map(|k| h.bin_center(k)).collect())
                .unwrap_or_default();
            vec![
                TableSpec {
                    name: "cos_gamma_convergence",
                    columns: vec!["samples", "mean", "std_error"],
                    inputs: column(s.checkpoints.iter().map(|&c| c as f64).collect()),
                    row: Box::new(move |x| {
                        let r = cos_gamma_experiment(&mut s.rng.rng(), x[0] as u64, 1)?;
                        Ok(vec![r.mean, r.std_error])
                    }),
                },
                TableSpec {
                    name: "cos_gamma_histogram",
                    columns: vec!["bin_center", "count", "density"],
                    inputs: column(centers),
                    row: Box::new(move |x| {
                        let h = histogram
                            .get_or_init(|| {
                                cos_gamma_experiment(&mut s.rng.rng(), s.samples, s.bins)
                                    .map(|r| r.histogram)
                            })
                            .clone()?;
                        let k = ((x[0] - h.lo) / h.bin_width()).floor() as usize;
                        let count = h.counts[k.min(h.counts.len() - 1)];
                        let density = count as f64 / (h.total() as f64 * h.bin_width());
                        Ok(vec![count as f64, density])
                    }),
                },
                TableSpec {
                    name: "cos_gamma_chunked",
                    columns: vec!["samples", "mean", "std_error", "std_dev"],
                    inputs: vec![vec![s.samples as f64]],
                    row: Box::new(move |x| {
                        let stats = par_ensemble_average(
                            |[g]: [f64; 1]| g.cos(),
                            &s.rng,
                            x[0] as u64,
                            DEFAULT_CHUNK,
                        )?;
                        Ok(vec![
                            stats.mean(),
                            stats.std_error().unwrap_or(f64::NAN),
                            stats.std_dev().unwrap_or(f64::NAN),
                        ])
                    }),
                },
            ]
        }
        Scenario::Sweep(s) => vec![TableSpec {
            name: "qsnr_sweep",
            columns: vec!["n", "theta_rad", "phi_rad", "r_abs", "phi_r_rad", "qsnr"],
            inputs: (0..s.grid.len())
                .map(|i| s.grid.point(i).to_vec())
                .collect(),
            row: Box::new(move |x| {
                let row = qsnr_row(
                    [x[0], x[1], x[2], x[3], x[4]],
                    s.n_pairs,
                    s.delta_alpha_cl_rel,
                )?;
                Ok(vec![row[5]])
            }),
        }],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    /// `(file name, row count)` in output order.
    pub tables: Vec<(String, usize)>,
    /// Rows recomputed by `--verify`; zero without it.
    pub verified_rows: usize,
}

/// Evaluates every table of `cfg` in memory.
pub fn build_tables(cfg: &ScenarioConfig) -> Result<Vec<ResultTable>, CliError> {
    specs(cfg)
        .iter()
        .map(|spec| {
            Ok(ResultTable {
                name: spec.name.to_owned(),
                columns: spec.columns.iter().map(|c| (*c).to_owned()).collect(),
                inputs: spec.input_count(),
                rows: spec.compute()?,
                metadata: metadata(cfg, spec.name),
            })
        })
        .collect()
}

fn manifest(cfg: &ScenarioConfig, tables: &[ResultTable]) -> String {
    let mut m = String::new();
    let _ = writeln!(m, "tool: {TOOL_VERSION}");
    let _ = writeln!(m, "mode: {}", cfg.mode);
    let _ = writeln!(m, "config_sha256: {}", cfg.sha256);
    let _ = writeln!(m, "seed: {}", cfg.seed);
    for t in tables {
        let _ = writeln!(
            m,
            "table: {} rows={} columns={} inputs={}",
            t.file_name(),
            t.rows.len(),
            t.columns.len(),
            t.inputs
        );
    }
    m
}

/// Writes every table and `manifest.txt` into `out`, then optionally
/// re-reads and spot-checks them.
pub fn run(cfg: &ScenarioConfig, out: &Path, verify: bool) -> Result<RunSummary, CliError> {
    let tables = build_tables(cfg)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    for t in &tables {
        t.write_csv(&out.join(t.file_name()))?;
    }
    let path = out.join(MANIFEST);
    std::fs::write(&path, manifest(cfg, &tables))
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let verified_rows = if verify { verify_dir(cfg, out)? } else { 0 };
    Ok(RunSummary {
        tables: tables
            .iter()
            .map(|t| (t.file_name(), t.rows.len()))
            .collect(),
        verified_rows,
    })
}

fn verify_rows(len: usize) -> impl Iterator<Item = usize> {
    (0..len).filter(move |i| i % VERIFY_STRIDE == 0 || *i + 1 == len)
}

/// Re-reads the CSVs written for `cfg` and recomputes a sample of rows from
/// their input columns. Returns the number of rows checked.
pub fn verify_dir(cfg: &ScenarioConfig, out: &Path) -> Result<usize, CliError> {
    let mismatch = |msg: String| CliError::Numerical(format!("verify: {msg}"));
    let mut checked = 0;
    for spec in specs(cfg) {
        let file = format!("{}.csv", spec.name);
        let csv = read_csv(&out.join(&file))?;
        if csv.metadata != metadata(cfg, spec.name) {
            return Err(mismatch(format!(
                "{file}: metadata does not match the config"
            )));
        }
        if csv
            .columns
            .iter()
            .map(String::as_str)
            .ne(spec.columns.iter().copied())
        {
            return Err(mismatch(format!(
                "{file}: unexpected header {:?}",
                csv.columns
            )));
        }
        if csv.rows.len() != spec.inputs.len() {
            return Err(mismatch(format!(
                "{file}: {} rows, expected {}",
                csv.rows.len(),
                spec.inputs.len()
            )));
        }
        let k = spec.input_count();
        let sample: Vec<usize> = verify_rows(csv.rows.len()).collect();
        let results: Vec<Result<(), CliError>> = sample
            .par_iter()
            .map(|&i| {
                let written = &csv.rows[i];
                let inputs = written[..k.min(written.len())]
                    .iter()
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| mismatch(format!("{file} row {i}: {e}")))?;
                let fresh: Vec<String> = spec.eval(&inputs)?.into_iter().map(format_f64).collect();
                if &fresh != written {
                    return Err(mismatch(format!(
                        "{file} row {i}: file has {written:?}, recomputed {fresh:?}"
                    )));
                }
                Ok(())
            })
            .collect();
        results.into_iter().collect::<Result<(), _>>()?;
        checked += sample.len();
    }
    Ok(checked)
}
