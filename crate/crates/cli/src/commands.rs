//! Subcommand implementations.

use std::path::{Path, PathBuf};

use serde::Serialize;
use swirlflow::shock::rh_residuals;
use swirlflow::{
    classify_inward, classify_outward, classify_problem_iii, classify_problem_iv, coincidence_radius,
    limiting_radius, profile, purely_circulatory, sonic_radius, swirl_sonic_radius, Branch, FlowError,
    FlowInvariants, GasModel, RadialProfile, ShockProblem, ShockRegime, ShockSolution, SmoothRegime, SmoothReport,
};
use thiserror::Error;

use crate::config::{ConfigError, Format, Problem, RunConfig};
use crate::output::{json_bytes, profile_csv, profile_rows, sweep_csv, sweep_records, write_atomic};

pub const DEFAULT_SWEEP_POINTS: usize = 50;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Solver(#[from] FlowError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    /// 2 for anything the user must fix in the input, 3 for solver failures
    /// and configurations without a solution.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Write { .. } => 2,
            CliError::Solver(_) | CliError::Serialize(_) => 3,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}

/// Options shared by every subcommand, after merging the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub samples: Option<usize>,
    pub points: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Result of a successful run: text for standard output and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: Vec<u8>) -> Self {
        Self { stdout, code: 0 }
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// JSON classification report; absent diagnostics are omitted.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RegimeReport {
    pub problem: &'static str,
    pub regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcase: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_tilde: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_sharp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_star_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_sharp_downstream: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_sharp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_sharp_sharp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f2_at_rho_sharp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f2_at_rho_sharp_sharp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_star_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_exit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exit_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pressure_margin: Option<f64>,
}

impl RegimeReport {
    fn smooth(problem: Problem, gas: &GasModel, inv: Option<&FlowInvariants>, rep: &SmoothReport) -> Self {
        Self {
            problem: problem.label(),
            regime: rep.regime.label().into(),
            r_tilde: inv.map(|i| i.vacuum_radius()),
            r_c: rep.r_c.or_else(|| inv.and_then(|i| finite(sonic_radius(gas, i)))),
            r_sharp: rep.r_sharp,
            r_star: inv.map(|i| swirl_sonic_radius(gas, i)),
            rho_c: inv.map(|i| i.critical_density(gas)),
            ..Default::default()
        }
    }

    fn shock(problem: Problem, gas: &GasModel, inv: &FlowInvariants, regime: &ShockRegime) -> Self {
        Self {
            problem: problem.label(),
            regime: regime.pattern.label().into(),
            subcase: Some(regime.subcase.clone()),
            r_tilde: Some(inv.vacuum_radius()),
            r_c: finite(sonic_radius(gas, inv)),
            r_sharp: finite(regime.r_sharp_upstream),
            r_star: Some(regime.r_star),
            r_star_prime: finite(regime.r_star_prime),
            r_sharp_downstream: regime.r_sharp_downstream,
            rho_c: Some(inv.critical_density(gas)),
            rho_sharp: finite(regime.rho_sharp),
            rho_sharp_sharp: regime.rho_sharp_sharp,
            f2_at_rho_sharp: finite(regime.f2_at_rho_sharp),
            f2_at_rho_sharp_sharp: regime.f2_at_rho_sharp_sharp,
            p1: regime.p1,
            p0: regime.p0,
            p_star_prime: regime.p_star_prime,
            exit_margin: finite(regime.exit_margin),
            pressure_margin: regime.pressure_margin,
            ..Default::default()
        }
    }

    fn failure(problem: Problem, regime: &str, err: &FlowError) -> Self {
        Self {
            problem: problem.label(),
            regime: regime.into(),
            error: Some(err.to_string()),
            ..Default::default()
        }
    }
}

fn shock_solution(cfg: &RunConfig, gas: &GasModel) -> Result<ShockSolution, FlowError> {
    let b = cfg.boundary_state();
    let p_ex = cfg.exit_pressure.expect("validated");
    match cfg.problem {
        Problem::III => classify_problem_iii(gas, &b, cfg.far_radius(), p_ex),
        Problem::IV => classify_problem_iv(gas, &b, cfg.far_radius(), p_ex),
        _ => unreachable!("shock solution requested for a smooth problem"),
    }
}

fn smooth_report(cfg: &RunConfig, gas: &GasModel) -> Result<SmoothReport, FlowError> {
    let b = cfg.boundary_state();
    match cfg.problem {
        Problem::I => classify_outward(gas, &b, cfg.annulus.r_outer),
        Problem::II => classify_inward(gas, &b, cfg.annulus.r_inner),
        Problem::Circulatory => purely_circulatory(gas, &b, cfg.annulus.r_outer, 2).map(|(_, rep)| rep),
        _ => unreachable!("smooth report requested for a shock problem"),
    }
}

pub fn classify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let gas = cfg.gas().map_err(ConfigError::from)?;
    let inv = FlowInvariants::from_boundary(&gas, &cfg.boundary_state()).ok();
    let report = if cfg.problem.has_shock() {
        let inv = inv.ok_or(FlowError::DegenerateCirculatory)?;
        match shock_solution(cfg, &gas) {
            Ok(sol) => RegimeReport {
                r_b: Some(sol.r_b),
                p_exit: Some(sol.p_exit),
                ..RegimeReport::shock(cfg.problem, &gas, &inv, &sol.regime)
            },
            Err(FlowError::NoSolution { reason, diagnostics }) => RegimeReport {
                error: Some(reason),
                ..RegimeReport::shock(cfg.problem, &gas, &inv, &diagnostics)
            },
            Err(e @ FlowError::PressureOutOfRange { p1, p0, .. }) => RegimeReport {
                p1: Some(p1),
                p0: Some(p0),
                ..RegimeReport::failure(cfg.problem, "NoSolution", &e)
            },
            Err(e) => RegimeReport::failure(cfg.problem, "Error", &e),
        }
    } else {
        match smooth_report(cfg, &gas) {
            Ok(rep) => RegimeReport::smooth(cfg.problem, &gas, inv.as_ref(), &rep),
            Err(e) => RegimeReport::failure(cfg.problem, "Error", &e),
        }
    };
    let code = match report.regime.as_str() {
        "NoSolution" | "NoGlobalSolution" | "Error" => 3,
        _ => 0,
    };
    Ok(Outcome {
        stdout: json_bytes(&report)?,
        code,
    })
}

/// Smooth or two-region profile of the configured problem.
pub fn profiles(cfg: &RunConfig, n: usize) -> Result<Vec<RadialProfile>, CliError> {
    let gas = cfg.gas().map_err(ConfigError::from)?;
    let b = cfg.boundary_state();
    let (r0, r1) = (cfg.annulus.r_inner, cfg.annulus.r_outer);
    match cfg.problem {
        Problem::III | Problem::IV => Ok(shock_solution(cfg, &gas)?.profiles(&gas, n)?.to_vec()),
        Problem::Circulatory => Ok(vec![purely_circulatory(&gas, &b, r1, n)?.0]),
        Problem::I | Problem::II => {
            let rep = smooth_report(cfg, &gas)?;
            let inv = FlowInvariants::from_boundary(&gas, &b)?;
            if rep.regime == SmoothRegime::NoGlobalSolution {
                return Err(FlowError::NoRoot {
                    r: rep.r_sharp.unwrap_or(r0),
                }
                .into());
            }
            let branch = Branch::of_state(&inv.state_at(&gas, b.r, b.rho));
            Ok(vec![profile(&gas, &inv, branch, r0, r1, n)?])
        }
    }
}

fn destination<'a>(cfg: &'a RunConfig, opts: &'a RunOptions) -> Option<&'a Path> {
    opts.out.as_deref().or(cfg.output.path.as_deref())
}

fn emit(bytes: Vec<u8>, dest: Option<&Path>) -> Result<Outcome, CliError> {
    match dest {
        Some(path) => {
            write_atomic(path, &bytes).map_err(|source| CliError::Write {
                path: path.to_path_buf(),
                source,
            })?;
            Ok(Outcome::ok(Vec::new()))
        }
        None => Ok(Outcome::ok(bytes)),
    }
}

pub fn run_profile(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let n = opts.samples.unwrap_or(cfg.samples);
    if n < 2 {
        return Err(ConfigError::Invalid(format!("samples must be at least 2, got {n}")).into());
    }
    let rows = profile_rows(&profiles(cfg, n)?);
    let bytes = match cfg.output.format {
        Format::Csv => profile_csv(&rows)?,
        Format::Json => json_bytes(&rows)?,
    };
    emit(bytes, destination(cfg, opts))
}

fn shock_problem(cfg: &RunConfig, gas: GasModel) -> Result<ShockProblem, CliError> {
    if !cfg.problem.has_shock() {
        return Err(ConfigError::Invalid(format!(
            "this subcommand needs problem III or IV, got {}",
            cfg.problem.label()
        ))
        .into());
    }
    Ok(ShockProblem::from_boundary(gas, &cfg.boundary_state(), cfg.far_radius())?)
}

pub fn run_sweep(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let gas = cfg.gas().map_err(ConfigError::from)?;
    let n = opts.points.unwrap_or(DEFAULT_SWEEP_POINTS);
    if n == 0 {
        return Err(ConfigError::Invalid("points must be at least 1".into()).into());
    }
    let rows = sweep_records(&shock_problem(cfg, gas)?.sweep(n)?);
    let bytes = match cfg.output.format {
        Format::Csv => sweep_csv(&rows)?,
        Format::Json => json_bytes(&rows)?,
    };
    emit(bytes, destination(cfg, opts))
}

#[derive(Debug, Serialize)]
struct ShockReport<'a> {
    problem: &'static str,
    #[serde(flatten)]
    solution: &'a ShockSolution,
    rh_residuals: [f64; 4],
}

pub fn run_shock(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let gas = cfg.gas().map_err(ConfigError::from)?;
    shock_problem(cfg, gas)?;
    let sol = shock_solution(cfg, &gas)?;
    let report = ShockReport {
        problem: cfg.problem.label(),
        solution: &sol,
        rh_residuals: rh_residuals(gas.gamma, &sol.upstream, &sol.downstream),
    };
    emit(json_bytes(&report)?, destination(cfg, opts))
}

#[derive(Debug, Default, Serialize)]
struct Limits {
    r_tilde: Option<f64>,
    r_star: Option<f64>,
    r_star_prime: Option<f64>,
    r_c: Option<f64>,
    r_sharp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p0: Option<f64>,
}

pub fn run_limits(cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome, CliError> {
    let gas = cfg.gas().map_err(ConfigError::from)?;
    let limits = if cfg.problem == Problem::Circulatory {
        let rep = smooth_report(cfg, &gas)?;
        let b = cfg.boundary_state();
        let kappa2 = b.r * b.u2;
        let b0 = 0.5 * b.u2 * b.u2 + gas.sound_speed_sq(b.a, b.rho) / (gas.gamma - 1.0);
        Limits {
            r_tilde: Some(kappa2.abs() / (2.0 * b0).sqrt()),
            r_c: rep.r_c,
            ..Default::default()
        }
    } else {
        let inv = FlowInvariants::from_boundary(&gas, &cfg.boundary_state())?;
        let mut limits = Limits {
            r_tilde: Some(inv.vacuum_radius()),
            r_star: Some(swirl_sonic_radius(&gas, &inv)),
            r_star_prime: coincidence_radius(&gas, &inv).ok(),
            r_c: finite(sonic_radius(&gas, &inv)),
            r_sharp: limiting_radius(&gas, &inv).ok(),
            ..Default::default()
        };
        if cfg.problem.has_shock() {
            let iv = shock_problem(cfg, gas)?.pressure_interval()?;
            limits.p1 = Some(iv.p1);
            limits.p0 = Some(iv.p0);
        }
        limits
    };
    emit(json_bytes(&limits)?, opts.out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(problem: &str, annulus: (f64, f64), radius: f64, u1: f64, extra: &str) -> RunConfig {
        RunConfig::from_json(&format!(
            r#"{{"gamma": 2.0, "problem": "{problem}",
                "annulus": {{"r_inner": {}, "r_outer": {}}},
                "boundary": {{"radius": {radius}, "rho": 0.6403882032022076, "u1": {u1}, "u2": 1.0, "A": 1.0}}{extra}}}"#,
            annulus.0, annulus.1
        ))
        .unwrap()
    }

    fn report(out: &Outcome) -> serde_json::Value {
        serde_json::from_slice(&out.stdout).unwrap()
    }

    #[test]
    fn classify_smooth_supersonic() {
        let cfg = config("I", (1.0, 2.0), 1.0, 1.5615528128088303, "");
        let out = classify(&cfg).unwrap();
        assert_eq!(out.code, 0);
        let v = report(&out);
        assert_eq!(v["regime"], "Supersonic");
        assert!((v["r_sharp"].as_f64().unwrap() - 0.9562441).abs() < 1e-6);
    }

    #[test]
    fn classify_inward_inside_limiting_circle() {
        let cfg = config("II", (0.9, 1.0), 1.0, -1.5615528128088303, "");
        let out = classify(&cfg).unwrap();
        assert_eq!(out.code, 3);
        let v = report(&out);
        assert_eq!(v["regime"], "NoGlobalSolution");
        assert!((v["r_sharp"].as_f64().unwrap() - 0.955).abs() < 2e-3);
        assert!(profiles(&cfg, 10).is_err());
    }

    #[test]
    fn classify_shock_out_of_range() {
        let cfg = config("III", (1.0, 1.2), 1.0, 1.5615528128088303, r#", "exit_pressure": 5.0"#);
        let out = classify(&cfg).unwrap();
        assert_eq!(out.code, 3);
        let v = report(&out);
        assert_eq!(v["regime"], "NoSolution");
        assert!(v["p0"].as_f64().unwrap() < 5.0);
    }

    #[test]
    fn shock_profile_has_one_repeated_radius() {
        let cfg = config("III", (1.0, 1.2), 1.0, 1.5615528128088303, r#", "exit_pressure": 1.2"#);
        let rows = profile_rows(&profiles(&cfg, 64).unwrap());
        assert_eq!(rows.len(), 64);
        let repeated: Vec<_> = rows.windows(2).filter(|w| w[0].r == w[1].r).collect();
        assert_eq!(repeated.len(), 1);
        let w = repeated[0];
        assert!(w[0].rho != w[1].rho && w[0].p < w[1].p);
        assert!(rows.windows(2).all(|w| w[1].r >= w[0].r));
    }

    #[test]
    fn sweep_needs_shock_problem() {
        let cfg = config("I", (1.0, 2.0), 1.0, 1.5615528128088303, "");
        let err = run_sweep(&cfg, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
