//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swirlflow::{BoundaryState, FlowError, GasModel};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid config: {0}")]
    Gas(#[from] FlowError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Problem {
    /// Smooth outward flow, data on the inner circle.
    I,
    /// Smooth inward flow, data on the outer circle.
    II,
    /// Outward flow with a shock and prescribed exit pressure.
    III,
    /// Inward flow with a shock and prescribed exit pressure.
    IV,
    #[serde(rename = "circulatory")]
    Circulatory,
}

impl Problem {
    pub fn label(self) -> &'static str {
        match self {
            Problem::I => "I",
            Problem::II => "II",
            Problem::III => "III",
            Problem::IV => "IV",
            Problem::Circulatory => "circulatory",
        }
    }

    pub fn has_shock(self) -> bool {
        matches!(self, Problem::III | Problem::IV)
    }

    fn data_on_outer(self) -> bool {
        matches!(self, Problem::II | Problem::IV)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annulus {
    pub r_inner: f64,
    pub r_outer: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boundary {
    pub radius: f64,
    pub rho: f64,
    pub u1: f64,
    pub u2: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default)]
    pub format: Format,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub tol_residual: Option<f64>,
    pub tol_root: Option<f64>,
    pub eps_sonic: Option<f64>,
}

fn default_samples() -> usize {
    512
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gamma: f64,
    pub problem: Problem,
    pub annulus: Annulus,
    pub boundary: Boundary,
    pub exit_pressure: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub output: Output,
    pub tolerances: Option<Tolerances>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        let Annulus { r_inner, r_outer } = self.annulus;
        if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
            return invalid(format!("annulus needs 0 < r_inner < r_outer, got [{r_inner}, {r_outer}]"));
        }
        let expected = if self.problem.data_on_outer() { r_outer } else { r_inner };
        if (self.boundary.radius - expected).abs() > 1e-12 * expected {
            return invalid(format!(
                "problem {} takes boundary data at r = {expected}, got radius {}",
                self.problem.label(),
                self.boundary.radius
            ));
        }
        self.boundary_state().validate()?;
        let u1 = self.boundary.u1;
        let direction_ok = match self.problem {
            Problem::I | Problem::III => u1 > 0.0,
            Problem::II | Problem::IV => u1 < 0.0,
            Problem::Circulatory => u1 == 0.0,
        };
        if !direction_ok {
            return invalid(format!(
                "u1 = {u1} has the wrong sign for problem {}",
                self.problem.label()
            ));
        }
        match (self.problem.has_shock(), self.exit_pressure) {
            (true, None) => return invalid("exit_pressure is required for problems III and IV".into()),
            (false, Some(_)) => return invalid("exit_pressure is only allowed for problems III and IV".into()),
            (true, Some(p)) if !(p > 0.0 && p.is_finite()) => {
                return invalid(format!("exit_pressure must be positive, got {p}"))
            }
            _ => {}
        }
        if self.samples < 2 {
            return invalid(format!("samples must be at least 2, got {}", self.samples));
        }
        self.gas()?;
        Ok(())
    }

    pub fn gas(&self) -> Result<GasModel, FlowError> {
        let t = self.tolerances.unwrap_or_default();
        GasModel::with_tolerances(
            self.gamma,
            t.tol_residual.unwrap_or(GasModel::DEFAULT_TOL_RESIDUAL),
            t.tol_root.unwrap_or(GasModel::DEFAULT_TOL_ROOT),
            t.eps_sonic.unwrap_or(GasModel::DEFAULT_EPS_SONIC),
        )
    }

    pub fn boundary_state(&self) -> BoundaryState {
        let b = self.boundary;
        BoundaryState::new(b.radius, b.rho, b.u1, b.u2, b.a)
    }

    /// The circle opposite the data circle.
    pub fn far_radius(&self) -> f64 {
        if self.problem.data_on_outer() {
            self.annulus.r_inner
        } else {
            self.annulus.r_outer
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SETUP_A: &str = r#"{
        "gamma": 2.0, "problem": "III",
        "annulus": {"r_inner": 1.0, "r_outer": 1.2},
        "boundary": {"radius": 1.0, "rho": 0.6403882032022076, "u1": 1.5615528128088303, "u2": 1.0, "A": 1.0},
        "exit_pressure": 1.2
    }"#;

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::from_json(SETUP_A).unwrap();
        assert_eq!(c.samples, 512);
        assert_eq!(c.output.format, Format::Csv);
        assert_eq!(c.problem, Problem::III);
        assert_eq!(c.far_radius(), 1.2);
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            SETUP_A.replace("\"gamma\": 2.0", "\"gamma\": 1.0"),
            SETUP_A.replace("\"r_outer\": 1.2", "\"r_outer\": 1.0"),
            SETUP_A.replace("\"radius\": 1.0", "\"radius\": 1.2"),
            SETUP_A.replace(",\n        \"exit_pressure\": 1.2", ""),
            SETUP_A.replace("\"III\"", "\"I\""),
            SETUP_A.replace("\"III\"", "\"IV\""),
            SETUP_A.replace("\"gamma\"", "\"gama\""),
            SETUP_A.replace("\"A\": 1.0", "\"A\": -1.0"),
            SETUP_A.replace("\"III\"", "\"V\""),
            SETUP_A.replace("1.2\n", "1.2, \"samples\": 1\n"),
        ];
        for case in cases {
            assert!(RunConfig::from_json(&case).is_err(), "{case}");
        }
        assert!(matches!(RunConfig::from_json("{"), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn tolerance_overrides() {
        let text = SETUP_A.replace("1.2\n", "1.2, \"tolerances\": {\"eps_sonic\": 1e-6}\n");
        let c = RunConfig::from_json(&text).unwrap();
        let gas = c.gas().unwrap();
        assert_eq!(gas.eps_sonic, 1e-6);
        assert_eq!(gas.tol_root, GasModel::DEFAULT_TOL_ROOT);
    }
}
