use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Subcommand {
    Pi,
    Roots,
    Euler,
    Ode,
    Blayer,
    Pde,
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Pi => "pi",
            Self::Roots => "roots",
            Self::Euler => "euler",
            Self::Ode => "ode",
            Self::Blayer => "blayer",
            Self::Pde => "pde",
        };
        f.write_str(s)
    }
}

/// One run: the subcommand parameters plus bookkeeping shared by all of them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig<P> {
    /// Must match the command line when present.
    #[serde(default)]
    pub subcommand: Option<Subcommand>,
    /// Stem for output files; defaults to the config file stem.
    #[serde(default)]
    pub name: Option<String>,
    /// Orders the evaluation of sweep points.
    #[serde(default)]
    pub seed: u64,
    pub params: P,
    #[serde(default)]
    pub checks: Vec<Check>,
}

/// An acceptance predicate on one named metric of the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl Check {
    fn validate(&self) -> Result<(), String> {
        if self.min.is_none() && self.max.is_none() && self.target.is_none() {
            return Err(format!("check on `{}` sets none of min, max, target", self.metric));
        }
        match (self.target, self.tol) {
            (Some(_), None) => return Err(format!("check on `{}` has a target but no tol", self.metric)),
            (None, Some(_)) => return Err(format!("check on `{}` has a tol but no target", self.metric)),
            (_, Some(t)) => positive(&format!("tol of check `{}`", self.metric), t)?,
            _ => {}
        }
        Ok(())
    }

    pub fn passes(&self, value: f64) -> bool {
        if !value.is_finite() {
            return false;
        }
        self.min.is_none_or(|m| value >= m)
            && self.max.is_none_or(|m| value <= m)
            && match (self.target, self.tol) {
                (Some(t), Some(tol)) => (value - t).abs() <= tol,
                _ => true,
            }
    }
}

/// Parameter validation that needs no solver.
pub trait Params: Serialize + DeserializeOwned + Send + Sync {
    fn validate(&self) -> Result<(), String>;

    /// Fills defaults that depend on other fields, so the echoed config is
    /// complete.
    fn resolve(&mut self) {}
}

pub fn positive(what: &str, v: f64) -> Result<(), String> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(format!("{what} must be positive and finite, got {v}"))
    }
}

/// A single value or a list, for sweepable parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::One(v) => vec![*v],
            Self::Many(v) => v.clone(),
        }
    }
}

pub fn parse_config<P: Params>(text: &str, sub: Subcommand) -> Result<RunConfig<P>, String> {
    let mut cfg: RunConfig<P> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if let Some(s) = cfg.subcommand {
        if s != sub {
            return Err(format!("config is for `{s}` but was run with `{sub}`"));
        }
    }
    if let Some(name) = &cfg.name {
        if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
            return Err(format!("invalid run name `{name}`"));
        }
    }
    for c in &cfg.checks {
        c.validate()?;
    }
    cfg.params.validate()?;
    cfg.params.resolve();
    Ok(cfg)
}

pub fn load<P: Params>(path: &Path, sub: Subcommand) -> Result<RunConfig<P>, CliError> {
    let config_err = |message: String| CliError::Config { path: path.to_path_buf(), message };
    let text = std::fs::read_to_string(path).map_err(|e| config_err(e.to_string()))?;
    let mut cfg: RunConfig<P> = parse_config(&text, sub).map_err(config_err)?;
    cfg.subcommand = Some(sub);
    if cfg.name.is_none() {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
        cfg.name = Some(stem.to_string());
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct P {
        x: f64,
    }

    impl Params for P {
        fn validate(&self) -> Result<(), String> {
            positive("x", self.x)
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_config::<P>(r#"{"params": {"x": 1}, "extra": 1}"#, Subcommand::Pi).is_err());
        assert!(parse_config::<P>(r#"{"params": {"x": 1, "y": 2}}"#, Subcommand::Pi).is_err());
        assert!(parse_config::<P>(r#"{"params": {"x": 1}}"#, Subcommand::Pi).is_ok());
    }

    #[test]
    fn subcommand_must_match() {
        let text = r#"{"subcommand": "ode", "params": {"x": 1}}"#;
        assert!(parse_config::<P>(text, Subcommand::Ode).is_ok());
        assert!(parse_config::<P>(text, Subcommand::Pde).is_err());
    }

    #[test]
    fn checks_need_a_bound() {
        let bad = r#"{"params": {"x": 1}, "checks": [{"metric": "m"}]}"#;
        assert!(parse_config::<P>(bad, Subcommand::Pi).is_err());
        let no_tol = r#"{"params": {"x": 1}, "checks": [{"metric": "m", "target": 1}]}"#;
        assert!(parse_config::<P>(no_tol, Subcommand::Pi).is_err());
        let neg = r#"{"params": {"x": -1}}"#;
        assert!(parse_config::<P>(neg, Subcommand::Pi).is_err());
    }

    #[test]
    fn check_semantics() {
        let c = Check { metric: "m".into(), min: Some(1.0), max: Some(2.0), target: None, tol: None };
        assert!(c.passes(1.5) && !c.passes(0.5) && !c.passes(f64::NAN));
        let t = Check { metric: "m".into(), min: None, max: None, target: Some(-0.0722), tol: Some(5e-4) };
        assert!(t.passes(-0.0724) && !t.passes(-0.073));
    }
}
