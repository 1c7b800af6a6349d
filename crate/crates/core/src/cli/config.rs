use std::path::Path;

use serde::Deserialize;

use super::{CliError, MethodArg, SchemeArg};

/// Flag defaults read from a TOML file. Keys are the long flag names with `-` replaced by
/// `_`; unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub k_db: Option<f64>,
    pub sh_db: Option<f64>,
    pub delta: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub m: Option<usize>,
    pub gamma_bar_db: Option<f64>,
    pub scheme: Option<String>,
    pub method: Option<String>,
    pub gamma_max_mult: Option<f64>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub from_db: Option<f64>,
    pub to_db: Option<f64>,
    pub step_db: Option<f64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {e}")))
    }

    pub(crate) fn scheme(&self) -> Result<Option<SchemeArg>, CliError> {
        parse_enum(self.scheme.as_deref())
    }

    pub(crate) fn method(&self) -> Result<Option<MethodArg>, CliError> {
        parse_enum(self.method.as_deref())
    }
}

fn parse_enum<E: clap::ValueEnum>(s: Option<&str>) -> Result<Option<E>, CliError> {
    s.map(|v| E::from_str(v, true).map_err(|e| CliError::Usage(format!("bad config value {v:?}: {e}"))))
        .transpose()
}
