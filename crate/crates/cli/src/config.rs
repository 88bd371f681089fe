use std::path::Path;

use roomframe::{ConstraintConfig, DegradeParams, RefineConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::formats::read_json;

/// Every tunable of the pipeline and the simulator; absent fields take their defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub refine: RefineConfig,
    pub constraints: ConstraintConfig,
    pub degrade: DegradeParams,
    pub seed: u64,
}

impl RunConfig {
    /// Defaults when `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg: RunConfig = match path {
            Some(p) => read_json(p)?,
            None => RunConfig::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.refine.validate().map_err(|e| CliError::input(format!("config: {e}")))?;
        self.constraints.validate().map_err(|e| CliError::input(format!("config: {e}")))?;
        self.degrade.validate().map_err(|e| CliError::input(format!("config: {e}")))
    }
}
