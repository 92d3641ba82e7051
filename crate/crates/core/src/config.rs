//! Run settings shared by the command line and the acceptance suite.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{
    ContractionOrder, Engine, EvalConfig, DEFAULT_INTERMEDIATE_BUDGET, DEFAULT_TERM_BUDGET,
};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const MAX_TOLERANCE: f64 = 1e-2;
pub const SEED_ENV: &str = "HWM_SEED";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("tolerance {0} is outside (0, {MAX_TOLERANCE}]")]
    Tolerance(f64),
    #[error("{var}={value:?} is not an unsigned integer")]
    Env { var: &'static str, value: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(with = "engine_name")]
    pub engine: Engine,
    pub term_budget: u64,
    pub intermediate_budget: u64,
    /// Replaces every pinned tolerance of the acceptance suite when set.
    pub tolerance: Option<f64>,
    /// Worker threads; the rayon default when unset.
    pub workers: Option<usize>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            engine: Engine::Auto,
            term_budget: DEFAULT_TERM_BUDGET,
            intermediate_budget: DEFAULT_INTERMEDIATE_BUDGET,
            tolerance: None,
            workers: None,
            seed: DEFAULT_SEED,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.term_budget == 0 {
            return Err(ConfigError::NotPositive("term budget"));
        }
        if self.intermediate_budget == 0 {
            return Err(ConfigError::NotPositive("intermediate budget"));
        }
        if self.workers == Some(0) {
            return Err(ConfigError::NotPositive("worker count"));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t <= MAX_TOLERANCE) {
                return Err(ConfigError::Tolerance(t));
            }
        }
        Ok(())
    }

    /// Applies `HWM_SEED` from the given value of the variable, if any.
    pub fn with_seed_override(mut self, var: Option<String>) -> Result<Self, ConfigError> {
        if let Some(value) = var {
            self.seed = value.trim().parse().map_err(|_| ConfigError::Env {
                var: SEED_ENV,
                value,
            })?;
        }
        Ok(self)
    }

    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            term_budget: self.term_budget,
            intermediate_budget: self.intermediate_budget,
            order: ContractionOrder::Greedy,
        }
    }

    /// The configured tolerance, or `pinned` when none is set.
    pub fn tolerance_or(&self, pinned: f64) -> f64 {
        self.tolerance.unwrap_or(pinned)
    }
}

mod engine_name {
    use super::Engine;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(e: &Engine, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(e.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Engine, D::Error> {
        let name = String::deserialize(d)?;
        name.parse().map_err(|_| D::Error::custom(format!("unknown engine {name:?}")))
    }
}
