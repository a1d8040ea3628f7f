use hubbath_core::{Error as CoreError, ExperimentConfig};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("empty config document")]
    Empty,
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ConfigError {
    /// Dotted path of the offending field.
    pub fn path(&self) -> &str {
        match self {
            ConfigError::Empty => ".",
            ConfigError::Schema { path, .. } | ConfigError::Invalid { path, .. } => path,
        }
    }
}

/// Parses and validates a JSON experiment description.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    if text.trim().is_empty() {
        return Err(ConfigError::Empty);
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        ConfigError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        }
    })?;
    config.validate().map_err(|e| match e {
        CoreError::InvalidConfig { path, message } => ConfigError::Invalid { path, message },
        other => ConfigError::Invalid {
            path: ".".into(),
            message: other.to_string(),
        },
    })?;
    Ok(config)
}

pub fn config_to_json(config: &ExperimentConfig) -> String {
    serde_json::to_string_pretty(config).expect("configs always serialize")
}
