//! JSON configuration documents describing a split.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::splits::SplitSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub schema_version: u32,
    #[serde(flatten)]
    pub split: SplitSpec,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {found} (expected {SCHEMA_VERSION})")]
    Version { found: u32 },
}

pub fn parse_config(text: &str) -> Result<SplitSpec, ConfigError> {
    let doc: ConfigDocument = serde_json::from_str(text)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(ConfigError::Version {
            found: doc.schema_version,
        });
    }
    Ok(doc.split)
}

pub fn to_config_string(spec: &SplitSpec) -> String {
    let doc = ConfigDocument {
        schema_version: SCHEMA_VERSION,
        split: spec.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("configuration serializes");
    s.push('\n');
    s
}

pub fn read_config(path: impl AsRef<Path>) -> Result<SplitSpec, ConfigError> {
    parse_config(&fs::read_to_string(path)?)
}

pub fn write_config(spec: &SplitSpec, path: impl AsRef<Path>) -> std::io::Result<()> {
    fs::write(path, to_config_string(spec))
}
