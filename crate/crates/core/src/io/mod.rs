//! File formats: bAbI stories, configuration documents, prediction and
//! score tables.

pub mod babi;
pub mod config;
pub mod tables;

pub use babi::{
    parse_babi, read_babi, to_babi_string, write_babi, BabiError, BabiFile, BabiLine, BabiStory,
    FormatError, QuestionRef,
};
pub use config::{
    parse_config, read_config, to_config_string, write_config, ConfigDocument, ConfigError,
    SCHEMA_VERSION,
};
pub use tables::{
    read_predictions, read_score_sheet, write_breakdown, write_predictions, TableError,
};
