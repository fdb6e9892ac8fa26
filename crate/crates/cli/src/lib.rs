//! Command implementations and model persistence behind the `nerc` binary.

pub mod commands;
pub mod model_file;

pub use commands::{
    cmd_crossval, cmd_eval, cmd_tag, cmd_train, evaluate, tag_text, ReportFormat, RunTiming,
};
pub use model_file::{load, save, ModelFile, ModelFileError, FORMAT_VERSION};
