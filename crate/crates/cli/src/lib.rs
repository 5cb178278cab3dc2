//! Workbench around `epk-core`: JSON model files, Graphviz export and the
//! `epk` command surface.

pub mod args;
pub mod command;
pub mod document;
pub mod dot;

pub use args::Cli;
pub use command::{run, CliError, Command, Outcome, Scope};
pub use document::{load_model, save_model, DocumentError, LoadedModel, ModelDocument};
pub use dot::render_dot;
