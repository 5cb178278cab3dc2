//! Command-line grammar and the glue between it, the model files and
//! [`run`](crate::run).

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use epk_core::frame::Mode;
use epk_core::{AgentId, StateId, UpdateSpec};

use crate::command::{run, CliError, Command, Scope};
use crate::document::{load_model, save_model, DocumentError};

#[derive(Debug, Parser)]
#[command(
    name = "epk",
    version,
    about = "Inspect and update multi-agent Kripke models"
)]
pub struct Cli {
    /// Model file (JSON).
    pub model: PathBuf,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Global,
    Local,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Report frame properties of every agent's relation.
    Validate {
        #[arg(long, value_enum, default_value = "local")]
        mode: ModeArg,
        /// Exit with status 1 unless every relation is KD45.
        #[arg(long)]
        require_kd45: bool,
    },
    /// Evaluate a formula at a state, at an agent's local states, or everywhere.
    #[command(group(ArgGroup::new("scope").required(true).args(["state", "agent", "global"])))]
    Check {
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        agent: Option<String>,
        #[arg(long)]
        global: bool,
        formula: String,
        /// Exit with status 1 if the result differs.
        #[arg(long)]
        expect: Option<bool>,
    },
    /// Apply an ontological update.
    Update {
        #[command(subcommand)]
        op: UpdateOp,
        /// Write the updated model here.
        #[arg(short = 'o', long = "output", global = true)]
        output: Option<PathBuf>,
        /// Overwrite the input model file.
        #[arg(long, global = true, conflicts_with = "output")]
        in_place: bool,
    },
    /// Write the model as a Graphviz digraph.
    ExportDot {
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Summarize states, agents and local states.
    Show,
}

#[derive(Debug, Subcommand)]
pub enum UpdateOp {
    /// Agent J leaves.
    Offline { target: String },
    /// Agent J joins with the given local states.
    Online {
        target: String,
        #[arg(long, num_args = 1.., required = true)]
        locals: Vec<String>,
    },
    /// I tells everyone else that J left.
    LieOffline {
        #[arg(long)]
        liar: String,
        #[arg(long)]
        target: String,
    },
    /// I tells everyone else that a new agent J joined.
    LieOnline {
        #[arg(long)]
        liar: String,
        #[arg(long = "new")]
        target: String,
        #[arg(long, num_args = 1.., required = true)]
        locals: Vec<String>,
    },
}

fn agent(text: &str) -> Result<AgentId, CliError> {
    AgentId::new(text).map_err(|source| CliError::Id {
        text: text.to_string(),
        source,
    })
}

fn state(text: &str) -> Result<StateId, CliError> {
    text.parse().map_err(|source| CliError::Id {
        text: text.to_string(),
        source,
    })
}

fn states(items: &[String]) -> Result<BTreeSet<StateId>, CliError> {
    items.iter().map(|s| state(s)).collect()
}

impl UpdateOp {
    pub fn to_spec(&self) -> Result<UpdateSpec, CliError> {
        Ok(match self {
            UpdateOp::Offline { target } => UpdateSpec::Offline {
                target: agent(target)?,
            },
            UpdateOp::Online { target, locals } => UpdateSpec::Online {
                target: agent(target)?,
                locals: states(locals)?,
            },
            UpdateOp::LieOffline { liar, target } => UpdateSpec::LieOffline {
                liar: agent(liar)?,
                target: agent(target)?,
            },
            UpdateOp::LieOnline {
                liar,
                target,
                locals,
            } => UpdateSpec::LieOnline {
                liar: agent(liar)?,
                target: agent(target)?,
                locals: states(locals)?,
            },
        })
    }
}

impl Cli {
    pub fn to_command(&self, name: &str) -> Result<Command, CliError> {
        Ok(match &self.command {
            CliCommand::Validate { mode, require_kd45 } => Command::Validate {
                mode: match mode {
                    ModeArg::Global => Mode::Global,
                    ModeArg::Local => Mode::Local,
                },
                require_kd45: *require_kd45,
            },
            CliCommand::Check {
                state: at,
                agent: who,
                global,
                formula,
                expect,
            } => {
                let scope = match (at, who, global) {
                    (Some(s), None, false) => Scope::State(state(s)?),
                    (None, Some(a), false) => Scope::Agent(agent(a)?),
                    (None, None, true) => Scope::Global,
                    _ => {
                        return Err(CliError::Usage(
                            "exactly one of --state, --agent, --global".into(),
                        ))
                    }
                };
                Command::Check {
                    formula: formula.clone(),
                    scope,
                    expect: *expect,
                }
            }
            CliCommand::Update { op, .. } => Command::Update(op.to_spec()?),
            CliCommand::ExportDot { .. } => Command::ExportDot {
                name: name.to_string(),
            },
            CliCommand::Show => Command::Show,
        })
    }

    /// Load the model, run the command, write any output files, and return
    /// the exit status.
    pub fn execute(&self, stdout: &mut impl Write) -> Result<u8, CliError> {
        let loaded = load_model(&self.model)?;
        let name = loaded
            .meta
            .get("name")
            .and_then(|v| v.as_str())
            .map(str::to_string)
            .or_else(|| {
                self.model
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
            })
            .unwrap_or_else(|| "model".into());
        let command = self.to_command(&name)?;
        let outcome = run(&command, &loaded.model)?;
        let io = |source| {
            CliError::from(DocumentError::Io {
                path: self.model.clone(),
                source,
            })
        };
        stdout.write_all(outcome.text.as_bytes()).map_err(io)?;

        match &self.command {
            CliCommand::Update {
                output, in_place, ..
            } => {
                let target = if *in_place {
                    Some(&self.model)
                } else {
                    output.as_ref()
                };
                if let (Some(path), Some(model)) = (target, &outcome.model) {
                    save_model(model, &loaded.meta, path)?;
                    writeln!(stdout, "wrote {}", path.display()).map_err(io)?;
                }
            }
            CliCommand::ExportDot { output } => {
                let dot = outcome.dot.as_deref().unwrap_or_default();
                std::fs::write(output, dot).map_err(|source| DocumentError::Io {
                    path: output.clone(),
                    source,
                })?;
                writeln!(stdout, "wrote {}", output.display()).map_err(io)?;
            }
            _ => {}
        }
        Ok(outcome.status)
    }
}
