use std::fmt::Write as _;

use epk_core::frame::{classify_model, Mode};
use epk_core::{
    holds_at, holds_for_agent, holds_globally, parse, AgentId, IdError, KripkeModel, ModelError,
    ParseError, StateId, UpdateError, UpdateSpec,
};
use thiserror::Error;

use crate::document::DocumentError;
use crate::dot::render_dot;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Document(Box<DocumentError>),
    #[error("formula: {0}")]
    Formula(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Update(#[from] UpdateError),
    #[error("bad identifier {text:?}: {source}")]
    Id { text: String, source: IdError },
    #[error("{0}")]
    Usage(String),
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Document(Box::new(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    State(StateId),
    Agent(AgentId),
    Global,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate {
        mode: Mode,
        require_kd45: bool,
    },
    Check {
        formula: String,
        scope: Scope,
        expect: Option<bool>,
    },
    Update(UpdateSpec),
    ExportDot {
        name: String,
    },
    Show,
}

/// Printed text, exit status, and whatever the command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    /// 0 on success, 1 when an expectation (`--expect`, `--require-kd45`) failed.
    pub status: u8,
    pub model: Option<KripkeModel>,
    pub dot: Option<String>,
}

impl Outcome {
    fn text(text: String) -> Self {
        Outcome {
            text,
            status: 0,
            model: None,
            dot: None,
        }
    }
}

fn show(model: &KripkeModel) -> String {
    let join = |items: Vec<String>| items.join(" ");
    let mut out = String::new();
    let states: Vec<String> = model.states().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "states ({}): {}", states.len(), join(states));
    let agents: Vec<String> = model.agents().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "agents ({}): {}", agents.len(), join(agents));
    let props: Vec<String> = model.props().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "props ({}): {}", props.len(), join(props));
    for agent in model.agents() {
        let locals: Vec<String> = model
            .locals(agent)
            .into_iter()
            .flatten()
            .map(ToString::to_string)
            .collect();
        let _ = writeln!(
            out,
            "{agent}: locals {{{}}}, {} edges",
            locals.join(","),
            model.edge_count(agent)
        );
    }
    out
}

pub fn run(command: &Command, model: &KripkeModel) -> Result<Outcome, CliError> {
    match command {
        Command::Show => Ok(Outcome::text(show(model))),
        Command::Validate { mode, require_kd45 } => {
            let reports = classify_model(model, *mode);
            let mut text = String::new();
            for report in reports.values() {
                let _ = writeln!(text, "{report}");
            }
            let failed = *require_kd45 && reports.values().any(|r| !r.is_kd45());
            Ok(Outcome {
                status: u8::from(failed),
                ..Outcome::text(text)
            })
        }
        Command::Check {
            formula,
            scope,
            expect,
        } => {
            let f = parse(formula)?;
            let value = match scope {
                Scope::State(s) => holds_at(model, s, &f)?,
                Scope::Agent(a) => holds_for_agent(model, a, &f)?,
                Scope::Global => holds_globally(model, &f)?,
            };
            let mismatch = expect.is_some_and(|e| e != value);
            Ok(Outcome {
                status: u8::from(mismatch),
                ..Outcome::text(format!("{value}\n"))
            })
        }
        Command::Update(spec) => {
            let result = spec.apply(model)?;
            Ok(Outcome {
                model: Some(result.model.clone()),
                ..Outcome::text(format!("update {}\n{result}", spec.kind()))
            })
        }
        Command::ExportDot { name } => {
            let dot = render_dot(model, name);
            Ok(Outcome {
                dot: Some(dot),
                ..Outcome::text(String::new())
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure2() -> KripkeModel {
        KripkeModel::builder()
            .states(["1", "2", "3"])
            .agent(
                "m",
                [("1", "1"), ("2", "2"), ("2", "1"), ("1", "2"), ("3", "3")],
                ["1", "2"],
            )
            .agent("f", [("1", "3"), ("2", "3"), ("3", "3")], ["3"])
            .agent("g", [("3", "3")], ["3"])
            .prop("p", ["1", "3"])
            .build()
            .unwrap()
    }

    fn check(formula: &str, scope: Scope, expect: Option<bool>) -> Command {
        Command::Check {
            formula: formula.into(),
            scope,
            expect,
        }
    }

    #[test]
    fn check_scopes() {
        let m = figure2();
        let agent = Scope::Agent(AgentId::new("m").unwrap());
        let out = run(&check("~P[m,g]", agent.clone(), None), &m).unwrap();
        assert_eq!((out.text.as_str(), out.status), ("true\n", 0));
        let out = run(&check("p", Scope::Global, Some(true)), &m).unwrap();
        assert_eq!((out.text.as_str(), out.status), ("false\n", 1));
        let out = run(
            &check("p", Scope::State("2".parse().unwrap()), Some(false)),
            &m,
        )
        .unwrap();
        assert_eq!(out.status, 0);
        assert!(matches!(
            run(&check("p &", agent.clone(), None), &m),
            Err(CliError::Formula(_))
        ));
        assert!(matches!(
            run(&check("q", agent, None), &m),
            Err(CliError::Model(ModelError::UnknownProp(_)))
        ));
    }

    #[test]
    fn validate_modes() {
        let m = figure2();
        let global = Command::Validate {
            mode: Mode::Global,
            require_kd45: true,
        };
        let out = run(&global, &m).unwrap();
        assert_eq!(out.status, 1);
        assert!(out.text.contains("g: domain {1,2,3}"));
        assert!(out.text.contains("serial=false (1)"));

        let local = Command::Validate {
            mode: Mode::Local,
            require_kd45: true,
        };
        let out = run(&local, &m).unwrap();
        assert_eq!(out.status, 0);
        assert_eq!(out.text.matches("kd45=true").count(), 3);
    }

    #[test]
    fn show_and_update() {
        let m = figure2();
        let out = run(&Command::Show, &m).unwrap();
        assert!(out.text.contains("states (3): 1 2 3"));
        assert!(out.text.contains("m: locals {1,2}, 5 edges"));

        let spec = UpdateSpec::Offline {
            target: AgentId::new("g").unwrap(),
        };
        let out = run(&Command::Update(spec), &m).unwrap();
        assert!(out.text.starts_with("update offline\n"));
        assert!(out.text.contains("discarded: 0 ()"));
        assert_eq!(out.model.unwrap().agents().len(), 2);
    }
}
