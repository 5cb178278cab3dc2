//! JSON model files.
//!
//! ```json
//! {
//!   "states": ["1", "2", "3"],
//!   "agents": ["f", "m"],
//!   "props": ["p"],
//!   "relations": {"f": [["1", "3"]], "m": [["1", "1"]]},
//!   "valuation": {"p": ["1", "3"]},
//!   "locals": {"f": ["3"], "m": ["1"]},
//!   "meta": {"name": "example"}
//! }
//! ```
//!
//! Replica states are written `base@act` / `base@shift`. Saving always emits
//! the canonical layout: fixed key order, sorted lists, one relation or
//! valuation entry per line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use epk_core::{AgentId, IdError, KripkeModel, ModelError, ModelParts, PropId, StateId};
use serde::Deserialize;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: bad identifier {text:?}: {source}")]
    Id {
        path: PathBuf,
        text: String,
        source: IdError,
    },
    #[error("{path}: {source}")]
    Invalid {
        path: PathBuf,
        source: Box<ModelError>,
    },
}

/// On-disk form of a model plus free-form metadata.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub states: Vec<String>,
    pub agents: Vec<String>,
    #[serde(default)]
    pub props: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    pub locals: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub meta: Map<String, Value>,
}

impl ModelDocument {
    pub fn from_model(model: &KripkeModel, meta: Map<String, Value>) -> Self {
        let names = |set: &BTreeSet<StateId>| set.iter().map(ToString::to_string).collect();
        ModelDocument {
            states: names(model.states()),
            agents: model.agents().iter().map(ToString::to_string).collect(),
            props: model.props().iter().map(ToString::to_string).collect(),
            relations: model
                .agents()
                .iter()
                .map(|a| {
                    let edges = model.edges(a).map(|(s, t)| (s.to_string(), t.to_string()));
                    (a.to_string(), edges.collect())
                })
                .collect(),
            valuation: model
                .props()
                .iter()
                .map(|p| {
                    (
                        p.to_string(),
                        names(model.valuation(p).expect("declared prop")),
                    )
                })
                .collect(),
            locals: model
                .agents()
                .iter()
                .map(|a| {
                    (
                        a.to_string(),
                        names(model.locals(a).expect("declared agent")),
                    )
                })
                .collect(),
            meta,
        }
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_model(&self, path: &Path) -> Result<KripkeModel, DocumentError> {
        fn id<T>(
            path: &Path,
            text: &str,
            make: impl Fn(&str) -> Result<T, IdError>,
        ) -> Result<T, DocumentError> {
            make(text).map_err(|source| DocumentError::Id {
                path: path.to_path_buf(),
                text: text.to_string(),
                source,
            })
        }
        let state = |s: &String| id(path, s, |t| t.parse::<StateId>());
        let agent = |a: &String| id(path, a, |t| AgentId::new(t));
        let prop = |p: &String| id(path, p, |t| PropId::new(t));

        let mut parts = ModelParts::default();
        for s in &self.states {
            parts.states.insert(state(s)?);
        }
        for a in &self.agents {
            parts.agents.insert(agent(a)?);
        }
        for p in &self.props {
            parts.props.insert(prop(p)?);
        }
        for (a, edges) in &self.relations {
            let mut set = BTreeSet::new();
            for (s, t) in edges {
                set.insert((state(s)?, state(t)?));
            }
            parts.relations.insert(agent(a)?, set);
        }
        for (p, states) in &self.valuation {
            let set = states.iter().map(state).collect::<Result<_, _>>()?;
            parts.valuation.insert(prop(p)?, set);
        }
        for (a, states) in &self.locals {
            let set = states.iter().map(state).collect::<Result<_, _>>()?;
            parts.locals.insert(agent(a)?, set);
        }
        KripkeModel::from_parts(parts).map_err(|source| DocumentError::Invalid {
            path: path.to_path_buf(),
            source: Box::new(source),
        })
    }

    /// Canonical text. Assumes lists are already sorted, as they are for
    /// documents built with [`ModelDocument::from_model`].
    pub fn to_canonical_string(&self) -> String {
        let q = |s: &str| serde_json::to_string(s).expect("string serializes");
        let list = |items: &[String]| {
            let inner: Vec<String> = items.iter().map(|s| q(s)).collect();
            format!("[{}]", inner.join(", "))
        };
        fn map_block<V>(
            out: &mut String,
            key: &str,
            map: &BTreeMap<String, V>,
            render: impl Fn(&V) -> String,
        ) {
            if map.is_empty() {
                let _ = writeln!(out, "  \"{key}\": {{}},");
                return;
            }
            let _ = writeln!(out, "  \"{key}\": {{");
            let last = map.len() - 1;
            for (n, (k, v)) in map.iter().enumerate() {
                let comma = if n == last { "" } else { "," };
                let _ = writeln!(
                    out,
                    "    {}: {}{comma}",
                    serde_json::to_string(k).expect("string serializes"),
                    render(v)
                );
            }
            let _ = writeln!(out, "  }},");
        }

        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"states\": {},", list(&self.states));
        let _ = writeln!(out, "  \"agents\": {},", list(&self.agents));
        let _ = writeln!(out, "  \"props\": {},", list(&self.props));
        map_block(&mut out, "relations", &self.relations, |edges| {
            let inner: Vec<String> = edges
                .iter()
                .map(|(s, t)| format!("[{}, {}]", q(s), q(t)))
                .collect();
            format!("[{}]", inner.join(", "))
        });
        map_block(&mut out, "valuation", &self.valuation, |v| list(v));
        map_block(&mut out, "locals", &self.locals, |v| list(v));
        let meta = serde_json::to_string(&self.meta).expect("json value serializes");
        let _ = writeln!(out, "  \"meta\": {meta}");
        out.push_str("}\n");
        out
    }
}

/// A model read from disk together with its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedModel {
    pub model: KripkeModel,
    pub meta: Map<String, Value>,
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LoadedModel, DocumentError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let doc = ModelDocument::parse(&text, path)?;
    let model = doc.to_model(path)?;
    Ok(LoadedModel {
        model,
        meta: doc.meta,
    })
}

pub fn save_model(
    model: &KripkeModel,
    meta: &Map<String, Value>,
    path: impl AsRef<Path>,
) -> Result<(), DocumentError> {
    let path = path.as_ref();
    let text = ModelDocument::from_model(model, meta.clone()).to_canonical_string();
    fs::write(path, text).map_err(|source| DocumentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
  "states": ["a", "b@act"],
  "agents": ["i"],
  "props": ["p"],
  "relations": {
    "i": [["a", "b@act"], ["b@act", "b@act"]]
  },
  "valuation": {
    "p": ["a"]
  },
  "locals": {
    "i": ["a"]
  },
  "meta": {"name":"small"}
}
"#;

    #[test]
    fn canonical_text_round_trips() {
        let path = Path::new("small.json");
        let doc = ModelDocument::parse(SMALL, path).unwrap();
        let model = doc.to_model(path).unwrap();
        assert_eq!(model.states().len(), 2);
        let again = ModelDocument::from_model(&model, doc.meta.clone());
        assert_eq!(again, doc);
        assert_eq!(again.to_canonical_string(), SMALL);
    }

    #[test]
    fn reports_undeclared_states() {
        let text = SMALL.replace(r#"["a", "b@act"], ["b@act""#, r#"["a", "zz"], ["b@act""#);
        let path = Path::new("bad.json");
        let err = ModelDocument::parse(&text, path)
            .unwrap()
            .to_model(path)
            .unwrap_err();
        assert!(err.to_string().contains("zz"), "{err}");
    }

    #[test]
    fn reports_syntax_position() {
        let err = ModelDocument::parse("{\n  \"states\": [1,\n", Path::new("x.json")).unwrap_err();
        match err {
            DocumentError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_and_bad_ids() {
        let path = Path::new("x.json");
        let text = SMALL.replace("\"meta\"", "\"extra\": 1,\n  \"meta\"");
        assert!(matches!(
            ModelDocument::parse(&text, path),
            Err(DocumentError::Syntax { .. })
        ));
        let text = SMALL.replace("\"b@act\"]", "\"b@nope\"]");
        let err = ModelDocument::parse(&text, path)
            .unwrap()
            .to_model(path)
            .unwrap_err();
        assert!(matches!(err, DocumentError::Id { .. }), "{err}");
    }

    #[test]
    fn empty_maps_are_written_inline() {
        let model = KripkeModel::builder().states(["s"]).build().unwrap();
        let text = ModelDocument::from_model(&model, Map::new()).to_canonical_string();
        assert!(text.contains("\"relations\": {},"));
        let back = ModelDocument::parse(&text, Path::new("e.json"))
            .unwrap()
            .to_model(Path::new("e.json"))
            .unwrap();
        assert_eq!(back, model);
    }
}
