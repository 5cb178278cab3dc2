//! Structural checks for the frame conditions behind S5 and KD45, either
//! over the whole state set or over the part of the model an agent can
//! reach from its local states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ids::{AgentId, StateId};
use crate::kripke::{Edge, KripkeModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameProperty {
    Reflexive,
    Symmetric,
    Serial,
    Transitive,
    Euclidean,
}

impl FrameProperty {
    pub const ALL: [FrameProperty; 5] = [
        FrameProperty::Reflexive,
        FrameProperty::Symmetric,
        FrameProperty::Serial,
        FrameProperty::Transitive,
        FrameProperty::Euclidean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameProperty::Reflexive => "reflexive",
            FrameProperty::Symmetric => "symmetric",
            FrameProperty::Serial => "serial",
            FrameProperty::Transitive => "transitive",
            FrameProperty::Euclidean => "euclidean",
        }
    }
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("edge ({0}, {1}) leaves the checked domain")]
    EdgeOutsideDomain(StateId, StateId),
}

/// Verdicts for one relation over one domain.
///
/// A property fails exactly when a witness is recorded for it:
/// * reflexive: `[s]` with `(s,s)` missing
/// * symmetric: `[s, t]` with `(s,t)` present and `(t,s)` missing
/// * serial: `[s]` with no outgoing edge
/// * transitive: `[s, t, u]` with `(s,t)`, `(t,u)` present and `(s,u)` missing
/// * euclidean: `[s, t, u]` with `(s,t)`, `(s,u)` present and `(t,u)` missing
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramePropertyReport {
    pub agent: Option<AgentId>,
    pub domain: BTreeSet<StateId>,
    witnesses: BTreeMap<FrameProperty, Vec<StateId>>,
}

impl FramePropertyReport {
    pub fn holds(&self, property: FrameProperty) -> bool {
        !self.witnesses.contains_key(&property)
    }

    pub fn witness(&self, property: FrameProperty) -> Option<&[StateId]> {
        self.witnesses.get(&property).map(Vec::as_slice)
    }

    pub fn reflexive(&self) -> bool {
        self.holds(FrameProperty::Reflexive)
    }

    pub fn symmetric(&self) -> bool {
        self.holds(FrameProperty::Symmetric)
    }

    pub fn serial(&self) -> bool {
        self.holds(FrameProperty::Serial)
    }

    pub fn transitive(&self) -> bool {
        self.holds(FrameProperty::Transitive)
    }

    pub fn euclidean(&self) -> bool {
        self.holds(FrameProperty::Euclidean)
    }

    /// Serial, transitive and Euclidean.
    pub fn is_kd45(&self) -> bool {
        self.serial() && self.transitive() && self.euclidean()
    }

    /// An equivalence relation.
    pub fn is_s5(&self) -> bool {
        self.reflexive() && self.symmetric() && self.transitive()
    }
}

impl fmt::Display for FramePropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(agent) = &self.agent {
            write!(f, "{agent}: ")?;
        }
        let domain: Vec<String> = self.domain.iter().map(ToString::to_string).collect();
        write!(f, "domain {{{}}}", domain.join(","))?;
        for p in FrameProperty::ALL {
            write!(f, " {p}={}", self.holds(p))?;
            if let Some(w) = self.witness(p) {
                let w: Vec<String> = w.iter().map(ToString::to_string).collect();
                write!(f, " ({})", w.join(","))?;
            }
        }
        write!(f, " kd45={} s5={}", self.is_kd45(), self.is_s5())
    }
}

pub fn is_kd45(report: &FramePropertyReport) -> bool {
    report.is_kd45()
}

pub fn is_s5(report: &FramePropertyReport) -> bool {
    report.is_s5()
}

/// Check the five frame properties of `relation` over `domain`.
pub fn check_properties(
    relation: &BTreeSet<Edge>,
    domain: &BTreeSet<StateId>,
) -> Result<FramePropertyReport, FrameError> {
    let mut succ: BTreeMap<&StateId, BTreeSet<&StateId>> = BTreeMap::new();
    for (s, t) in relation {
        if !domain.contains(s) || !domain.contains(t) {
            return Err(FrameError::EdgeOutsideDomain(s.clone(), t.clone()));
        }
        succ.entry(s).or_default().insert(t);
    }
    let empty = BTreeSet::new();
    let out = |s: &StateId| succ.get(s).unwrap_or(&empty);
    let has = |s: &StateId, t: &StateId| out(s).contains(t);

    let mut witnesses = BTreeMap::new();
    let mut fail = |p: FrameProperty, w: &[&StateId]| {
        witnesses
            .entry(p)
            .or_insert_with(|| w.iter().map(|s| (*s).clone()).collect());
    };

    for s in domain {
        if !has(s, s) {
            fail(FrameProperty::Reflexive, &[s]);
        }
        if out(s).is_empty() {
            fail(FrameProperty::Serial, &[s]);
        }
        for &t in out(s) {
            if !has(t, s) {
                fail(FrameProperty::Symmetric, &[s, t]);
            }
            for &u in out(t) {
                if !has(s, u) {
                    fail(FrameProperty::Transitive, &[s, t, u]);
                }
            }
            for &u in out(s) {
                if !has(t, u) {
                    fail(FrameProperty::Euclidean, &[s, t, u]);
                }
            }
        }
    }

    Ok(FramePropertyReport {
        agent: None,
        domain: domain.clone(),
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Each relation over the full state set.
    Global,
    /// Each relation restricted to the states its agent reaches from its
    /// local states.
    Local,
}

pub fn classify_model(model: &KripkeModel, mode: Mode) -> BTreeMap<AgentId, FramePropertyReport> {
    model
        .agents()
        .iter()
        .map(|agent| {
            let (domain, relation): (BTreeSet<StateId>, BTreeSet<Edge>) = match mode {
                Mode::Global => (model.states().clone(), model.edges(agent).collect()),
                Mode::Local => {
                    let only = [agent.clone()].into_iter().collect();
                    let locals = model.locals(agent).expect("declared agent");
                    let domain = model
                        .reachable_from(locals, &only)
                        .expect("locals and agent belong to the model");
                    let relation = model
                        .edges(agent)
                        .filter(|(s, _)| domain.contains(s))
                        .collect();
                    (domain, relation)
                }
            };
            let mut report =
                check_properties(&relation, &domain).expect("closed domain contains all endpoints");
            report.agent = Some(agent.clone());
            (agent.clone(), report)
        })
        .collect()
}
