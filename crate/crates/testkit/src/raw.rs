//! A string-keyed model with no invariants of its own, used by the oracles
//! so they share nothing with the production data structure.

use std::collections::{BTreeMap, BTreeSet};

use epk_core::{AgentId, KripkeModel, ModelParts, PropId, StateId};

pub type Pair = (String, String);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawModel {
    pub states: BTreeSet<String>,
    pub agents: BTreeSet<String>,
    pub props: BTreeSet<String>,
    pub rel: BTreeMap<String, BTreeSet<Pair>>,
    pub val: BTreeMap<String, BTreeSet<String>>,
    pub locals: BTreeMap<String, BTreeSet<String>>,
}

impl RawModel {
    pub fn from_model(m: &KripkeModel) -> Self {
        let names = |set: &BTreeSet<StateId>| set.iter().map(ToString::to_string).collect();
        RawModel {
            states: names(m.states()),
            agents: m.agents().iter().map(ToString::to_string).collect(),
            props: m.props().iter().map(ToString::to_string).collect(),
            rel: m
                .agents()
                .iter()
                .map(|a| {
                    let edges = m.edges(a).map(|(s, t)| (s.to_string(), t.to_string()));
                    (a.to_string(), edges.collect())
                })
                .collect(),
            val: m
                .props()
                .iter()
                .map(|p| (p.to_string(), names(m.valuation(p).unwrap())))
                .collect(),
            locals: m
                .agents()
                .iter()
                .map(|a| (a.to_string(), names(m.locals(a).unwrap())))
                .collect(),
        }
    }

    pub fn to_model(&self) -> KripkeModel {
        let st = |s: &String| s.parse::<StateId>().unwrap();
        let ag = |a: &String| AgentId::new(a.as_str()).unwrap();
        let parts = ModelParts {
            states: self.states.iter().map(st).collect(),
            agents: self.agents.iter().map(ag).collect(),
            props: self
                .props
                .iter()
                .map(|p| PropId::new(p.as_str()).unwrap())
                .collect(),
            relations: self
                .rel
                .iter()
                .map(|(a, es)| (ag(a), es.iter().map(|(s, t)| (st(s), st(t))).collect()))
                .collect(),
            valuation: self
                .val
                .iter()
                .map(|(p, set)| {
                    (
                        PropId::new(p.as_str()).unwrap(),
                        set.iter().map(st).collect(),
                    )
                })
                .collect(),
            locals: self
                .locals
                .iter()
                .map(|(a, set)| (ag(a), set.iter().map(st).collect()))
                .collect(),
        };
        KripkeModel::from_parts(parts).expect("raw model is well formed")
    }

    pub fn edges(&self, agent: &str) -> impl Iterator<Item = &Pair> {
        self.rel.get(agent).into_iter().flatten()
    }
}
