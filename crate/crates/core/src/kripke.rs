//! Multi-agent Kripke models with per-agent local states, and the graph
//! utilities the update operators are built from.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::ids::{AgentId, IdError, PropId, StateId, Tag};

pub type Edge = (StateId, StateId);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Id(#[from] IdError),
    #[error("unknown agent {0}")]
    UnknownAgent(AgentId),
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("unknown proposition {0}")]
    UnknownProp(PropId),
    #[error("relation of agent {agent} has edge ({from}, {to}) leaving the state set")]
    DanglingEdge {
        agent: AgentId,
        from: StateId,
        to: StateId,
    },
    #[error("valuation of {prop} mentions undeclared state {state}")]
    DanglingValuation { prop: PropId, state: StateId },
    #[error("local state {state} of agent {agent} is not a declared state")]
    DanglingLocal { agent: AgentId, state: StateId },
    #[error("agent {0} has no local states")]
    EmptyLocals(AgentId),
    #[error("agent {0} is missing a local-state entry")]
    MissingLocals(AgentId),
    #[error("relation given for undeclared agent {0}")]
    UndeclaredRelationAgent(AgentId),
    #[error("local states given for undeclared agent {0}")]
    UndeclaredLocalsAgent(AgentId),
    #[error("valuation given for undeclared proposition {0}")]
    UndeclaredValuationProp(PropId),
    #[error("pruning would leave agent {0} without local states")]
    PrunedLocals(AgentId),
}

/// Plain, unvalidated contents of a model. Convert with
/// [`KripkeModel::from_parts`] to get a checked model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelParts {
    pub states: BTreeSet<StateId>,
    pub agents: BTreeSet<AgentId>,
    pub props: BTreeSet<PropId>,
    /// Agents without an entry get the empty relation.
    pub relations: BTreeMap<AgentId, BTreeSet<Edge>>,
    /// Propositions without an entry are false everywhere.
    pub valuation: BTreeMap<PropId, BTreeSet<StateId>>,
    pub locals: BTreeMap<AgentId, BTreeSet<StateId>>,
}

/// A validated model `⟨S, R, V⟩` together with the local-state function `I`.
///
/// Relations are kept as per-agent adjacency sets. Every declared agent has
/// a (possibly empty) relation and a non-empty set of local states; every
/// declared proposition has a (possibly empty) valuation set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    states: BTreeSet<StateId>,
    agents: BTreeSet<AgentId>,
    props: BTreeSet<PropId>,
    relations: BTreeMap<AgentId, BTreeMap<StateId, BTreeSet<StateId>>>,
    valuation: BTreeMap<PropId, BTreeSet<StateId>>,
    locals: BTreeMap<AgentId, BTreeSet<StateId>>,
}

static NO_STATES: BTreeSet<StateId> = BTreeSet::new();

impl KripkeModel {
    pub fn from_parts(parts: ModelParts) -> Result<Self, ModelError> {
        let ModelParts {
            states,
            agents,
            props,
            relations,
            mut valuation,
            locals,
        } = parts;

        let mut adjacency = BTreeMap::new();
        for agent in &agents {
            adjacency.insert(agent.clone(), BTreeMap::new());
        }
        for (agent, edges) in relations {
            let Some(adj) = adjacency.get_mut(&agent) else {
                return Err(ModelError::UndeclaredRelationAgent(agent));
            };
            for (from, to) in edges {
                if !states.contains(&from) || !states.contains(&to) {
                    return Err(ModelError::DanglingEdge { agent, from, to });
                }
                adj.entry(from).or_insert_with(BTreeSet::new).insert(to);
            }
        }

        for (prop, set) in &valuation {
            if !props.contains(prop) {
                return Err(ModelError::UndeclaredValuationProp(prop.clone()));
            }
            if let Some(state) = set.iter().find(|s| !states.contains(*s)) {
                return Err(ModelError::DanglingValuation {
                    prop: prop.clone(),
                    state: state.clone(),
                });
            }
        }
        for prop in &props {
            valuation.entry(prop.clone()).or_default();
        }

        if let Some(agent) = locals.keys().find(|a| !agents.contains(*a)) {
            return Err(ModelError::UndeclaredLocalsAgent(agent.clone()));
        }
        for agent in &agents {
            let Some(set) = locals.get(agent) else {
                return Err(ModelError::MissingLocals(agent.clone()));
            };
            if set.is_empty() {
                return Err(ModelError::EmptyLocals(agent.clone()));
            }
            if let Some(state) = set.iter().find(|s| !states.contains(*s)) {
                return Err(ModelError::DanglingLocal {
                    agent: agent.clone(),
                    state: state.clone(),
                });
            }
        }

        Ok(Self {
            states,
            agents,
            props,
            relations: adjacency,
            valuation,
            locals,
        })
    }

    pub fn to_parts(&self) -> ModelParts {
        ModelParts {
            states: self.states.clone(),
            agents: self.agents.clone(),
            props: self.props.clone(),
            relations: self
                .agents
                .iter()
                .map(|a| (a.clone(), self.edges(a).collect()))
                .collect(),
            valuation: self.valuation.clone(),
            locals: self.locals.clone(),
        }
    }

    pub fn builder() -> ModelBuilder {
        ModelBuilder::default()
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn agents(&self) -> &BTreeSet<AgentId> {
        &self.agents
    }

    pub fn props(&self) -> &BTreeSet<PropId> {
        &self.props
    }

    pub fn has_state(&self, state: &StateId) -> bool {
        self.states.contains(state)
    }

    pub fn has_agent(&self, agent: &AgentId) -> bool {
        self.agents.contains(agent)
    }

    /// States where `prop` is true; `None` for an undeclared proposition.
    pub fn valuation(&self, prop: &PropId) -> Option<&BTreeSet<StateId>> {
        self.valuation.get(prop)
    }

    /// The local states `I(agent)`; `None` for an undeclared agent.
    pub fn locals(&self, agent: &AgentId) -> Option<&BTreeSet<StateId>> {
        self.locals.get(agent)
    }

    /// Union of every agent's local states.
    pub fn all_locals(&self) -> BTreeSet<StateId> {
        self.locals.values().flatten().cloned().collect()
    }

    /// Props true at `state`, in order.
    pub fn props_at<'a>(&'a self, state: &'a StateId) -> impl Iterator<Item = &'a PropId> + 'a {
        self.valuation
            .iter()
            .filter(move |(_, set)| set.contains(state))
            .map(|(p, _)| p)
    }

    /// Every edge of `agent`'s relation in sorted order. Empty for unknown agents.
    pub fn edges<'a>(&'a self, agent: &AgentId) -> impl Iterator<Item = Edge> + 'a {
        self.relations
            .get(agent)
            .into_iter()
            .flat_map(|adj| adj.iter())
            .flat_map(|(s, ts)| ts.iter().map(move |t| (s.clone(), t.clone())))
    }

    pub fn edge_count(&self, agent: &AgentId) -> usize {
        self.relations
            .get(agent)
            .map_or(0, |adj| adj.values().map(BTreeSet::len).sum())
    }

    pub fn has_edge(&self, agent: &AgentId, from: &StateId, to: &StateId) -> bool {
        self.successor_set(agent, from).contains(to)
    }

    /// Unchecked successor lookup: empty for unknown agents or states.
    pub fn successor_set(&self, agent: &AgentId, state: &StateId) -> &BTreeSet<StateId> {
        self.relations
            .get(agent)
            .and_then(|adj| adj.get(state))
            .unwrap_or(&NO_STATES)
    }

    pub(crate) fn require_agent(&self, agent: &AgentId) -> Result<(), ModelError> {
        if self.agents.contains(agent) {
            Ok(())
        } else {
            Err(ModelError::UnknownAgent(agent.clone()))
        }
    }

    pub(crate) fn require_state(&self, state: &StateId) -> Result<(), ModelError> {
        if self.states.contains(state) {
            Ok(())
        } else {
            Err(ModelError::UnknownState(state.clone()))
        }
    }

    /// `{ t | (state, t) ∈ R(agent) }`.
    pub fn successors(
        &self,
        agent: &AgentId,
        state: &StateId,
    ) -> Result<BTreeSet<StateId>, ModelError> {
        self.require_agent(agent)?;
        self.require_state(state)?;
        Ok(self.successor_set(agent, state).clone())
    }

    /// `R(agent)` with its domain restricted to `I(agent)`.
    pub fn subjective_relation(&self, agent: &AgentId) -> Result<BTreeSet<Edge>, ModelError> {
        self.require_agent(agent)?;
        let locals = &self.locals[agent];
        Ok(self
            .edges(agent)
            .filter(|(s, _)| locals.contains(s))
            .collect())
    }

    /// Smallest superset of `seeds` closed under the relations of `agents`.
    pub fn reachable_from(
        &self,
        seeds: &BTreeSet<StateId>,
        agents: &BTreeSet<AgentId>,
    ) -> Result<BTreeSet<StateId>, ModelError> {
        for s in seeds {
            self.require_state(s)?;
        }
        for a in agents {
            self.require_agent(a)?;
        }
        let mut seen = seeds.clone();
        let mut queue: VecDeque<&StateId> = seeds.iter().collect();
        while let Some(s) = queue.pop_front() {
            for agent in agents {
                for t in self.successor_set(agent, s) {
                    if seen.insert(t.clone()) {
                        queue.push_back(t);
                    }
                }
            }
        }
        Ok(seen)
    }

    /// Keep only the states reachable from `seeds` through any agent's
    /// relation. Fails if some agent would be left without local states.
    pub fn prune_unreachable(&self, seeds: &BTreeSet<StateId>) -> Result<Self, ModelError> {
        let keep = self.reachable_from(seeds, &self.agents)?;
        self.restrict_to(&keep)
    }

    pub(crate) fn restrict_to(&self, keep: &BTreeSet<StateId>) -> Result<Self, ModelError> {
        let mut locals = BTreeMap::new();
        for (agent, set) in &self.locals {
            let kept: BTreeSet<_> = set.intersection(keep).cloned().collect();
            if kept.is_empty() {
                return Err(ModelError::PrunedLocals(agent.clone()));
            }
            locals.insert(agent.clone(), kept);
        }
        let relations = self
            .relations
            .iter()
            .map(|(agent, adj)| {
                let adj = adj
                    .iter()
                    .filter(|(s, _)| keep.contains(*s))
                    .map(|(s, ts)| (s.clone(), ts.intersection(keep).cloned().collect()))
                    .filter(|(_, ts): &(StateId, BTreeSet<StateId>)| !ts.is_empty())
                    .collect();
                (agent.clone(), adj)
            })
            .collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(p, set)| (p.clone(), set.intersection(keep).cloned().collect()))
            .collect();
        Ok(Self {
            states: keep.intersection(&self.states).cloned().collect(),
            agents: self.agents.clone(),
            props: self.props.clone(),
            relations,
            valuation,
            locals,
        })
    }

    /// Isomorphic copy with `tag` appended to every state's lineage.
    pub fn replicate_with_lineage(&self, tag: Tag) -> Self {
        let rename = |set: &BTreeSet<StateId>| set.iter().map(|s| s.tagged(tag)).collect();
        Self {
            states: rename(&self.states),
            agents: self.agents.clone(),
            props: self.props.clone(),
            relations: self
                .relations
                .iter()
                .map(|(a, adj)| {
                    let adj = adj
                        .iter()
                        .map(|(s, ts)| (s.tagged(tag), rename(ts)))
                        .collect();
                    (a.clone(), adj)
                })
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, set)| (p.clone(), rename(set)))
                .collect(),
            locals: self
                .locals
                .iter()
                .map(|(a, set)| (a.clone(), rename(set)))
                .collect(),
        }
    }
}

pub fn successors(
    model: &KripkeModel,
    agent: &AgentId,
    state: &StateId,
) -> Result<BTreeSet<StateId>, ModelError> {
    model.successors(agent, state)
}

pub fn subjective_relation(
    model: &KripkeModel,
    agent: &AgentId,
) -> Result<BTreeSet<Edge>, ModelError> {
    model.subjective_relation(agent)
}

pub fn reachable_from(
    model: &KripkeModel,
    seeds: &BTreeSet<StateId>,
    agents: &BTreeSet<AgentId>,
) -> Result<BTreeSet<StateId>, ModelError> {
    model.reachable_from(seeds, agents)
}

pub fn prune_unreachable(
    model: &KripkeModel,
    seeds: &BTreeSet<StateId>,
) -> Result<KripkeModel, ModelError> {
    model.prune_unreachable(seeds)
}

pub fn replicate_with_lineage(model: &KripkeModel, tag: Tag) -> KripkeModel {
    model.replicate_with_lineage(tag)
}

/// String-keyed construction helper, mostly for fixtures and tests.
///
/// ```
/// use epk_core::KripkeModel;
///
/// let m = KripkeModel::builder()
///     .states(["a", "b"])
///     .agent("i", [("a", "a"), ("b", "b")], ["a"])
///     .prop("p", ["a"])
///     .build()
///     .unwrap();
/// assert_eq!(m.states().len(), 2);
/// ```
type AgentSpec = (String, Vec<(String, String)>, Vec<String>);

#[derive(Debug, Default)]
pub struct ModelBuilder {
    states: Vec<String>,
    agents: Vec<AgentSpec>,
    props: Vec<(String, Vec<String>)>,
}

impl ModelBuilder {
    pub fn states<I, S>(mut self, states: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.extend(states.into_iter().map(Into::into));
        self
    }

    pub fn agent<E, L, S>(mut self, name: &str, edges: E, locals: L) -> Self
    where
        E: IntoIterator<Item = (S, S)>,
        L: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.agents.push((
            name.to_string(),
            edges
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
            locals.into_iter().map(Into::into).collect(),
        ));
        self
    }

    pub fn prop<T, S>(mut self, name: &str, true_at: T) -> Self
    where
        T: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.props.push((
            name.to_string(),
            true_at.into_iter().map(Into::into).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<KripkeModel, ModelError> {
        let state = |s: &String| s.parse::<StateId>();
        let mut parts = ModelParts::default();
        for s in &self.states {
            parts.states.insert(state(s)?);
        }
        for (name, edges, locals) in &self.agents {
            let agent = AgentId::new(name.as_str())?;
            let mut rel = BTreeSet::new();
            for (a, b) in edges {
                rel.insert((state(a)?, state(b)?));
            }
            let locals = locals.iter().map(state).collect::<Result<_, _>>()?;
            parts.agents.insert(agent.clone());
            parts.relations.insert(agent.clone(), rel);
            parts.locals.insert(agent, locals);
        }
        for (name, true_at) in &self.props {
            let prop = PropId::new(name.as_str())?;
            let set = true_at.iter().map(state).collect::<Result<_, _>>()?;
            parts.props.insert(prop.clone());
            parts.valuation.insert(prop, set);
        }
        KripkeModel::from_parts(parts)
    }
}
