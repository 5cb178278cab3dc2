//! Ontological updates: announcing that an agent went offline or came
//! online, truthfully or as a lie.
//!
//! A lie by agent `i` copies the model into an `act` region (what really
//! holds, where the informed agents stay) and a `shift` region (what the
//! misinformed agents are told). Misinformed agents have their edges
//! inside `act` replaced by links into `shift`, so from any actual world
//! they only consider the fictional situation possible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::ids::{AgentId, StateId, Tag};
use crate::kripke::{Edge, KripkeModel, ModelError, ModelParts};
use crate::semantics::holds_for_agent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpdateError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("agent {0} is already part of the model")]
    AgentExists(AgentId),
    #[error("liar and target are the same agent {0}")]
    SelfLie(AgentId),
    #[error("the new agent needs at least one local state")]
    NoLocals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UpdateKind {
    Offline,
    Online,
    LieOffline,
    LieOnline,
}

impl fmt::Display for UpdateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpdateKind::Offline => "offline",
            UpdateKind::Online => "online",
            UpdateKind::LieOffline => "lie-offline",
            UpdateKind::LieOnline => "lie-online",
        })
    }
}

/// One of the four updates with exactly the parameters it needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpdateSpec {
    Offline {
        target: AgentId,
    },
    Online {
        target: AgentId,
        locals: BTreeSet<StateId>,
    },
    LieOffline {
        liar: AgentId,
        target: AgentId,
    },
    /// `locals` are states of the input model; the new agent is placed on
    /// their `shift` copies.
    LieOnline {
        liar: AgentId,
        target: AgentId,
        locals: BTreeSet<StateId>,
    },
}

impl UpdateSpec {
    pub fn kind(&self) -> UpdateKind {
        match self {
            UpdateSpec::Offline { .. } => UpdateKind::Offline,
            UpdateSpec::Online { .. } => UpdateKind::Online,
            UpdateSpec::LieOffline { .. } => UpdateKind::LieOffline,
            UpdateSpec::LieOnline { .. } => UpdateKind::LieOnline,
        }
    }

    pub fn target(&self) -> &AgentId {
        match self {
            UpdateSpec::Offline { target }
            | UpdateSpec::Online { target, .. }
            | UpdateSpec::LieOffline { target, .. }
            | UpdateSpec::LieOnline { target, .. } => target,
        }
    }

    pub fn liar(&self) -> Option<&AgentId> {
        match self {
            UpdateSpec::LieOffline { liar, .. } | UpdateSpec::LieOnline { liar, .. } => Some(liar),
            _ => None,
        }
    }

    pub fn apply(&self, model: &KripkeModel) -> Result<UpdateResult, UpdateError> {
        match self {
            UpdateSpec::Offline { target } => update_offline(model, target),
            UpdateSpec::Online { target, locals } => update_online(model, target, locals),
            UpdateSpec::LieOffline { liar, target } => lie_offline(model, liar, target),
            UpdateSpec::LieOnline {
                liar,
                target,
                locals,
            } => lie_online(model, liar, target, locals),
        }
    }
}

/// The updated model plus what changed relative to the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateResult {
    pub model: KripkeModel,
    /// States built during the update and then dropped as unreachable.
    pub discarded_states: BTreeSet<StateId>,
    /// Per agent, edges of the output missing from the input.
    pub added_edges: BTreeMap<AgentId, usize>,
    /// Per agent, edges of the input missing from the output.
    pub removed_edges: BTreeMap<AgentId, usize>,
    pub warnings: Vec<String>,
}

impl fmt::Display for UpdateResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = |set: &BTreeSet<StateId>| {
            set.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        writeln!(
            f,
            "states: {} ({})",
            self.model.states().len(),
            ids(self.model.states())
        )?;
        writeln!(
            f,
            "discarded: {} ({})",
            self.discarded_states.len(),
            ids(&self.discarded_states)
        )?;
        for (agent, added) in &self.added_edges {
            let removed = self.removed_edges.get(agent).copied().unwrap_or(0);
            writeln!(f, "edges {agent}: +{added} -{removed}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

fn edge_diff(
    before: &KripkeModel,
    after: &KripkeModel,
) -> (BTreeMap<AgentId, usize>, BTreeMap<AgentId, usize>) {
    let mut added = BTreeMap::new();
    let mut removed = BTreeMap::new();
    for agent in before.agents().union(after.agents()) {
        let old: BTreeSet<Edge> = before.edges(agent).collect();
        let new: BTreeSet<Edge> = after.edges(agent).collect();
        added.insert(agent.clone(), new.difference(&old).count());
        removed.insert(agent.clone(), old.difference(&new).count());
    }
    (added, removed)
}

fn finish(
    input: &KripkeModel,
    staged: KripkeModel,
    prune: bool,
    warnings: Vec<String>,
) -> Result<UpdateResult, UpdateError> {
    let model = if prune {
        staged.prune_unreachable(&staged.all_locals())?
    } else {
        staged.clone()
    };
    let discarded_states = staged
        .states()
        .difference(model.states())
        .cloned()
        .collect();
    let (added_edges, removed_edges) = edge_diff(input, &model);
    Ok(UpdateResult {
        model,
        discarded_states,
        added_edges,
        removed_edges,
        warnings,
    })
}

fn check_new_locals(model: &KripkeModel, locals: &BTreeSet<StateId>) -> Result<(), UpdateError> {
    if locals.is_empty() {
        return Err(UpdateError::NoLocals);
    }
    for s in locals {
        model.require_state(s)?;
    }
    Ok(())
}

/// `j` leaves: its relation is deleted and whatever the remaining agents
/// can no longer reach is discarded.
pub fn update_offline(model: &KripkeModel, j: &AgentId) -> Result<UpdateResult, UpdateError> {
    model.require_agent(j)?;
    let mut parts = model.to_parts();
    parts.agents.remove(j);
    parts.relations.remove(j);
    parts.locals.remove(j);
    let staged = KripkeModel::from_parts(parts)?;
    finish(model, staged, true, Vec::new())
}

/// `j` joins with local states `locals` and the universal relation, so it
/// cannot tell any two worlds apart.
pub fn update_online(
    model: &KripkeModel,
    j: &AgentId,
    locals: &BTreeSet<StateId>,
) -> Result<UpdateResult, UpdateError> {
    if model.has_agent(j) {
        return Err(UpdateError::AgentExists(j.clone()));
    }
    check_new_locals(model, locals)?;
    let mut parts = model.to_parts();
    let universal = model
        .states()
        .iter()
        .flat_map(|s| model.states().iter().map(move |t| (s.clone(), t.clone())))
        .collect();
    parts.agents.insert(j.clone());
    parts.relations.insert(j.clone(), universal);
    parts.locals.insert(j.clone(), locals.clone());
    let staged = KripkeModel::from_parts(parts)?;
    finish(model, staged, false, Vec::new())
}

/// Both replicas side by side, with no edges yet.
fn two_regions(act: &ModelParts, shift: &ModelParts, agents: &BTreeSet<AgentId>) -> ModelParts {
    let mut valuation = act.valuation.clone();
    for (p, set) in &shift.valuation {
        valuation
            .entry(p.clone())
            .or_default()
            .extend(set.iter().cloned());
    }
    ModelParts {
        states: act.states.union(&shift.states).cloned().collect(),
        agents: agents.clone(),
        props: act.props.clone(),
        relations: BTreeMap::new(),
        valuation,
        locals: BTreeMap::new(),
    }
}

fn cross_links<'a>(model: &'a KripkeModel, agent: &AgentId) -> impl Iterator<Item = Edge> + 'a {
    model
        .edges(agent)
        .map(|(s, t)| (s.tagged(Tag::Act), t.tagged(Tag::Shift)))
}

/// `liar` tells everyone except `j` that `j` went offline.
///
/// Informed agents (`liar` and `j`) keep their edges and local states in
/// `act`. The misinformed agents live in `shift`, where `j` has no edges,
/// and reach it from `act` through their original edges re-targeted.
pub fn lie_offline(
    model: &KripkeModel,
    liar: &AgentId,
    j: &AgentId,
) -> Result<UpdateResult, UpdateError> {
    model.require_agent(liar)?;
    model.require_agent(j)?;
    if liar == j {
        return Err(UpdateError::SelfLie(liar.clone()));
    }

    let mut warnings = Vec::new();
    for k in [liar, j] {
        let certain = Formula::CertainAgent(k.clone(), j.clone());
        if !holds_for_agent(model, k, &certain)? {
            warnings.push(format!("C[{k},{j}] does not hold for {k} before the lie"));
        }
    }

    let act = model.replicate_with_lineage(Tag::Act).to_parts();
    let shift = model.replicate_with_lineage(Tag::Shift).to_parts();
    let mut parts = two_regions(&act, &shift, model.agents());

    for k in model.agents() {
        let informed = k == liar || k == j;
        let mut edges = BTreeSet::new();
        if informed {
            edges.extend(act.relations[k].iter().cloned());
        } else {
            edges.extend(cross_links(model, k));
        }
        if k != j {
            edges.extend(shift.relations[k].iter().cloned());
        }
        parts.relations.insert(k.clone(), edges);

        let region = if informed { &act } else { &shift };
        parts.locals.insert(k.clone(), region.locals[k].clone());
    }

    let staged = KripkeModel::from_parts(parts)?;
    finish(model, staged, true, warnings)
}

/// `liar` tells everyone else that a new agent `j` came online with local
/// states `locals`.
///
/// The liar stays in `act` with its own edges. Everyone else moves to
/// `shift`, where `j` is added as by [`update_online`], and reaches it from
/// `act` through their original edges re-targeted.
pub fn lie_online(
    model: &KripkeModel,
    liar: &AgentId,
    j: &AgentId,
    locals: &BTreeSet<StateId>,
) -> Result<UpdateResult, UpdateError> {
    model.require_agent(liar)?;
    if model.has_agent(j) {
        return Err(UpdateError::AgentExists(j.clone()));
    }
    check_new_locals(model, locals)?;

    let act = model.replicate_with_lineage(Tag::Act).to_parts();
    let shifted_locals = locals.iter().map(|s| s.tagged(Tag::Shift)).collect();
    let shift = update_online(
        &model.replicate_with_lineage(Tag::Shift),
        j,
        &shifted_locals,
    )?
    .model
    .to_parts();
    let mut parts = two_regions(&act, &shift, &shift.agents);

    for k in model.agents() {
        let mut edges: BTreeSet<Edge> = shift.relations[k].clone();
        if k == liar {
            edges.extend(act.relations[k].iter().cloned());
            parts.locals.insert(k.clone(), act.locals[k].clone());
        } else {
            edges.extend(cross_links(model, k));
            parts.locals.insert(k.clone(), shift.locals[k].clone());
        }
        parts.relations.insert(k.clone(), edges);
    }
    parts
        .relations
        .insert(j.clone(), shift.relations[j].clone());
    parts.locals.insert(j.clone(), shift.locals[j].clone());

    let staged = KripkeModel::from_parts(parts)?;
    finish(model, staged, true, Vec::new())
}
