//! proptest strategies for models and formulas.

use std::collections::{BTreeMap, BTreeSet};

use epk_core::{AgentId, Formula, KripkeModel, ModelParts, PropId, StateId};
use proptest::prelude::*;
use proptest::sample::{select, Index};
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const AGENTS: [&str; 3] = ["a", "b", "c"];
pub const PROPS: [&str; 3] = ["p", "q", "r"];

pub fn state(i: usize) -> StateId {
    StateId::new(format!("s{i}")).unwrap()
}

fn agent(i: usize) -> AgentId {
    AgentId::new(AGENTS[i]).unwrap()
}

fn prop(i: usize) -> PropId {
    PropId::new(PROPS[i]).unwrap()
}

fn bits_to_set(bits: &[bool]) -> BTreeSet<StateId> {
    bits.iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(i, _)| state(i))
        .collect()
}

fn pick_locals(mask: &[bool], candidates: &[usize], fallback: &Index) -> BTreeSet<StateId> {
    let chosen: BTreeSet<StateId> = candidates
        .iter()
        .filter(|&&i| mask[i])
        .map(|&i| state(i))
        .collect();
    if chosen.is_empty() {
        [state(candidates[fallback.index(candidates.len())])]
            .into_iter()
            .collect()
    } else {
        chosen
    }
}

type AgentRelation = (BTreeSet<(StateId, StateId)>, BTreeSet<StateId>);

fn assemble(n: usize, relations: Vec<AgentRelation>, valuation: Vec<Vec<bool>>) -> KripkeModel {
    let mut parts = ModelParts {
        states: (0..n).map(state).collect(),
        ..ModelParts::default()
    };
    for (i, (rel, locals)) in relations.into_iter().enumerate() {
        parts.agents.insert(agent(i));
        parts.relations.insert(agent(i), rel);
        parts.locals.insert(agent(i), locals);
    }
    for (i, bits) in valuation.iter().enumerate() {
        parts.props.insert(prop(i));
        parts.valuation.insert(prop(i), bits_to_set(bits));
    }
    KripkeModel::from_parts(parts).expect("generated model is well formed")
}

/// Arbitrary relations and local states.
pub fn arb_model(
    max_states: usize,
    max_agents: usize,
    max_props: usize,
) -> impl Strategy<Value = KripkeModel> {
    (1..=max_states, 1..=max_agents, 0..=max_props)
        .prop_flat_map(|(n, agents, props)| {
            let per_agent = (
                prop::collection::vec(any::<bool>(), n * n),
                prop::collection::vec(any::<bool>(), n),
                any::<Index>(),
            );
            (
                Just(n),
                prop::collection::vec(per_agent, agents),
                prop::collection::vec(prop::collection::vec(any::<bool>(), n), props),
            )
        })
        .prop_map(|(n, agents, valuation)| {
            let all: Vec<usize> = (0..n).collect();
            let relations = agents
                .into_iter()
                .map(|(edges, mask, fallback)| {
                    let rel = edges
                        .iter()
                        .enumerate()
                        .filter(|(_, b)| **b)
                        .map(|(k, _)| (state(k / n), state(k % n)))
                        .collect();
                    (rel, pick_locals(&mask, &all, &fallback))
                })
                .collect();
            assemble(n, relations, valuation)
        })
}

/// Models whose relations are KD45 on everything an agent can reach from
/// its own local states.
///
/// Each agent's relation is built from disjoint clusters: members of a
/// cluster see exactly that cluster, other states see one cluster or
/// nothing. Local states are drawn from states with outgoing edges.
pub fn arb_local_kd45_model(
    max_states: usize,
    max_agents: usize,
    max_props: usize,
) -> impl Strategy<Value = KripkeModel> {
    (1..=max_states, 1..=max_agents, 0..=max_props)
        .prop_flat_map(|(n, agents, props)| {
            let per_agent = (
                prop::collection::vec(proptest::option::of(0..n), n),
                prop::collection::vec(proptest::option::of(any::<Index>()), n),
                prop::collection::vec(any::<bool>(), n),
                any::<Index>(),
            );
            (
                Just(n),
                prop::collection::vec(per_agent, agents),
                prop::collection::vec(prop::collection::vec(any::<bool>(), n), props),
            )
        })
        .prop_map(|(n, agents, valuation)| {
            let relations = agents
                .into_iter()
                .map(|(mut member, pointer, mask, fallback)| {
                    if member.iter().all(Option::is_none) {
                        member[0] = Some(0);
                    }
                    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                    for (s, m) in member.iter().enumerate() {
                        if let Some(k) = m {
                            clusters.entry(*k).or_default().push(s);
                        }
                    }
                    let clusters: Vec<Vec<usize>> = clusters.into_values().collect();
                    let mut rel = BTreeSet::new();
                    let mut with_edges = Vec::new();
                    for s in 0..n {
                        let target = match (member[s], &pointer[s]) {
                            (Some(_), _) => clusters.iter().find(|c| c.contains(&s)),
                            (None, Some(idx)) => Some(&clusters[idx.index(clusters.len())]),
                            (None, None) => None,
                        };
                        if let Some(cluster) = target {
                            with_edges.push(s);
                            rel.extend(cluster.iter().map(|&t| (state(s), state(t))));
                        }
                    }
                    (rel, pick_locals(&mask, &with_edges, &fallback))
                })
                .collect();
            assemble(n, relations, valuation)
        })
}

/// Formulas of depth at most `depth`. `B`/`C`/`P` take their left index
/// from `agents` and the right index of `C`/`P` from `others`.
pub fn arb_formula(
    agents: Vec<AgentId>,
    others: Vec<AgentId>,
    props: Vec<PropId>,
    depth: u32,
) -> BoxedStrategy<Formula> {
    let modal = (
        select(agents.clone()),
        select(others.clone()),
        any::<bool>(),
    )
        .prop_map(|(i, j, certain)| {
            if certain {
                Formula::CertainAgent(i, j)
            } else {
                Formula::PossibleAgent(i, j)
            }
        });
    let leaf = if props.is_empty() {
        modal.boxed()
    } else {
        prop_oneof![select(props.clone()).prop_map(Formula::Prop), modal].boxed()
    };
    if depth == 0 {
        return leaf;
    }
    let sub = arb_formula(agents.clone(), others, props, depth - 1);
    prop_oneof![
        2 => leaf,
        1 => sub.clone().prop_map(Formula::not),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Formula::and(a, b)),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Formula::or(a, b)),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
        1 => (select(agents), sub).prop_map(|(i, a)| Formula::believes(i, a)),
    ]
    .boxed()
}

/// Formulas over every symbol of `model`, with `extra` agents allowed as
/// the right index of `C`/`P`.
pub fn arb_formula_for(
    model: &KripkeModel,
    extra: &[AgentId],
    depth: u32,
) -> BoxedStrategy<Formula> {
    let agents: Vec<AgentId> = model.agents().iter().cloned().collect();
    let mut others = agents.clone();
    others.extend(extra.iter().cloned());
    arb_formula(
        agents,
        others,
        model.props().iter().cloned().collect(),
        depth,
    )
}

/// Syntax trees over awkward names (including bare `B`, `C` and `P`) for
/// parser tests.
pub fn arb_syntax_tree(depth: u32) -> BoxedStrategy<Formula> {
    let names = ["p", "q_1", "B", "C", "P", "_x", "Bb", "v9"];
    let agents: Vec<AgentId> = names.iter().map(|n| AgentId::new(*n).unwrap()).collect();
    let props: Vec<PropId> = names.iter().map(|n| PropId::new(*n).unwrap()).collect();
    arb_formula(agents.clone(), agents, props, depth)
}

/// A runner with a fixed seed, for drawing samples outside `proptest!`.
pub fn seeded_runner(seed: u8) -> TestRunner {
    let seed = [seed; 32];
    TestRunner::new_with_rng(
        Config::default(),
        TestRng::from_seed(RngAlgorithm::ChaCha, &seed),
    )
}

pub fn draw<S: Strategy>(strategy: &S, runner: &mut TestRunner) -> S::Value {
    strategy
        .new_tree(runner)
        .expect("strategy produced a value")
        .current()
}
