//! Reference implementations written straight from the satisfaction
//! clauses and the update constructions, without memoization, adjacency
//! indexes or shared helpers from the library.

use std::collections::BTreeSet;

use epk_core::Formula;

use crate::raw::{Pair, RawModel};

fn has_successor(m: &RawModel, agent: &str, state: &str) -> bool {
    m.edges(agent).any(|(s, _)| s == state)
}

/// Direct recursive satisfaction. Symbols are assumed to be declared.
pub fn eval(m: &RawModel, state: &str, f: &Formula) -> bool {
    match f {
        Formula::Prop(p) => m.val.get(p.as_str()).is_some_and(|set| set.contains(state)),
        Formula::Not(a) => !eval(m, state, a),
        Formula::And(a, b) => eval(m, state, a) && eval(m, state, b),
        Formula::Or(a, b) => eval(m, state, a) || eval(m, state, b),
        Formula::Implies(a, b) => !eval(m, state, a) || eval(m, state, b),
        Formula::Believes(i, a) => m
            .edges(i.as_str())
            .filter(|(s, _)| s == state)
            .all(|(_, t)| eval(m, t, a)),
        Formula::CertainAgent(i, j) => m
            .edges(i.as_str())
            .filter(|(s, _)| s == state)
            .all(|(_, t)| has_successor(m, j.as_str(), t)),
        Formula::PossibleAgent(i, j) => m
            .edges(i.as_str())
            .filter(|(s, _)| s == state)
            .any(|(_, t)| has_successor(m, j.as_str(), t)),
    }
}

pub fn eval_for_agent(m: &RawModel, agent: &str, f: &Formula) -> bool {
    m.locals[agent].iter().all(|s| eval(m, s, f))
}

/// Fixpoint closure of `seeds` under every agent's edges.
pub fn reachable(m: &RawModel, seeds: &BTreeSet<String>) -> BTreeSet<String> {
    let mut keep = seeds.clone();
    loop {
        let mut next = keep.clone();
        for edges in m.rel.values() {
            for (s, t) in edges {
                if keep.contains(s) {
                    next.insert(t.clone());
                }
            }
        }
        if next == keep {
            return keep;
        }
        keep = next;
    }
}

/// Restrict to states reachable from `seeds`; `None` if some agent loses
/// all its local states.
pub fn prune(m: &RawModel, seeds: &BTreeSet<String>) -> Option<RawModel> {
    let keep = reachable(m, seeds);
    let mut out = m.clone();
    out.states = m.states.intersection(&keep).cloned().collect();
    for edges in out.rel.values_mut() {
        edges.retain(|(s, t)| keep.contains(s) && keep.contains(t));
    }
    for set in out.val.values_mut() {
        set.retain(|s| keep.contains(s));
    }
    for set in out.locals.values_mut() {
        set.retain(|s| keep.contains(s));
        if set.is_empty() {
            return None;
        }
    }
    Some(out)
}

fn all_locals(m: &RawModel) -> BTreeSet<String> {
    m.locals.values().flatten().cloned().collect()
}

pub fn offline(m: &RawModel, j: &str) -> Option<RawModel> {
    let mut out = m.clone();
    out.agents.remove(j);
    out.locals.remove(j);
    out.rel.remove(j);
    let seeds = all_locals(&out);
    prune(&out, &seeds)
}

pub fn online(m: &RawModel, j: &str, locals: &BTreeSet<String>) -> RawModel {
    let mut out = m.clone();
    out.agents.insert(j.to_string());
    out.locals.insert(j.to_string(), locals.clone());
    let mut r = BTreeSet::new();
    for s in &m.states {
        for t in &m.states {
            r.insert((s.clone(), t.clone()));
        }
    }
    out.rel.insert(j.to_string(), r);
    out
}

fn tag(s: &str, t: &str) -> String {
    format!("{s}@{t}")
}

fn tag_set(set: &BTreeSet<String>, t: &str) -> BTreeSet<String> {
    set.iter().map(|s| tag(s, t)).collect()
}

fn tag_edges(edges: &BTreeSet<Pair>, a: &str, b: &str) -> BTreeSet<Pair> {
    edges.iter().map(|(s, t)| (tag(s, a), tag(t, b))).collect()
}

/// Both replicas in one model with each region's relations still intact
/// and no local states assigned yet.
fn replicas(m: &RawModel) -> RawModel {
    let mut out = RawModel {
        states: tag_set(&m.states, "act")
            .union(&tag_set(&m.states, "shift"))
            .cloned()
            .collect(),
        agents: m.agents.clone(),
        props: m.props.clone(),
        ..RawModel::default()
    };
    for (p, set) in &m.val {
        let both = tag_set(set, "act")
            .union(&tag_set(set, "shift"))
            .cloned()
            .collect();
        out.val.insert(p.clone(), both);
    }
    for (a, edges) in &m.rel {
        let mut r = tag_edges(edges, "act", "act");
        r.extend(tag_edges(edges, "shift", "shift"));
        out.rel.insert(a.clone(), r);
    }
    out
}

/// Materialize both replicas, delete and add edges, move local states,
/// and only then prune.
pub fn lie_offline_unpruned(m: &RawModel, i: &str, j: &str) -> RawModel {
    let mut out = replicas(m);
    // j's edges vanish from the shifted region.
    let shift_j = tag_edges(&m.rel[j], "shift", "shift");
    out.rel.get_mut(j).unwrap().retain(|e| !shift_j.contains(e));
    let misinformed: Vec<&String> = m.agents.iter().filter(|k| *k != i && *k != j).collect();
    for k in &misinformed {
        let act_k = tag_edges(&m.rel[*k], "act", "act");
        let r = out.rel.get_mut(*k).unwrap();
        r.retain(|e| !act_k.contains(e));
        r.extend(tag_edges(&m.rel[*k], "act", "shift"));
    }
    for k in &m.agents {
        let region = if k == i || k == j { "act" } else { "shift" };
        out.locals.insert(k.clone(), tag_set(&m.locals[k], region));
    }
    out
}

pub fn lie_offline(m: &RawModel, i: &str, j: &str) -> Option<RawModel> {
    let out = lie_offline_unpruned(m, i, j);
    let seeds = all_locals(&out);
    prune(&out, &seeds)
}

pub fn lie_online_unpruned(m: &RawModel, i: &str, j: &str, locals: &BTreeSet<String>) -> RawModel {
    let mut out = replicas(m);
    // j joins the shifted region only, unable to tell its states apart.
    let shift_states = tag_set(&m.states, "shift");
    let mut rj = BTreeSet::new();
    for s in &shift_states {
        for t in &shift_states {
            rj.insert((s.clone(), t.clone()));
        }
    }
    out.agents.insert(j.to_string());
    out.rel.insert(j.to_string(), rj);
    out.locals.insert(j.to_string(), tag_set(locals, "shift"));
    for k in m.agents.iter().filter(|k| *k != i) {
        let act_k = tag_edges(&m.rel[k], "act", "act");
        let r = out.rel.get_mut(k).unwrap();
        r.retain(|e| !act_k.contains(e));
        r.extend(tag_edges(&m.rel[k], "act", "shift"));
    }
    for k in &m.agents {
        let region = if k == i { "act" } else { "shift" };
        out.locals.insert(k.clone(), tag_set(&m.locals[k], region));
    }
    out
}

pub fn lie_online(m: &RawModel, i: &str, j: &str, locals: &BTreeSet<String>) -> Option<RawModel> {
    let out = lie_online_unpruned(m, i, j, locals);
    let seeds = all_locals(&out);
    prune(&out, &seeds)
}
