//! Graphviz rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use epk_core::{KripkeModel, StateId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn node_line(model: &KripkeModel, state: &StateId, indent: &str) -> String {
    let props: Vec<String> = model.props_at(state).map(ToString::to_string).collect();
    let mut label = state.to_string();
    if !props.is_empty() {
        label.push_str("\\n");
        label.push_str(&props.join(","));
    }
    let owners: Vec<String> = model
        .agents()
        .iter()
        .filter(|a| model.locals(a).is_some_and(|l| l.contains(state)))
        .map(ToString::to_string)
        .collect();
    let mut attrs = vec![format!("label={}", quote(&label))];
    if !owners.is_empty() {
        attrs.push("shape=box".into());
        attrs.push("style=filled".into());
        attrs.push("fillcolor=lightgrey".into());
        attrs.push(format!(
            "xlabel={}",
            quote(&format!("I: {}", owners.join(",")))
        ));
    }
    format!(
        "{indent}{} [{}];",
        quote(&state.to_string()),
        attrs.join(", ")
    )
}

/// One directed graph: a node per state (local states boxed and shaded,
/// labelled with their owners), one edge per agent and pair. Replica
/// states are grouped into a cluster per lineage.
pub fn render_dot(model: &KripkeModel, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    out.push_str("  node [shape=circle];\n");

    let mut groups: BTreeMap<String, Vec<&StateId>> = BTreeMap::new();
    for s in model.states() {
        let lineage: Vec<&str> = s.lineage().iter().map(|t| t.as_str()).collect();
        groups.entry(lineage.join("_")).or_default().push(s);
    }
    for (lineage, states) in &groups {
        if lineage.is_empty() {
            for s in states {
                let _ = writeln!(out, "{}", node_line(model, s, "  "));
            }
        } else {
            let _ = writeln!(
                out,
                "  subgraph {} {{",
                quote(&format!("cluster_{lineage}"))
            );
            let _ = writeln!(out, "    label={};", quote(lineage));
            for s in states {
                let _ = writeln!(out, "{}", node_line(model, s, "    "));
            }
            out.push_str("  }\n");
        }
    }
    for agent in model.agents() {
        for (s, t) in model.edges(agent) {
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                quote(&s.to_string()),
                quote(&t.to_string()),
                quote(agent.as_str())
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_states_without_props() {
        let m = KripkeModel::builder()
            .states(["s", "t"])
            .agent("i", [("s", "t")], ["s"])
            .build()
            .unwrap();
        let dot = render_dot(&m, "plain");
        assert!(dot.starts_with("digraph \"plain\" {"));
        assert!(dot.contains("\"t\" [label=\"t\"];"));
        assert!(dot.contains("xlabel=\"I: i\""));
        assert!(dot.contains("\"s\" -> \"t\" [label=\"i\"];"));
        assert!(!dot.contains("subgraph"));
    }
}
