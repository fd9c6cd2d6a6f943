//! Graphviz output. Attacks are solid edges, supports dashed; the target is
//! filled green and top red.

use std::fmt::Write as _;

use crate::framework::{ArgId, ContextualGraph, EdgeKind, Labelling, RelationMatrix};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// `label` is already escaped.
fn node_line(out: &mut String, id: ArgId, label: &str, extra: &str) {
    let style = match id {
        ArgId::TARGET => ", style=filled, fillcolor=palegreen",
        ArgId::TOP => ", style=filled, fillcolor=lightcoral",
        _ => "",
    };
    let _ = writeln!(out, "  n{} [label=\"{label}\"{style}{extra}];", id.0);
}

fn edge_line(out: &mut String, from: ArgId, to: ArgId, kind: EdgeKind) {
    let style = match kind {
        EdgeKind::Attack => "",
        EdgeKind::Support => " [style=dashed]",
    };
    let _ = writeln!(out, "  n{} -> n{}{style};", from.0, to.0);
}

/// The universal graph: the target and every argument with an edge.
pub fn matrix_to_dot(matrix: &RelationMatrix) -> String {
    let universe = matrix.universe();
    let mut out = String::from("digraph universal {\n  rankdir=BT;\n  node [shape=box];\n");
    let mut nodes = matrix.involved();
    if !nodes.contains(&ArgId::TARGET) {
        nodes.insert(0, ArgId::TARGET);
    }
    for id in nodes {
        node_line(&mut out, id, &escape(&universe.name(id)), "");
    }
    for e in matrix.edges() {
        edge_line(&mut out, e.from, e.to, e.kind);
    }
    out.push_str("}\n");
    out
}

/// A contextual graph: the target and every present argument with an
/// edge. With a labelling, accepted arguments get a bold border and every
/// node shows its label.
pub fn contextual_to_dot(graph: &ContextualGraph, labelling: Option<&Labelling>) -> String {
    let mut out = String::from("digraph contextual {\n  rankdir=BT;\n  node [shape=box];\n");
    let mut touched = vec![false; graph.len()];
    for &(a, b) in graph.attacks().iter().chain(graph.supports()) {
        touched[a.0] = true;
        touched[b.0] = true;
    }
    touched[ArgId::TARGET.0] = true;
    for id in (0..graph.len()).map(ArgId).filter(|&i| touched[i.0]) {
        match labelling {
            Some(l) => {
                let name = format!("{}\\n{}", escape(graph.name(id)), l.label(id));
                let bold = if l.is_accepted(id) { ", penwidth=2" } else { "" };
                node_line(&mut out, id, &name, bold);
            }
            None => node_line(&mut out, id, &escape(graph.name(id)), ""),
        }
    }
    for &(a, b) in graph.attacks() {
        edge_line(&mut out, a, b, EdgeKind::Attack);
    }
    for &(a, b) in graph.supports() {
        edge_line(&mut out, a, b, EdgeKind::Support);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::grounded;

    #[test]
    fn target_only() {
        let g = ContextualGraph::framework(&["t", "top", "a"], &[], &[]);
        let dot = contextual_to_dot(&g, None);
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(dot.contains("fillcolor=palegreen"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn one_support_one_dashed_edge() {
        let g = ContextualGraph::framework(&["t", "top", "a", "b"], &[(1, 0), (2, 1)], &[(3, 2)]);
        let dot = contextual_to_dot(&g, None);
        assert_eq!(dot.matches("style=dashed").count(), 1);
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("fillcolor=lightcoral"));
    }

    #[test]
    fn names_are_escaped_and_labels_shown() {
        let g = ContextualGraph::framework(&["say \"hi\"", "top"], &[(1, 0)], &[]);
        let l = grounded(&g).unwrap();
        let dot = contextual_to_dot(&g, Some(&l));
        assert!(dot.contains(r#"[label="say \"hi\"\nOUT""#), "{dot}");
        assert!(dot.contains("penwidth=2"));
    }
}
