use std::collections::BTreeMap;
use std::fmt::Write;

use super::Graph;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Vertices and arcs in lexicographic order; colours become part of the
/// vertex label.
pub(super) fn render(g: &Graph) -> String {
    let mut colours: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (c, v) in g.colours() {
        colours.entry(v.as_str()).or_default().push(c.as_str());
    }
    let mut out = String::from("digraph G {\n");
    for v in g.vertices() {
        let label = match colours.get(v.as_str()) {
            Some(cs) => format!("{v} [{}]", cs.join(",")),
            None => v.clone(),
        };
        writeln!(out, "  {} [label={}];", quote(v), quote(&label)).unwrap();
    }
    for a in g.arcs() {
        writeln!(out, "  {} -> {} [label={}];", quote(&a.source), quote(&a.target), quote(&a.label)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabelledArc;

    #[test]
    fn stable_output() {
        let mut g = Graph::from_arcs([LabelledArc::new("b", "x", "a"), LabelledArc::new("a", "y", "b")]);
        g.add_colour("in", "a");
        let dot = g.to_dot();
        assert_eq!(
            dot,
            "digraph G {\n  \"a\" [label=\"a [in]\"];\n  \"b\" [label=\"b\"];\n  \"a\" -> \"b\" [label=\"y\"];\n  \"b\" -> \"a\" [label=\"x\"];\n}\n"
        );
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
