use std::collections::BTreeSet;
use std::fmt::Write;

use super::{format_symbol, TimedAutomaton};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Graphviz rendering with sorted nodes and edges; finals are double circles.
pub fn to_dot(t: &TimedAutomaton, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  __start [shape=point];").unwrap();
    let nodes: BTreeSet<&String> = t.locations.iter().collect();
    for n in nodes {
        let shape = if t.finals.contains(n) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  {} [shape={shape}];", quote(n)).unwrap();
    }
    writeln!(out, "  __start -> {};", quote(&t.initial)).unwrap();
    let mut edges = BTreeSet::new();
    for tr in &t.transitions {
        let mut label = format_symbol(&tr.symbol);
        if !tr.guard.is_true() {
            label.push_str(&format!("\\n{}", tr.guard));
        }
        if !tr.resets.is_empty() {
            let resets: Vec<String> = tr.resets.iter().map(|c| format!("{c} := 0")).collect();
            label.push_str(&format!("\\n{}", resets.join(", ")));
        }
        edges.insert(format!(
            "  {} -> {} [label={}];",
            quote(&tr.from),
            quote(&tr.to),
            quote(&label)
        ));
    }
    for e in edges {
        writeln!(out, "{e}").unwrap();
    }
    out.push_str("}\n");
    out
}
