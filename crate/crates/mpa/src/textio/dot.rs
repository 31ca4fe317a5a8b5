//! GraphViz DOT export.

use std::fmt::Write as _;

use crate::automaton::Automaton;
use crate::stream::Stream;

fn quoted(text: &str) -> String {
    let mut q = String::with_capacity(text.len() + 2);
    q.push('"');
    for c in text.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}

fn output_label(output: &Stream) -> String {
    // an empty output stream is simply omitted from the label
    output.to_string()
}

/// Renders the automaton as a DOT digraph: one node per state, one edge per
/// transition labeled `input/output`, and one arrow from an invisible node
/// per initial element labeled `/output`. Output follows canonical order,
/// so it is byte-stable for equal automata.
pub fn export_dot(automaton: &Automaton) -> String {
    let mut dot = String::new();
    let _ = writeln!(dot, "digraph {} {{", quoted(automaton.name()));
    dot.push_str("  rankdir=LR;\n");
    dot.push_str("  node [shape=circle];\n");
    for state in automaton.states() {
        let _ = writeln!(dot, "  {};", quoted(state.token()));
    }
    for (index, initial) in automaton.initials().iter().enumerate() {
        let anchor = format!("__init{index}");
        let _ = writeln!(dot, "  {} [shape=none, label=\"\"];", quoted(&anchor));
        let _ = writeln!(
            dot,
            "  {} -> {} [label={}];",
            quoted(&anchor),
            quoted(initial.start.token()),
            quoted(&format!("/{}", output_label(&initial.output))),
        );
    }
    for t in automaton.transitions() {
        let _ = writeln!(
            dot,
            "  {} -> {} [label={}];",
            quoted(t.source.token()),
            quoted(t.target.token()),
            quoted(&format!("{}/{}", t.input, output_label(&t.output))),
        );
    }
    dot.push('}');
    dot.push('\n');
    dot
}
