use std::fmt::Write;

use super::context::contexts;
use super::{Snfa, StateLabel, TransitionLabel};
use crate::syntax::{to_pattern, Alphabet, SemRe};

/// Graphviz rendering with each state's label and, when the machine is
/// well-parenthesized, its query context.
pub fn to_dot(m: &Snfa, alphabet: Alphabet) -> String {
    let ctx = contexts(m).ok();
    let mut out = String::from("digraph snfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for s in m.states() {
        let mut lines = vec![format!("s{s}")];
        if m.label(s) != StateLabel::Blank {
            lines.push(m.describe_label(m.label(s)));
        }
        if let Some(Some(c)) = ctx.as_ref().map(|c| &c[s]) {
            if !c.is_empty() {
                lines.push(c.display(m).to_string());
            }
        }
        let label: Vec<String> = lines.iter().map(|l| escape(l)).collect();
        let shape = if s == m.end() { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  s{s} [label=\"{}\"{shape}];", label.join("\\n"));
    }
    let _ = writeln!(out, "  init [shape=point];\n  init -> s{};", m.start());
    for t in m.transitions() {
        let text = match t.label {
            TransitionLabel::Epsilon => "ε".to_string(),
            TransitionLabel::Chars(set) => to_pattern(&SemRe::Lit(set), alphabet),
        };
        let _ = writeln!(out, "  s{} -> s{} [label=\"{}\"];", t.from, t.to, escape(&text));
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
