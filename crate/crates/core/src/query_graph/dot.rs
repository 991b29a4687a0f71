use std::fmt::Write;

use fixedbitset::FixedBitSet;

use super::QueryGraph;
use crate::snfa::StateLabel;

/// Graphviz rendering of the part of the graph reachable from start, one
/// cluster per input index. Returns `None` if more than `max_vertices` are
/// reachable.
pub fn to_dot(g: &QueryGraph<'_>, max_vertices: usize) -> Option<String> {
    let mut seen = FixedBitSet::with_capacity(g.num_vertices());
    let mut order = vec![g.start()];
    seen.insert(g.id(g.start()));
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        k += 1;
        g.for_each_succ(v, |t| {
            if !seen.put(g.id(t)) {
                order.push(t);
            }
        });
        if order.len() > max_vertices {
            return None;
        }
    }
    order.sort();

    let m = g.snfa();
    let mut out = String::from("digraph query_graph {\n  rankdir=LR;\n  node [shape=box];\n");
    let mut current = 0;
    for &v in &order {
        if v.index != current {
            if current != 0 {
                out.push_str("  }\n");
            }
            current = v.index;
            let _ = writeln!(out, "  subgraph cluster_{current} {{\n    label=\"idx {current}\";");
        }
        let mut text = format!("(s{}, {}, {})", v.state, v.layer, v.index);
        if g.label(v) != StateLabel::Blank {
            let _ = write!(text, "\\n{}", m.describe_label(g.label(v)).replace('"', "\\\""));
        }
        let style = if v == g.start() || v == g.end() {
            ", style=bold"
        } else {
            ""
        };
        let _ = writeln!(out, "    v{} [label=\"{text}\"{style}];", g.id(v));
    }
    if current != 0 {
        out.push_str("  }\n");
    }
    for &v in &order {
        g.for_each_succ(v, |t| {
            let _ = writeln!(out, "  v{} -> v{};", g.id(v), g.id(t));
        });
    }
    out.push_str("}\n");
    Some(out)
}
