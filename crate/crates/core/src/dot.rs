//! Graphviz rendering of weighted diagrams.

use std::fmt::Write;

use crate::diagram::{Step, Vertex, WeightedDiagram};
use crate::document::format_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DotStyle {
    /// Rows H, G, M with inclusion and projection edges.
    Graph,
    /// One row; an Up step is one edge, a Down step two.
    Diagram,
}

fn label(v: &Vertex) -> String {
    format!(
        "k={} g={} h={} {} w={}",
        v.index,
        v.g.dim(),
        v.h.dim(),
        v.class.label(),
        format_rational(&v.weight)
    )
}

pub fn render_dot(d: &WeightedDiagram, style: DotStyle) -> String {
    let mut s = String::from("digraph diagram {\n  rankdir=LR;\n  node [shape=box];\n");
    match style {
        DotStyle::Diagram => {
            for v in &d.vertices {
                writeln!(s, "  v{} [label=\"{}\"];", v.index, label(v)).unwrap();
            }
            for (k, step) in d.steps.iter().enumerate() {
                let n = if *step == Step::Up { 1 } else { 2 };
                for _ in 0..n {
                    writeln!(s, "  v{} -> v{};", k, k + 1).unwrap();
                }
            }
        }
        DotStyle::Graph => {
            for (row, prefix) in [("H", "h"), ("G", "g"), ("M", "m")] {
                writeln!(s, "  subgraph row_{row} {{\n    rank=same;").unwrap();
                for v in &d.vertices {
                    let dim = match prefix {
                        "h" => v.h.dim(),
                        "g" => v.g.dim(),
                        _ => v.reduced_dim(),
                    };
                    writeln!(s, "    {prefix}{} [label=\"{row}{} dim={} ({})\"];", v.index, v.index, dim, label(v)).unwrap();
                }
                s.push_str("  }\n");
            }
            for v in &d.vertices {
                writeln!(s, "  h{0} -> g{0} [label=\"incl\"];", v.index).unwrap();
                writeln!(s, "  g{0} -> m{0} [label=\"proj\"];", v.index).unwrap();
            }
            for (k, step) in d.steps.iter().enumerate() {
                writeln!(s, "  g{} -> g{} [label=\"incl\"];", k, k + 1).unwrap();
                match step {
                    Step::Up => writeln!(s, "  h{} -> h{} [label=\"incl\"];", k, k + 1).unwrap(),
                    Step::Down => {
                        writeln!(s, "  h{} -> h{} [label=\"incl\"];", k + 1, k).unwrap();
                        writeln!(s, "  m{} -> m{} [label=\"mw\"];", k + 1, k).unwrap();
                    }
                }
            }
        }
    }
    s.push_str("}\n");
    s
}
