use std::fmt::Write;

use super::{DiagramStore, Vertex, VertexId};

impl DiagramStore {
    /// Graphviz rendering of the diagram under `root`. Low edges are
    /// dashed, high edges solid.
    pub fn export_dot(&self, root: VertexId) -> String {
        let mut out = String::from("digraph kdag {\n");
        for id in self.reachable(root) {
            let n = id.index();
            match self.vertex(id) {
                Vertex::Leaf(b) => {
                    let label = if b { "⊤" } else { "⊥" };
                    writeln!(out, "  n{n} [label=\"{label}\", shape=square];").unwrap();
                }
                Vertex::Decision { var, lo, hi } => {
                    writeln!(out, "  n{n} [label=\"{var}\", shape=circle];").unwrap();
                    writeln!(out, "  n{n} -> n{} [style=dashed];", lo.index()).unwrap();
                    writeln!(out, "  n{n} -> n{} [style=solid];", hi.index()).unwrap();
                }
                Vertex::Conj(children) => {
                    writeln!(out, "  n{n} [label=\"∧\", shape=box];").unwrap();
                    for c in children.iter() {
                        writeln!(out, "  n{n} -> n{};", c.index()).unwrap();
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
