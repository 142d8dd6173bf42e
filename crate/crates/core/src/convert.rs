//! Lowering a canonical diagram to a smaller conjunction bound.

use crate::store::{Bound, DiagramStore, Vertex, VertexId};

impl DiagramStore {
    /// Converts `u`, canonical at some bound `j >= i`, into the canonical
    /// vertex at bound `i`.
    ///
    /// Conjunctions with two or more children over `i` variables have
    /// those children merged into one decision vertex on their least
    /// variable; everything else is rebuilt from converted children.
    pub fn convert_down(&mut self, u: VertexId, i: Bound) -> VertexId {
        if u.is_leaf() {
            return u;
        }
        if let Some(&hit) = self.memo.convert.get(&(u, i)) {
            return hit;
        }
        let result = match self.vertex(u) {
            Vertex::Leaf(_) => u,
            Vertex::Decision { var, lo, hi } => {
                let lo = self.convert_down(lo, i);
                let hi = self.convert_down(hi, i);
                self.decision_unchecked(var, lo, hi)
            }
            Vertex::Conj(children) => {
                let (large, small): (Vec<VertexId>, Vec<VertexId>) =
                    children.iter().partition(|&&c| i.exceeded_by(self.var_count(c)));
                let mut parts = small;
                if large.len() <= 1 {
                    // small children are canonical at every bound covering
                    // their variables; only the large one needs work
                    for c in large {
                        parts.push(self.convert_down(c, i));
                    }
                } else {
                    let merged = self.conj_unchecked(&large);
                    let x = self.least_var(merged).expect("conjunction mentions variables");
                    let rank = self.order().rank(x);
                    let lo = self.cofactor_flat(merged, rank, false);
                    let hi = self.cofactor_flat(merged, rank, true);
                    let split = self.decision_unchecked(x, lo, hi);
                    parts.push(self.convert_down(split, i));
                }
                self.canonical_conj(&parts, i)
            }
        };
        self.memo.convert.insert((u, i), result);
        result
    }

    // Cofactor of a conjunction of canonical components on its least
    // variable, flattened but not re-bounded: the result is canonical at
    // whatever bound the input was.
    fn cofactor_flat(&mut self, u: VertexId, rank: u32, value: bool) -> VertexId {
        let children: Vec<VertexId> = self.components(u).to_vec();
        let mut parts = Vec::with_capacity(children.len() + 2);
        for c in children {
            if self.least_rank(c) != rank {
                parts.push(c);
                continue;
            }
            let Vertex::Decision { lo, hi, .. } = self.vertex(c) else {
                unreachable!("conjunction children are decision vertices")
            };
            let branch = if value { hi } else { lo };
            if branch == VertexId::FALSE {
                return VertexId::FALSE;
            }
            parts.extend_from_slice(self.components(branch));
        }
        self.conj_unchecked(&parts)
    }
}
