//! Bottom-up compilation of CNF formulas: every clause becomes a canonical
//! decision chain and the chains are conjoined.

use crate::formula::Cnf;
use crate::store::{Bound, DiagramStore, VertexId};

/// Order in which clause diagrams are conjoined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Left fold over the clause list.
    Sequential,
    /// Pairwise reduction, halving the list each round.
    #[default]
    Balanced,
}

impl DiagramStore {
    /// Canonical diagram of `cnf` at bound `i` under the store order.
    pub fn compile(&mut self, cnf: &Cnf, i: Bound, schedule: Schedule) -> VertexId {
        let mut parts: Vec<VertexId> = Vec::with_capacity(cnf.clauses().len());
        for clause in cnf.clauses() {
            let d = self.clause_diagram(clause, i);
            if d == VertexId::FALSE {
                return VertexId::FALSE;
            }
            parts.push(d);
        }
        match schedule {
            Schedule::Sequential => {
                let mut acc = VertexId::TRUE;
                for p in parts {
                    acc = self.conjoin(acc, p, i);
                    if acc == VertexId::FALSE {
                        break;
                    }
                }
                acc
            }
            Schedule::Balanced => {
                while parts.len() > 1 {
                    let mut next = Vec::with_capacity(parts.len().div_ceil(2));
                    for pair in parts.chunks(2) {
                        let joined = match *pair {
                            [a, b] => self.conjoin(a, b, i),
                            [a] => a,
                            _ => unreachable!(),
                        };
                        if joined == VertexId::FALSE {
                            return VertexId::FALSE;
                        }
                        next.push(joined);
                    }
                    parts = next;
                }
                parts.pop().unwrap_or(VertexId::TRUE)
            }
        }
    }

    /// Compiles at bound 1, decomposes without bound, then lowers to `i`.
    pub fn compile_via(&mut self, cnf: &Cnf, i: Bound) -> VertexId {
        let one = self.compile(cnf, Bound::Finite(1), Schedule::default());
        let full = self.decompose(one, Bound::Infinite).expect("bound-1 output satisfies every larger bound");
        self.convert_down(full, i)
    }
}
