//! Transformations on canonical diagrams. Every result is canonical at
//! the bound passed in, which must be the bound the operands are
//! canonical at.

mod models;
mod query;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::formula::{Assignment, Var};
use crate::store::{Bound, DiagramStore, VarMask, Vertex, VertexId};

pub use models::ModelStream;
pub use query::{ModelCount, ScopeError};

impl DiagramStore {
    /// Canonical `u|x=value` for the variable `x` at `rank`.
    fn restrict(&mut self, u: VertexId, rank: u32, value: bool, i: Bound) -> VertexId {
        if !self.var_set(u).contains(rank as usize) {
            return u;
        }
        if let Vertex::Decision { var, lo, hi } = self.vertex(u) {
            if self.order().rank(var) == rank {
                return if value { hi } else { lo };
            }
        }
        let key = (u, 2 * rank + value as u32, i);
        if let Some(&hit) = self.memo.restrict.get(&key) {
            return hit;
        }
        let result = match self.vertex(u) {
            Vertex::Leaf(_) => u,
            Vertex::Decision { var, lo, hi } => {
                let lo = self.restrict(lo, rank, value, i);
                let hi = self.restrict(hi, rank, value, i);
                self.canonical_decision(var, lo, hi, i)
            }
            Vertex::Conj(children) => {
                let mut parts: SmallVec<[VertexId; 8]> = SmallVec::from_slice(&children);
                let k = parts
                    .iter()
                    .position(|&c| self.var_set(c).contains(rank as usize))
                    .expect("some child mentions the variable");
                parts[k] = self.restrict(parts[k], rank, value, i);
                self.canonical_conj(&parts, i)
            }
        };
        self.memo.restrict.insert(key, result);
        result
    }

    fn top_rank(&self, u: VertexId, v: VertexId) -> u32 {
        self.least_rank(u).min(self.least_rank(v))
    }

    /// Canonical `u ∧ v`.
    pub fn conjoin(&mut self, u: VertexId, v: VertexId, i: Bound) -> VertexId {
        if u == VertexId::FALSE || v == VertexId::FALSE {
            return VertexId::FALSE;
        }
        if u == VertexId::TRUE || u == v {
            return v;
        }
        if v == VertexId::TRUE {
            return u;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let key = (a, b, i);
        if let Some(&hit) = self.memo.and.get(&key) {
            return hit;
        }
        let result = if self.disjoint(a, b) {
            self.canonical_conj(&[a, b], i)
        } else if let Some(r) = self.conjoin_units(a, b, i) {
            r
        } else {
            self.conjoin_components(a, b, i)
        };
        self.memo.and.insert(key, result);
        result
    }

    // A literal component of one operand fixes its variable in the other:
    // u ∧ (ℓ ∧ w) = u|ℓ ∧ (ℓ ∧ w).
    fn conjoin_units(&mut self, u: VertexId, v: VertexId, i: Bound) -> Option<VertexId> {
        let (mut target, other, units) = match self.unit_literals(v, u) {
            units if !units.is_empty() => (u, v, units),
            _ => (v, u, self.unit_literals(u, v)),
        };
        if units.is_empty() {
            return None;
        }
        for (rank, value) in units {
            target = self.restrict(target, rank, value, i);
        }
        Some(self.conjoin(target, other, i))
    }

    fn unit_literals(&self, u: VertexId, other: VertexId) -> SmallVec<[(u32, bool); 4]> {
        let mut out = SmallVec::new();
        if matches!(self.vertex(u), Vertex::Decision { .. }) && self.var_count(u) > 1 {
            return out;
        }
        for &c in self.components(u) {
            if self.var_count(c) != 1 {
                continue;
            }
            if let Vertex::Decision { var, hi, .. } = self.vertex(c) {
                let rank = self.order().rank(var);
                if self.var_set(other).contains(rank as usize) {
                    out.push((rank, hi == VertexId::TRUE));
                }
            }
        }
        out
    }

    // Components of the operands are grouped by shared variables; only
    // groups holding components of both operands need real work.
    fn conjoin_components(&mut self, u: VertexId, v: VertexId, i: Bound) -> VertexId {
        if self.components(u).len() == 1 && self.components(v).len() == 1 {
            return self.conjoin_shannon(u, v, i);
        }
        let all: SmallVec<[VertexId; 16]> = self.components(u).iter().chain(self.components(v)).copied().collect();
        let split = self.components(u).len();
        let mut group: SmallVec<[usize; 16]> = (0..all.len()).collect();
        for a in 0..split {
            for b in split..all.len() {
                if group[a] != group[b] && !self.disjoint(all[a], all[b]) {
                    let (from, to) = (group[b], group[a]);
                    for g in group.iter_mut() {
                        if *g == from {
                            *g = to;
                        }
                    }
                }
            }
        }
        if group.iter().all(|&g| g == group[0]) {
            return self.conjoin_shannon(u, v, i);
        }
        let mut parts: SmallVec<[VertexId; 16]> = SmallVec::new();
        for k in 0..all.len() {
            let g = group[k];
            if group[..k].contains(&g) {
                continue;
            }
            let mut left: SmallVec<[VertexId; 8]> = SmallVec::new();
            let mut right: SmallVec<[VertexId; 8]> = SmallVec::new();
            for m in k..all.len() {
                if group[m] == g {
                    if m < split {
                        left.push(all[m]);
                    } else {
                        right.push(all[m]);
                    }
                }
            }
            if left.is_empty() || right.is_empty() {
                parts.extend(left);
                parts.extend(right);
                continue;
            }
            let l = self.canonical_conj(&left, i);
            let r = self.canonical_conj(&right, i);
            let joined = self.conjoin(l, r, i);
            if joined == VertexId::FALSE {
                return VertexId::FALSE;
            }
            parts.push(joined);
        }
        self.canonical_conj(&parts, i)
    }

    fn conjoin_shannon(&mut self, u: VertexId, v: VertexId, i: Bound) -> VertexId {
        let rank = self.top_rank(u, v);
        let (u0, u1) = (self.restrict(u, rank, false, i), self.restrict(u, rank, true, i));
        let (v0, v1) = (self.restrict(v, rank, false, i), self.restrict(v, rank, true, i));
        let lo = self.conjoin(u0, v0, i);
        let hi = self.conjoin(u1, v1, i);
        let x = self.order().var_at(rank);
        self.canonical_decision(x, lo, hi, i)
    }

    /// Canonical `u ∨ v`.
    pub fn disjoin(&mut self, u: VertexId, v: VertexId, i: Bound) -> VertexId {
        if u == VertexId::TRUE || v == VertexId::TRUE {
            return VertexId::TRUE;
        }
        if u == VertexId::FALSE || u == v {
            return v;
        }
        if v == VertexId::FALSE {
            return u;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let key = (a, b, i);
        if let Some(&hit) = self.memo.or.get(&key) {
            return hit;
        }
        let cb = self.components(b).to_vec();
        let (shared, rest_a): (Vec<VertexId>, Vec<VertexId>) =
            self.components(a).iter().partition(|c| cb.contains(c));
        let result = if shared.is_empty() {
            let rank = self.top_rank(a, b);
            let (a0, a1) = (self.restrict(a, rank, false, i), self.restrict(a, rank, true, i));
            let (b0, b1) = (self.restrict(b, rank, false, i), self.restrict(b, rank, true, i));
            let lo = self.disjoin(a0, b0, i);
            let hi = self.disjoin(a1, b1, i);
            let x = self.order().var_at(rank);
            self.canonical_decision(x, lo, hi, i)
        } else {
            // (S ∧ A) ∨ (S ∧ B) = S ∧ (A ∨ B)
            let rest_b: Vec<VertexId> = cb.into_iter().filter(|c| !shared.contains(c)).collect();
            let ra = self.canonical_conj(&rest_a, i);
            let rb = self.canonical_conj(&rest_b, i);
            let joined = self.disjoin(ra, rb, i);
            let mut parts = shared;
            parts.push(joined);
            self.canonical_conj(&parts, i)
        };
        self.memo.or.insert(key, result);
        result
    }

    /// Canonical `¬u`.
    pub fn negate(&mut self, u: VertexId, i: Bound) -> VertexId {
        if u.is_leaf() {
            return if u == VertexId::TRUE { VertexId::FALSE } else { VertexId::TRUE };
        }
        let key = (u, i);
        if let Some(&hit) = self.memo.not.get(&key) {
            return hit;
        }
        let rank = self.least_rank(u);
        let u0 = self.restrict(u, rank, false, i);
        let u1 = self.restrict(u, rank, true, i);
        let lo = self.negate(u0, i);
        let hi = self.negate(u1, i);
        let x = self.order().var_at(rank);
        let result = self.canonical_decision(x, lo, hi, i);
        self.memo.not.insert(key, result);
        result
    }

    /// Canonical `u|ω`. Variables of `ω` outside `u` are ignored.
    pub fn condition(&mut self, u: VertexId, omega: &Assignment, i: Bound) -> VertexId {
        let mut acc = u;
        for (var, value) in omega.iter() {
            if acc.is_leaf() {
                break;
            }
            if self.mentions(acc, var) {
                let rank = self.order().rank(var);
                acc = self.restrict(acc, rank, value, i);
            }
        }
        acc
    }

    /// Canonical `∃vars. u`.
    pub fn forget(&mut self, u: VertexId, vars: &[Var], i: Bound) -> VertexId {
        let mut mask = VarMask::with_width(self.order().len());
        for &v in vars {
            if self.order().contains(v) {
                mask.put(self.order().rank(v) as usize);
            }
        }
        let mut local = FxHashMap::default();
        self.forget_rec(u, &mask, i, &mut local)
    }

    fn forget_rec(
        &mut self,
        u: VertexId,
        mask: &VarMask,
        i: Bound,
        local: &mut FxHashMap<VertexId, VertexId>,
    ) -> VertexId {
        if u.is_leaf() || self.var_set(u).is_disjoint(mask.as_set()) {
            return u;
        }
        if let Some(&hit) = local.get(&u) {
            return hit;
        }
        let result = match self.vertex(u) {
            Vertex::Leaf(_) => u,
            Vertex::Decision { var, lo, hi } => {
                let lo = self.forget_rec(lo, mask, i, local);
                let hi = self.forget_rec(hi, mask, i, local);
                if mask.as_set().contains(self.order().rank(var) as usize) {
                    self.disjoin(lo, hi, i)
                } else {
                    self.canonical_decision(var, lo, hi, i)
                }
            }
            Vertex::Conj(children) => {
                // components are variable-disjoint, so ∃ distributes
                let children: SmallVec<[VertexId; 8]> = SmallVec::from_slice(children);
                let parts: SmallVec<[VertexId; 8]> =
                    children.iter().map(|&c| self.forget_rec(c, mask, i, local)).collect();
                self.canonical_conj(&parts, i)
            }
        };
        local.insert(u, result);
        result
    }

    /// Canonical `u` for a single clause: a decision chain in variable order.
    pub fn clause_diagram(&mut self, clause: &crate::formula::Clause, i: Bound) -> VertexId {
        let mut lits = clause.literals().to_vec();
        lits.sort_by_key(|l| std::cmp::Reverse(self.order().rank(l.var)));
        let mut acc = VertexId::FALSE;
        for lit in lits {
            let (lo, hi) = if lit.positive { (acc, VertexId::TRUE) } else { (VertexId::TRUE, acc) };
            acc = self.canonical_decision(lit.var, lo, hi, i);
        }
        acc
    }
}
