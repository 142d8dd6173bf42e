use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use crate::formula::{Assignment, Clause, Var};
use crate::store::{Bound, DiagramStore, Vertex, VertexId};

/// Number of models of a diagram over some scope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelCount(BigUint);

impl ModelCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl From<BigUint> for ModelCount {
    fn from(n: BigUint) -> Self {
        ModelCount(n)
    }
}

impl PartialEq<u64> for ModelCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl PartialEq<BigUint> for ModelCount {
    fn eq(&self, other: &BigUint) -> bool {
        &self.0 == other
    }
}

impl fmt::Display for ModelCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("variable {0} occurs in the diagram but not in the scope")]
pub struct ScopeError(pub Var);

impl DiagramStore {
    pub fn is_consistent(&self, u: VertexId) -> bool {
        u != VertexId::FALSE
    }

    pub fn is_valid(&self, u: VertexId) -> bool {
        u == VertexId::TRUE
    }

    /// Equivalence of two diagrams canonical at the same bound.
    pub fn equivalent(&self, u: VertexId, v: VertexId) -> bool {
        u == v
    }

    /// Whether `u ⊨ v`. May be expensive for bounds above zero.
    pub fn entails(&mut self, u: VertexId, v: VertexId, i: Bound) -> bool {
        if u == VertexId::FALSE || v == VertexId::TRUE || u == v {
            return true;
        }
        let nv = self.negate(v, i);
        self.conjoin(u, nv, i) == VertexId::FALSE
    }

    /// Whether `u ⊨ c`: no model of `u` falsifies every literal of `c`.
    pub fn entails_clause(&self, u: VertexId, clause: &Clause) -> bool {
        let omega = clause.falsifying_assignment();
        !self.satisfiable_under(u, &omega, &mut FxHashMap::default())
    }

    /// Whether the term `t` entails `u`.
    pub fn implied_by_term(&self, u: VertexId, term: &Assignment) -> bool {
        let mut local = FxHashMap::default();
        self.valid_under(u, term, &mut local)
    }

    fn satisfiable_under(&self, u: VertexId, omega: &Assignment, local: &mut FxHashMap<VertexId, bool>) -> bool {
        if u.is_leaf() {
            return u == VertexId::TRUE;
        }
        if let Some(&hit) = local.get(&u) {
            return hit;
        }
        let result = match self.vertex(u) {
            Vertex::Leaf(b) => b,
            Vertex::Decision { var, lo, hi } => match omega.get(var) {
                Some(true) => self.satisfiable_under(hi, omega, local),
                Some(false) => self.satisfiable_under(lo, omega, local),
                None => self.satisfiable_under(lo, omega, local) || self.satisfiable_under(hi, omega, local),
            },
            Vertex::Conj(children) => children.iter().all(|&c| self.satisfiable_under(c, omega, local)),
        };
        local.insert(u, result);
        result
    }

    // Dual of `satisfiable_under`: every extension of ω satisfies u. Sound
    // because decision vertices are deterministic and conjunctions are
    // decomposable.
    fn valid_under(&self, u: VertexId, omega: &Assignment, local: &mut FxHashMap<VertexId, bool>) -> bool {
        if u.is_leaf() {
            return u == VertexId::TRUE;
        }
        if let Some(&hit) = local.get(&u) {
            return hit;
        }
        let result = match self.vertex(u) {
            Vertex::Leaf(b) => b,
            Vertex::Decision { var, lo, hi } => match omega.get(var) {
                Some(true) => self.valid_under(hi, omega, local),
                Some(false) => self.valid_under(lo, omega, local),
                None => self.valid_under(lo, omega, local) && self.valid_under(hi, omega, local),
            },
            Vertex::Conj(children) => children.iter().all(|&c| self.valid_under(c, omega, local)),
        };
        local.insert(u, result);
        result
    }

    /// Number of total assignments over `scope` satisfying `u`.
    pub fn model_count(&self, u: VertexId, scope: &[Var]) -> Result<ModelCount, ScopeError> {
        let mut in_scope = crate::store::VarMask::with_width(self.order().len());
        let mut width = 0usize;
        for &v in scope {
            if self.order().contains(v) {
                let r = self.order().rank(v) as usize;
                if !in_scope.put(r) {
                    width += 1;
                }
            } else {
                width += 1;
            }
        }
        if let Some(r) = self.var_set(u).difference(in_scope.as_set()).next() {
            return Err(ScopeError(self.order().var_at(r as u32)));
        }
        let mut local = FxHashMap::default();
        let own = self.count_rec(u, &mut local);
        Ok(ModelCount(own << (width - self.var_count(u))))
    }

    fn count_rec(&self, u: VertexId, local: &mut FxHashMap<VertexId, BigUint>) -> BigUint {
        if u.is_leaf() {
            return if u == VertexId::TRUE { BigUint::one() } else { BigUint::zero() };
        }
        if let Some(hit) = local.get(&u) {
            return hit.clone();
        }
        let result = match self.vertex(u) {
            Vertex::Leaf(_) => unreachable!(),
            Vertex::Decision { lo, hi, .. } => {
                let rest = self.var_count(u) - 1;
                let l = self.count_rec(lo, local) << (rest - self.var_count(lo));
                let h = self.count_rec(hi, local) << (rest - self.var_count(hi));
                l + h
            }
            Vertex::Conj(children) => {
                let mut acc = BigUint::one();
                for &c in children.iter() {
                    acc *= self.count_rec(c, local);
                }
                acc
            }
        };
        local.insert(u, result.clone());
        result
    }
}
