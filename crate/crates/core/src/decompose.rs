//! Canonicalization into the reduced, finest-bounded-decomposition form.
//!
//! Everything that builds canonical vertices goes through two
//! constructors:
//!
//! * [`DiagramStore::canonical_decision`] turns `⟨x, lo, hi⟩` with canonical
//!   children into the canonical vertex of the same function, pulling
//!   out implied literals and components shared by both branches;
//! * [`DiagramStore::canonical_conj`] conjoins canonical vertices over
//!   disjoint variables, flattening nested conjunctions and fusing the
//!   components that exceed the bound into a single decision vertex.
//!
//! [`DiagramStore::decompose`] applies them bottom-up to an arbitrary
//! ordered diagram whose conjunctions respect the bound.

use smallvec::SmallVec;
use thiserror::Error;

use crate::formula::Var;
use crate::store::{Bound, DiagramStore, StoreError, Vertex, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("conjunction {vertex} has more than one child over more than {bound} variables")]
    BoundViolation { vertex: VertexId, bound: Bound },
    #[error("{0} is not a decision vertex")]
    NotDecision(VertexId),
    #[error("precondition of {helper} does not hold at {vertex}")]
    Precondition { helper: &'static str, vertex: VertexId },
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl DiagramStore {
    /// The canonical vertex at bound `i` equivalent to `u`.
    ///
    /// `u` may be any ordered diagram whose conjunction vertices have at
    /// most one child over more than `i` variables.
    pub fn decompose(&mut self, u: VertexId, i: Bound) -> Result<VertexId, DecomposeError> {
        if u.is_leaf() {
            return Ok(u);
        }
        if let Some(&hit) = self.memo.decompose.get(&(u, i)) {
            return Ok(hit);
        }
        let result = match self.vertex(u) {
            Vertex::Leaf(_) => u,
            Vertex::Decision { var, lo, hi } => {
                let lo = self.decompose(lo, i)?;
                let hi = self.decompose(hi, i)?;
                self.canonical_decision(var, lo, hi, i)
            }
            Vertex::Conj(children) => {
                let large = children.iter().filter(|&&c| i.exceeded_by(self.var_count(c))).count();
                if large > 1 {
                    return Err(DecomposeError::BoundViolation { vertex: u, bound: i });
                }
                let children: SmallVec<[VertexId; 8]> = SmallVec::from_slice(children);
                let parts = children
                    .iter()
                    .map(|&c| self.decompose(c, i))
                    .collect::<Result<Vec<_>, _>>()?;
                self.finest(&parts)?
            }
        };
        self.memo.decompose.insert((u, i), result);
        Ok(result)
    }

    /// Conjunction of `children` with every conjunction child inlined.
    pub fn finest(&mut self, children: &[VertexId]) -> Result<VertexId, StoreError> {
        let mut flat = Vec::with_capacity(children.len());
        let mut stack: Vec<VertexId> = children.iter().rev().copied().collect();
        while let Some(c) = stack.pop() {
            match self.vertex(c) {
                Vertex::Conj(ch) => stack.extend(ch.iter().rev()),
                _ => flat.push(c),
            }
        }
        self.make_conj(flat)
    }

    /// Canonical form of `⟨x, lo, hi⟩` when one child is ⊥ and the vertex
    /// mentions more than one variable.
    pub fn extract_leaf(&mut self, u: VertexId, i: Bound) -> Result<VertexId, DecomposeError> {
        let (x, lo, hi) = self.decision_parts(u)?;
        if !(lo == VertexId::FALSE || hi == VertexId::FALSE) || self.var_count(u) <= 1 {
            return Err(DecomposeError::Precondition {
                helper: "extract_leaf",
                vertex: u,
            });
        }
        Ok(self.leaf_case(x, lo, hi, i))
    }

    /// Canonical form of `⟨x, lo, hi⟩` when one child is a component of the
    /// other, which is a conjunction.
    pub fn extract_part(&mut self, u: VertexId, i: Bound) -> Result<VertexId, DecomposeError> {
        let (x, lo, hi) = self.decision_parts(u)?;
        if !self.is_part_of(lo, hi) && !self.is_part_of(hi, lo) {
            return Err(DecomposeError::Precondition {
                helper: "extract_part",
                vertex: u,
            });
        }
        Ok(self.shared_case(x, lo, hi, i))
    }

    /// Canonical form of `⟨x, lo, hi⟩` when both children are conjunctions
    /// with at least one common child.
    pub fn extract_share(&mut self, u: VertexId, i: Bound) -> Result<VertexId, DecomposeError> {
        let (x, lo, hi) = self.decision_parts(u)?;
        let both_conj =
            matches!(self.vertex(lo), Vertex::Conj(_)) && matches!(self.vertex(hi), Vertex::Conj(_));
        if !both_conj || self.shared_components(lo, hi).is_empty() {
            return Err(DecomposeError::Precondition {
                helper: "extract_share",
                vertex: u,
            });
        }
        Ok(self.shared_case(x, lo, hi, i))
    }

    fn decision_parts(&self, u: VertexId) -> Result<(Var, VertexId, VertexId), DecomposeError> {
        match self.vertex(u) {
            Vertex::Decision { var, lo, hi } => Ok((var, lo, hi)),
            _ => Err(DecomposeError::NotDecision(u)),
        }
    }

    fn is_part_of(&self, part: VertexId, whole: VertexId) -> bool {
        match self.vertex(whole) {
            Vertex::Conj(ch) => ch.contains(&part),
            _ => false,
        }
    }

    fn shared_components(&self, a: VertexId, b: VertexId) -> SmallVec<[VertexId; 8]> {
        let cb = self.components(b);
        self.components(a).iter().copied().filter(|c| cb.contains(c)).collect()
    }

    /// Canonical vertex for `(¬x ∧ lo) ∨ (x ∧ hi)`.
    ///
    /// `lo` and `hi` must be canonical at `i` and `x` must precede every
    /// variable they mention.
    pub(crate) fn canonical_decision(&mut self, x: Var, lo: VertexId, hi: VertexId, i: Bound) -> VertexId {
        if lo == hi {
            return lo;
        }
        if lo == VertexId::FALSE || hi == VertexId::FALSE {
            return self.leaf_case(x, lo, hi, i);
        }
        self.shared_case(x, lo, hi, i)
    }

    // x ∧ hi (or ¬x ∧ lo): the literal is a component of its own once the
    // bound admits single-variable components.
    fn leaf_case(&mut self, x: Var, lo: VertexId, hi: VertexId, i: Bound) -> VertexId {
        let (positive, other) = if lo == VertexId::FALSE { (true, hi) } else { (false, lo) };
        if i.is_zero() || other == VertexId::TRUE {
            return self.decision_unchecked(x, lo, hi);
        }
        let lit = self.literal(x, positive);
        self.canonical_conj(&[lit, other], i)
    }

    // Components common to both branches factor out; the rest stays under
    // a decision on x. A shared component over more than i variables must
    // stay inside when the residual decision is itself over the bound.
    fn shared_case(&mut self, x: Var, lo: VertexId, hi: VertexId, i: Bound) -> VertexId {
        let lo_conj = matches!(self.vertex(lo), Vertex::Conj(_));
        let hi_conj = matches!(self.vertex(hi), Vertex::Conj(_));
        if (!lo_conj && !hi_conj) || self.disjoint(lo, hi) {
            return self.decision_unchecked(x, lo, hi);
        }
        let mut shared = self.shared_components(lo, hi);
        if shared.is_empty() {
            return self.decision_unchecked(x, lo, hi);
        }
        let shared_vars: usize = shared.iter().map(|&c| self.var_count(c)).sum();
        let residue_vars = 1 + self.var_set(lo).union_count(self.var_set(hi)) - shared_vars;
        if i.exceeded_by(residue_vars) {
            shared.retain(|c| !i.exceeded_by(self.var_count(*c)));
            if shared.is_empty() {
                return self.decision_unchecked(x, lo, hi);
            }
        }
        let rest_lo: SmallVec<[VertexId; 8]> =
            self.components(lo).iter().copied().filter(|c| !shared.contains(c)).collect();
        let rest_hi: SmallVec<[VertexId; 8]> =
            self.components(hi).iter().copied().filter(|c| !shared.contains(c)).collect();
        let lo2 = self.conj_unchecked(&rest_lo);
        let hi2 = self.conj_unchecked(&rest_hi);
        let residual = self.decision_unchecked(x, lo2, hi2);
        shared.push(residual);
        self.conj_unchecked(&shared)
    }

    /// Canonical conjunction of canonical vertices over pairwise disjoint
    /// variables.
    pub(crate) fn canonical_conj(&mut self, items: &[VertexId], i: Bound) -> VertexId {
        let mut small: SmallVec<[VertexId; 8]> = SmallVec::new();
        let mut large: SmallVec<[VertexId; 4]> = SmallVec::new();
        for &item in items {
            if item == VertexId::FALSE {
                return VertexId::FALSE;
            }
            for &c in self.components(item) {
                if i.exceeded_by(self.var_count(c)) {
                    large.push(c);
                } else {
                    small.push(c);
                }
            }
        }
        if large.len() > 1 {
            let fused = self.fuse_large(large, i);
            small.push(fused);
        } else {
            small.extend(large);
        }
        self.conj_unchecked(&small)
    }

    // Conjunction of several components that each exceed the bound: one
    // decision vertex, built by Shannon expansion on the least variable.
    fn fuse_large(&mut self, mut parts: SmallVec<[VertexId; 4]>, i: Bound) -> VertexId {
        parts.sort_unstable_by_key(|&c| self.least_rank(c));
        let key = (parts.clone(), i);
        if let Some(&hit) = self.memo.merge.get(&key) {
            return hit;
        }
        let (x, lo, hi) = match self.vertex(parts[0]) {
            Vertex::Decision { var, lo, hi } => (var, lo, hi),
            _ => unreachable!("components are decision vertices"),
        };
        let mut branch = parts.clone();
        branch[0] = lo;
        let r0 = self.canonical_conj(&branch, i);
        branch[0] = hi;
        let r1 = self.canonical_conj(&branch, i);
        let result = self.canonical_decision(x, r0, r1, i);
        self.memo.merge.insert(key, result);
        result
    }

}
