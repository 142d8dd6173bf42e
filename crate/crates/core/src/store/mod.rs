//! Hash-consed vertex arena for ordered decision diagrams with
//! conjunction vertices.
//!
//! A [`DiagramStore`] owns every vertex. Structurally identical vertices
//! share one [`VertexId`], so for diagrams in canonical form at a fixed
//! bound, logical equivalence is id equality.
//!
//! The raw constructors ([`DiagramStore::make_decision`],
//! [`DiagramStore::make_conj`]) enforce orderedness, the lo = hi
//! reduction and the notational collapses for conjunctions; they do not
//! canonicalize. Canonical forms come out of `decompose` and the
//! operations built on it.

mod dot;
mod kdag;
mod validate;
mod varset;

use std::fmt;
use std::str::FromStr;
use std::hash::BuildHasher;

use hashbrown::HashTable;
use rustc_hash::{FxBuildHasher, FxHashMap};
use smallvec::SmallVec;
use thiserror::Error;

use crate::formula::{Assignment, Var, VariableOrder};

pub use kdag::KdagError;
pub use validate::{FinestStatus, ValidationOptions, ValidationReport, Violation};
pub(crate) use varset::{VarMask, VarSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("{var} does not precede the variables below it")]
    OrderViolation { var: Var },
    #[error("{var} is not in the store's variable order")]
    UnknownVariable { var: Var },
    #[error("conjunction children share variables")]
    OverlappingChildren,
    #[error("conjunction child {0} is itself a conjunction")]
    NestedConjunction(VertexId),
}

/// Handle to a vertex; meaningful only for the store that issued it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    pub const FALSE: VertexId = VertexId(0);
    pub const TRUE: VertexId = VertexId(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_leaf(self) -> bool {
        self.0 < 2
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Borrowed view of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex<'a> {
    Leaf(bool),
    Decision { var: Var, lo: VertexId, hi: VertexId },
    /// Children sorted by their least variable.
    Conj(&'a [VertexId]),
}

/// Conjunction bound: at most one child of a conjunction vertex may
/// mention more than this many variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(u32),
    Infinite,
}

impl Bound {
    /// True when a component over `nvars` variables counts as large.
    pub fn exceeded_by(self, nvars: usize) -> bool {
        match self {
            Bound::Finite(i) => nvars > i as usize,
            Bound::Infinite => false,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Bound::Finite(0)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(i) => write!(f, "{i}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bound must be a non-negative integer or `inf`, got `{0}`")]
pub struct ParseBoundError(String);

impl FromStr for Bound {
    type Err = ParseBoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" => Ok(Bound::Infinite),
            t => t.parse().map(Bound::Finite).map_err(|_| ParseBoundError(s.to_string())),
        }
    }
}

/// Computed tables, one per operation.
#[derive(Default)]
pub(crate) struct Memo {
    pub(crate) decompose: FxHashMap<(VertexId, Bound), VertexId>,
    pub(crate) convert: FxHashMap<(VertexId, Bound), VertexId>,
    pub(crate) merge: FxHashMap<(SmallVec<[VertexId; 4]>, Bound), VertexId>,
    // keyed by (vertex, 2 * rank + value, bound)
    pub(crate) restrict: FxHashMap<(VertexId, u32, Bound), VertexId>,
    pub(crate) and: FxHashMap<(VertexId, VertexId, Bound), VertexId>,
    pub(crate) or: FxHashMap<(VertexId, VertexId, Bound), VertexId>,
    pub(crate) not: FxHashMap<(VertexId, Bound), VertexId>,
}

impl Memo {
    fn clear(&mut self) {
        *self = Memo::default();
    }
}

#[derive(Clone, Copy)]
enum Node {
    Leaf(bool),
    Decision { var: Var, lo: VertexId, hi: VertexId },
    // range in the shared child arena
    Conj { start: u32, len: u32 },
}

struct Slot {
    id: VertexId,
    node: Node,
    nvars: u32,
    least_rank: u32,
}

pub struct DiagramStore {
    order: VariableOrder,
    slots: Vec<Slot>,
    // per-vertex variable sets indexed by rank, `words` u64s each
    bits: Vec<u64>,
    words: usize,
    decisions: FxHashMap<(Var, VertexId, VertexId), VertexId>,
    kids: Vec<VertexId>,
    conjs: HashTable<VertexId>,
    pub(crate) memo: Memo,
}

impl fmt::Debug for DiagramStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiagramStore")
            .field("num_vars", &self.num_vars())
            .field("vertices", &self.slots.len())
            .finish()
    }
}

impl DiagramStore {
    pub fn new(order: VariableOrder) -> Self {
        let words = order.len().div_ceil(64);
        let mut store = DiagramStore {
            order,
            slots: Vec::new(),
            bits: Vec::new(),
            words,
            decisions: FxHashMap::default(),
            kids: Vec::new(),
            conjs: HashTable::new(),
            memo: Memo::default(),
        };
        for value in [false, true] {
            store.push(Node::Leaf(value), VarMask::with_width(words * 64));
        }
        store
    }

    pub fn with_natural_order(num_vars: u32) -> Self {
        Self::new(VariableOrder::natural(num_vars))
    }

    pub fn order(&self) -> &VariableOrder {
        &self.order
    }

    pub fn num_vars(&self) -> u32 {
        self.order.len() as u32
    }

    /// Number of vertices ever created, leaves included.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn clear_memo(&mut self) {
        self.memo.clear();
    }

    pub fn vertex(&self, id: VertexId) -> Vertex<'_> {
        match self.slots[id.index()].node {
            Node::Leaf(b) => Vertex::Leaf(b),
            Node::Decision { var, lo, hi } => Vertex::Decision { var, lo, hi },
            Node::Conj { .. } => Vertex::Conj(children_of(&self.slots, &self.kids, id)),
        }
    }

    pub fn make_leaf(&self, value: bool) -> VertexId {
        if value {
            VertexId::TRUE
        } else {
            VertexId::FALSE
        }
    }

    /// `⟨var, lo, hi⟩`, or `lo` when both children coincide.
    pub fn make_decision(&mut self, var: Var, lo: VertexId, hi: VertexId) -> Result<VertexId, StoreError> {
        if !self.order.contains(var) {
            return Err(StoreError::UnknownVariable { var });
        }
        if lo == hi {
            return Ok(lo);
        }
        let rank = self.order.rank(var);
        if rank >= self.least_rank(lo) || rank >= self.least_rank(hi) {
            return Err(StoreError::OrderViolation { var });
        }
        Ok(self.decision_unchecked(var, lo, hi))
    }

    /// Applies the conjunction collapses: ⊤ children vanish, a ⊥ child
    /// absorbs, no children is ⊤ and one child is itself.
    pub fn make_conj(&mut self, children: impl IntoIterator<Item = VertexId>) -> Result<VertexId, StoreError> {
        let mut kept: Vec<VertexId> = Vec::new();
        for c in children {
            if c == VertexId::FALSE {
                return Ok(VertexId::FALSE);
            }
            if c == VertexId::TRUE {
                continue;
            }
            if matches!(self.vertex(c), Vertex::Conj(_)) {
                return Err(StoreError::NestedConjunction(c));
            }
            kept.push(c);
        }
        kept.sort_unstable();
        kept.dedup();
        let mut seen = VarMask::with_width(self.order.len());
        for &c in &kept {
            if !seen.as_set().is_disjoint(self.var_set(c)) {
                return Err(StoreError::OverlappingChildren);
            }
            seen.union_with(self.var_set(c));
        }
        Ok(self.conj_unchecked(&kept))
    }

    /// Literal vertex: `⟨x, ⊥, ⊤⟩` when positive, `⟨x, ⊤, ⊥⟩` otherwise.
    pub fn literal(&mut self, var: Var, positive: bool) -> VertexId {
        let (lo, hi) = if positive {
            (VertexId::FALSE, VertexId::TRUE)
        } else {
            (VertexId::TRUE, VertexId::FALSE)
        };
        self.make_decision(var, lo, hi).expect("literal variable must be in the order")
    }

    pub(crate) fn decision_unchecked(&mut self, var: Var, lo: VertexId, hi: VertexId) -> VertexId {
        debug_assert_ne!(lo, hi);
        if let Some(&id) = self.decisions.get(&(var, lo, hi)) {
            return id;
        }
        let mut vars = VarMask::from_set(self.var_set(lo));
        vars.union_with(self.var_set(hi));
        vars.put(self.order.rank(var) as usize);
        let id = self.push(Node::Decision { var, lo, hi }, vars);
        self.decisions.insert((var, lo, hi), id);
        id
    }

    /// `children` must be non-leaf, non-conjunction and variable-disjoint.
    pub(crate) fn conj_unchecked(&mut self, children: &[VertexId]) -> VertexId {
        match children.len() {
            0 => return VertexId::TRUE,
            1 => return children[0],
            _ => {}
        }
        let mut sorted: SmallVec<[VertexId; 8]> = SmallVec::from_slice(children);
        if !sorted.is_sorted_by_key(|&c| self.least_rank(c)) {
            sorted.sort_unstable_by_key(|&c| self.least_rank(c));
        }
        let hash = FxBuildHasher.hash_one(sorted.as_slice());
        let (slots, kids) = (&self.slots, &self.kids);
        if let Some(&id) = self.conjs.find(hash, |&id| children_of(slots, kids, id) == sorted.as_slice()) {
            return id;
        }
        let mut vars = VarMask::with_width(self.order.len());
        for &c in &sorted {
            vars.union_with(self.var_set(c));
        }
        let start = u32::try_from(self.kids.len()).expect("child arena overflow");
        self.kids.extend_from_slice(&sorted);
        let id = self.push(Node::Conj { start, len: sorted.len() as u32 }, vars);
        let (slots, kids) = (&self.slots, &self.kids);
        self.conjs.insert_unique(hash, id, |&id| FxBuildHasher.hash_one(children_of(slots, kids, id)));
        id
    }

    fn push(&mut self, node: Node, vars: VarMask) -> VertexId {
        let id = VertexId(u32::try_from(self.slots.len()).expect("vertex arena overflow"));
        let nvars = vars.as_set().count() as u32;
        let least_rank = vars.as_set().minimum().map_or(u32::MAX, |r| r as u32);
        self.bits.extend_from_slice(vars.words());
        self.slots.push(Slot {
            id,
            node,
            nvars,
            least_rank,
        });
        id
    }

    /// Variables mentioned below `id`, in order.
    pub fn vars_of(&self, id: VertexId) -> Vec<Var> {
        self.var_set(id).ones().map(|r| self.order.var_at(r as u32)).collect()
    }

    pub fn var_count(&self, id: VertexId) -> usize {
        self.slots[id.index()].nvars as usize
    }

    pub fn mentions(&self, id: VertexId, var: Var) -> bool {
        self.order.contains(var) && self.var_set(id).contains(self.order.rank(var) as usize)
    }

    pub fn least_var(&self, id: VertexId) -> Option<Var> {
        let r = self.least_rank(id);
        (r != u32::MAX).then(|| self.order.var_at(r))
    }

    pub(crate) fn least_rank(&self, id: VertexId) -> u32 {
        self.slots[id.index()].least_rank
    }

    pub(crate) fn var_set(&self, id: VertexId) -> VarSet<'_> {
        let start = id.index() * self.words;
        VarSet::new(&self.bits[start..start + self.words])
    }

    pub(crate) fn disjoint(&self, a: VertexId, b: VertexId) -> bool {
        self.var_set(a).is_disjoint(self.var_set(b))
    }

    /// Children of a conjunction, `[id]` for a decision vertex, nothing for ⊤.
    /// Must not be called on ⊥.
    pub(crate) fn components(&self, id: VertexId) -> &[VertexId] {
        match self.slots[id.index()].node {
            Node::Leaf(_) => &[],
            Node::Conj { .. } => children_of(&self.slots, &self.kids, id),
            Node::Decision { .. } => std::slice::from_ref(&self.slots[id.index()].id),
        }
    }

    /// Vertices reachable from `root`, children before parents.
    pub fn reachable(&self, root: VertexId) -> Vec<VertexId> {
        let mut seen = fixedbitset::FixedBitSet::with_capacity(self.slots.len());
        let mut out = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                out.push(id);
                continue;
            }
            if seen.put(id.index()) {
                continue;
            }
            stack.push((id, true));
            match self.vertex(id) {
                Vertex::Leaf(_) => {}
                Vertex::Decision { lo, hi, .. } => {
                    stack.push((hi, false));
                    stack.push((lo, false));
                }
                Vertex::Conj(ch) => {
                    for &c in ch.iter().rev() {
                        stack.push((c, false));
                    }
                }
            }
        }
        out
    }

    /// Edge count of the DAG under `root`; shared vertices count once.
    pub fn size(&self, root: VertexId) -> usize {
        self.reachable(root)
            .into_iter()
            .map(|id| match self.vertex(id) {
                Vertex::Leaf(_) => 0,
                Vertex::Decision { .. } => 2,
                Vertex::Conj(ch) => ch.len(),
            })
            .sum()
    }

    /// Reachable vertices, leaves included.
    pub fn vertex_count(&self, root: VertexId) -> usize {
        self.reachable(root).len()
    }

    /// Evaluates the diagram; unassigned variables read as false.
    pub fn eval(&self, root: VertexId, assignment: &Assignment) -> bool {
        self.eval_with(root, &|v| assignment.get(v).unwrap_or(false))
    }

    pub fn eval_with(&self, root: VertexId, value: &dyn Fn(Var) -> bool) -> bool {
        let mut id = root;
        loop {
            match self.vertex(id) {
                Vertex::Leaf(b) => return b,
                Vertex::Decision { var, lo, hi } => id = if value(var) { hi } else { lo },
                Vertex::Conj(ch) => return ch.iter().all(|&c| self.eval_with(c, value)),
            }
        }
    }
}

fn children_of<'a>(slots: &[Slot], kids: &'a [VertexId], id: VertexId) -> &'a [VertexId] {
    match slots[id.index()].node {
        Node::Conj { start, len } => &kids[start as usize..(start + len) as usize],
        _ => &[],
    }
}
