use std::fmt;

use super::{Bound, DiagramStore, Vertex, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Diagrams over more variables than this skip the semantic check.
    pub semantic_var_limit: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { semantic_var_limit: 12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinestStatus {
    Passed,
    Failed,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    Unordered(VertexId),
    Unreduced(VertexId),
    MalformedConj(VertexId),
    OverBound(VertexId),
    NotFinest(VertexId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unordered(v) => write!(f, "{v}: decision variable does not precede its descendants"),
            Violation::Unreduced(v) => write!(f, "{v}: decision vertex with identical children"),
            Violation::MalformedConj(v) => write!(f, "{v}: conjunction children overlap, nest or are unsorted"),
            Violation::OverBound(v) => write!(f, "{v}: more than one conjunction child exceeds the bound"),
            Violation::NotFinest(v) => write!(f, "{v}: not the finest bounded decomposition"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ordered_ok: bool,
    pub reduced_ok: bool,
    pub bounded_ok: bool,
    pub decomposition_finest: FinestStatus,
    pub offending: Vec<Violation>,
}

impl ValidationReport {
    pub fn structural_ok(&self) -> bool {
        self.ordered_ok && self.reduced_ok && self.bounded_ok
    }

    pub fn all_ok(&self) -> bool {
        self.structural_ok() && self.decomposition_finest != FinestStatus::Failed
    }
}

impl DiagramStore {
    pub fn validate(&self, root: VertexId, i: Bound) -> ValidationReport {
        self.validate_with(root, i, ValidationOptions::default())
    }

    pub fn validate_with(&self, root: VertexId, i: Bound, options: ValidationOptions) -> ValidationReport {
        let reachable = self.reachable(root);
        let mut offending = Vec::new();
        for &v in &reachable {
            self.check_structure(v, i, &mut offending);
        }
        let has = |pred: fn(&Violation) -> bool, list: &[Violation]| list.iter().any(pred);
        let ordered_ok = !has(|v| matches!(v, Violation::Unordered(_)), &offending);
        let reduced_ok = !has(|v| matches!(v, Violation::Unreduced(_)), &offending);
        let bounded_ok = !has(|v| matches!(v, Violation::MalformedConj(_) | Violation::OverBound(_)), &offending);

        let decomposition_finest = if self.var_count(root) > options.semantic_var_limit {
            FinestStatus::Skipped
        } else {
            let before = offending.len();
            for &v in &reachable {
                if !v.is_leaf() && !self.finest_holds(v, i) {
                    offending.push(Violation::NotFinest(v));
                }
            }
            if offending.len() > before {
                FinestStatus::Failed
            } else {
                FinestStatus::Passed
            }
        };
        ValidationReport { ordered_ok, reduced_ok, bounded_ok, decomposition_finest, offending }
    }

    fn check_structure(&self, v: VertexId, i: Bound, out: &mut Vec<Violation>) {
        match self.vertex(v) {
            Vertex::Leaf(_) => {}
            Vertex::Decision { var, lo, hi } => {
                let r = self.order().rank(var);
                if self.least_rank(lo) <= r || self.least_rank(hi) <= r {
                    out.push(Violation::Unordered(v));
                }
                if lo == hi {
                    out.push(Violation::Unreduced(v));
                }
            }
            Vertex::Conj(children) => {
                let malformed = children.len() < 2
                    || children.iter().any(|&c| !matches!(self.vertex(c), Vertex::Decision { .. }))
                    || children.windows(2).any(|w| self.least_rank(w[0]) >= self.least_rank(w[1]))
                    || children
                        .iter()
                        .enumerate()
                        .any(|(k, &a)| children[k + 1..].iter().any(|&b| !self.disjoint(a, b)));
                if malformed {
                    out.push(Violation::MalformedConj(v));
                }
                if children.iter().filter(|&&c| i.exceeded_by(self.var_count(c))).count() > 1 {
                    out.push(Violation::OverBound(v));
                }
            }
        }
    }

    // Brute force over the truth table of `v`: the function must depend on
    // every variable it mentions, and its finest conjunctive partition with
    // over-bound blocks merged must match the vertex shape.
    fn finest_holds(&self, v: VertexId, i: Bound) -> bool {
        let vars = self.vars_of(v);
        let k = vars.len();
        let mut local = vec![usize::MAX; self.order().len()];
        for (j, &x) in vars.iter().enumerate() {
            local[self.order().rank(x) as usize] = j;
        }
        let size = 1usize << k;
        let table: Vec<bool> = (0..size)
            .map(|m| self.eval_with(v, &|x| m >> local[self.order().rank(x) as usize] & 1 == 1))
            .collect();
        for j in 0..k {
            if (0..size).all(|m| table[m] == table[m ^ (1 << j)]) {
                return false;
            }
        }
        let models: Vec<usize> = (0..size).filter(|&m| table[m]).collect();

        let full = size - 1;
        let mut remaining = full;
        let mut blocks = Vec::new();
        while remaining != 0 {
            let low = remaining & remaining.wrapping_neg();
            let block = least_separable(&table, &models, full, remaining, low);
            blocks.push(block);
            remaining &= !block;
        }
        let mut merged = 0usize;
        let mut partition: Vec<usize> = Vec::new();
        for b in blocks {
            if i.exceeded_by(b.count_ones() as usize) {
                merged |= b;
            } else {
                partition.push(b);
            }
        }
        if merged != 0 {
            partition.push(merged);
        }

        match self.vertex(v) {
            Vertex::Conj(children) => {
                let mut expected: Vec<usize> = children
                    .iter()
                    .map(|&c| {
                        self.vars_of(c).iter().fold(0usize, |acc, &x| acc | 1 << local[self.order().rank(x) as usize])
                    })
                    .collect();
                expected.sort_unstable();
                partition.sort_unstable();
                expected == partition
            }
            _ => partition.len() == 1,
        }
    }
}

// Smallest subset of `remaining` containing `low` that splits off as an
// independent factor. Subsets are tried in order of size.
fn least_separable(table: &[bool], models: &[usize], full: usize, remaining: usize, low: usize) -> usize {
    let others: Vec<usize> = (0..usize::BITS).map(|b| 1usize << b).filter(|&b| remaining & b != 0 && b != low).collect();
    let n = others.len();
    for size in 0..n {
        let mut chosen: Vec<usize> = (0..size).collect();
        loop {
            let x = chosen.iter().fold(low, |acc, &c| acc | others[c]);
            if separates(table, models, full, x) {
                return x;
            }
            if !next_combination(&mut chosen, n) {
                break;
            }
        }
    }
    remaining
}

fn next_combination(chosen: &mut [usize], n: usize) -> bool {
    let k = chosen.len();
    for pos in (0..k).rev() {
        if chosen[pos] < n - k + pos {
            chosen[pos] += 1;
            for q in pos + 1..k {
                chosen[q] = chosen[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

// The models split as a product over `x` and its complement.
fn separates(table: &[bool], models: &[usize], full: usize, x: usize) -> bool {
    let y = full & !x;
    let first = models[0];
    for &m in models {
        if !table[(first & x) | (m & y)] || !table[(m & x) | (first & y)] {
            return false;
        }
    }
    let mut seen_x = vec![false; full + 1];
    let mut seen_y = vec![false; full + 1];
    let (mut cx, mut cy) = (0usize, 0usize);
    for &m in models {
        if !std::mem::replace(&mut seen_x[m & x], true) {
            cx += 1;
        }
        if !std::mem::replace(&mut seen_y[m & y], true) {
            cy += 1;
        }
    }
    cx * cy == models.len()
}
