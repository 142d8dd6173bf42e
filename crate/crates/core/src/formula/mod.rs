//! CNF input, partial assignments, variable orders, and the reference
//! truth-table semantics used to cross-check compiled diagrams.

mod dimacs;
mod generate;
mod min_fill;
mod oracle;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use dimacs::{parse_dimacs, write_dimacs};
pub use generate::{chain_family, chain_family_with, random_3cnf, ChainSemantics};
pub use min_fill::min_fill_order;
pub use oracle::{oracle_count, oracle_count_with_limit, oracle_eval, DEFAULT_ORACLE_LIMIT};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable index must be at least 1")]
    ZeroVariable,
    #[error("clause mentions x{0} with both polarities")]
    Tautology(u32),
    #[error("variable x{var} exceeds the declared count {num_vars}")]
    VariableOutOfRange { var: u32, num_vars: u32 },
    #[error("x{0} is already bound to the opposite value")]
    Rebound(u32),
    #[error("assignment leaves x{0} unassigned")]
    PartialAssignment(u32),
    #[error("{0} variables exceed the oracle limit of {1}")]
    OracleLimit(u32, u32),
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(u32),
    #[error("dimacs line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}

/// A propositional variable, 1-based as in DIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics on index 0; use [`Var::try_new`] for untrusted input.
    pub fn new(index: u32) -> Self {
        Self::try_new(index).expect("variable index must be at least 1")
    }

    pub fn try_new(index: u32) -> Result<Self, FormulaError> {
        if index == 0 {
            Err(FormulaError::ZeroVariable)
        } else {
            Ok(Var(index))
        }
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn pos(index: u32) -> Self {
        Literal::new(Var::new(index), true)
    }

    pub fn neg(index: u32) -> Self {
        Literal::new(Var::new(index), false)
    }

    pub fn from_dimacs(code: i64) -> Result<Self, FormulaError> {
        let index = u32::try_from(code.unsigned_abs()).map_err(|_| FormulaError::VariableOutOfRange {
            var: u32::MAX,
            num_vars: u32::MAX,
        })?;
        Ok(Literal::new(Var::try_new(index)?, code > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var.index());
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn negated(self) -> Self {
        Literal::new(self.var, !self.positive)
    }

    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "¬{}", self.var)
        }
    }
}

/// A disjunction of literals over distinct variables, kept sorted by
/// variable index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Duplicate literals are merged; complementary ones are rejected.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self, FormulaError> {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        literals.dedup();
        for pair in literals.windows(2) {
            if pair[0].var == pair[1].var {
                return Err(FormulaError::Tautology(pair[0].var.index()));
            }
        }
        Ok(Clause { literals })
    }

    pub fn from_dimacs(codes: &[i64]) -> Result<Self, FormulaError> {
        Clause::new(codes.iter().map(|&c| Literal::from_dimacs(c)).collect::<Result<Vec<_>, _>>()?)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.literals.last().map(|l| l.var)
    }

    /// The assignment falsifying every literal.
    pub fn falsifying_assignment(&self) -> Assignment {
        let mut a = Assignment::new();
        for lit in &self.literals {
            a.insert(lit.var, !lit.positive);
        }
        a
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for clause in &clauses {
            if let Some(v) = clause.max_var() {
                if v.index() > num_vars {
                    return Err(FormulaError::VariableOutOfRange {
                        var: v.index(),
                        num_vars,
                    });
                }
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (1..=self.num_vars).map(Var::new)
    }

    /// Same formula with its clause list reordered.
    pub fn permuted(&self, permutation: &[usize]) -> Cnf {
        assert_eq!(permutation.len(), self.clauses.len());
        Cnf {
            num_vars: self.num_vars,
            clauses: permutation.iter().map(|&k| self.clauses[k].clone()).collect(),
        }
    }
}

/// A partial map from variables to truth values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `var`, failing if it is already bound to the other value.
    pub fn bind(&mut self, var: Var, value: bool) -> Result<(), FormulaError> {
        match self.values.insert(var, value) {
            Some(old) if old != value => {
                self.values.insert(var, old);
                Err(FormulaError::Rebound(var.index()))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn insert(&mut self, var: Var, value: bool) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values.iter().map(|(&v, &b)| (v, b))
    }

    /// Builds the total assignment over `1..=num_vars` encoded by the low bits of `bits`.
    pub fn from_bits(num_vars: u32, bits: u64) -> Self {
        let mut a = Assignment::new();
        for k in 0..num_vars {
            a.insert(Var::new(k + 1), bits >> k & 1 == 1);
        }
        a
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (Var, bool)>>(iter: T) -> Self {
        let mut a = Assignment::new();
        for (v, b) in iter {
            a.insert(v, b);
        }
        a
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, b) in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}", if b { i64::from(v.index()) } else { -i64::from(v.index()) })?;
        }
        Ok(())
    }
}

/// A total order on `1..=n`; a variable's rank is its position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableOrder {
    sequence: Vec<Var>,
    // rank[var index - 1]
    rank: Vec<u32>,
}

impl VariableOrder {
    pub fn natural(num_vars: u32) -> Self {
        VariableOrder {
            sequence: (1..=num_vars).map(Var::new).collect(),
            rank: (0..num_vars).collect(),
        }
    }

    pub fn from_sequence(sequence: Vec<Var>) -> Result<Self, FormulaError> {
        let n = sequence.len() as u32;
        let mut rank = vec![u32::MAX; sequence.len()];
        for (pos, v) in sequence.iter().enumerate() {
            let slot = rank
                .get_mut(v.index() as usize - 1)
                .ok_or(FormulaError::NotAPermutation(n))?;
            if *slot != u32::MAX {
                return Err(FormulaError::NotAPermutation(n));
            }
            *slot = pos as u32;
        }
        Ok(VariableOrder { sequence, rank })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[Var] {
        &self.sequence
    }

    /// Panics if `var` is outside the order.
    pub fn rank(&self, var: Var) -> u32 {
        self.rank[var.index() as usize - 1]
    }

    pub fn contains(&self, var: Var) -> bool {
        (var.index() as usize) <= self.rank.len()
    }

    pub fn var_at(&self, rank: u32) -> Var {
        self.sequence[rank as usize]
    }

    pub fn precedes(&self, a: Var, b: Var) -> bool {
        self.rank(a) < self.rank(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_normalizes_and_rejects_tautologies() {
        let c = Clause::from_dimacs(&[3, -1, 3]).unwrap();
        assert_eq!(c.literals(), &[Literal::neg(1), Literal::pos(3)]);
        assert_eq!(Clause::from_dimacs(&[2, -2]), Err(FormulaError::Tautology(2)));
        assert!(Clause::from_dimacs(&[]).unwrap().is_empty());
    }

    #[test]
    fn cnf_checks_variable_range() {
        let c = Clause::from_dimacs(&[1, 4]).unwrap();
        assert!(matches!(
            Cnf::new(3, vec![c]),
            Err(FormulaError::VariableOutOfRange { var: 4, num_vars: 3 })
        ));
    }

    #[test]
    fn assignment_rejects_rebinding() {
        let mut a = Assignment::new();
        a.bind(Var::new(1), true).unwrap();
        a.bind(Var::new(1), true).unwrap();
        assert_eq!(a.bind(Var::new(1), false), Err(FormulaError::Rebound(1)));
        assert_eq!(a.get(Var::new(1)), Some(true));
    }

    #[test]
    fn order_ranks() {
        let o = VariableOrder::from_sequence(vec![Var::new(3), Var::new(1), Var::new(2)]).unwrap();
        assert_eq!(o.rank(Var::new(3)), 0);
        assert_eq!(o.rank(Var::new(2)), 2);
        assert!(o.precedes(Var::new(1), Var::new(2)));
        assert!(VariableOrder::from_sequence(vec![Var::new(1), Var::new(1)]).is_err());
        assert!(VariableOrder::from_sequence(vec![Var::new(2)]).is_err());
    }
}
