//! Exhaustive truth-table semantics. Slow on purpose: it shares no code
//! with the diagram machinery it is used to check.

use num_bigint::BigUint;

use super::{Assignment, Cnf, FormulaError, Var};

pub const DEFAULT_ORACLE_LIMIT: u32 = 24;

/// Evaluates `cnf` under a total assignment.
pub fn oracle_eval(cnf: &Cnf, total: &Assignment) -> Result<bool, FormulaError> {
    for k in 1..=cnf.num_vars() {
        if total.get(Var::new(k)).is_none() {
            return Err(FormulaError::PartialAssignment(k));
        }
    }
    Ok(cnf.clauses().iter().all(|clause| {
        clause
            .literals()
            .iter()
            .any(|lit| total.get(lit.var).is_some_and(|v| lit.satisfied_by(v)))
    }))
}

pub fn oracle_count(cnf: &Cnf) -> Result<BigUint, FormulaError> {
    oracle_count_with_limit(cnf, DEFAULT_ORACLE_LIMIT)
}

/// Counts satisfying total assignments by enumerating all `2^n` of them.
pub fn oracle_count_with_limit(cnf: &Cnf, limit: u32) -> Result<BigUint, FormulaError> {
    let n = cnf.num_vars();
    if n > limit || n > 40 {
        return Err(FormulaError::OracleLimit(n, limit.min(40)));
    }
    // bit k of an assignment holds x_{k+1}
    let masks: Vec<(u64, u64)> = cnf
        .clauses()
        .iter()
        .map(|c| {
            c.literals().iter().fold((0u64, 0u64), |(p, q), lit| {
                let bit = 1u64 << (lit.var.index() - 1);
                if lit.positive {
                    (p | bit, q)
                } else {
                    (p, q | bit)
                }
            })
        })
        .collect();
    let mut count: u64 = 0;
    for a in 0..(1u64 << n) {
        if masks.iter().all(|&(p, q)| (a & p) | (!a & q) != 0) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}
