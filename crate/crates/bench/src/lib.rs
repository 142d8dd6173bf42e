//! Shared inputs for the criterion benches.

use kcdag::formula::random_3cnf;
use kcdag::Cnf;

/// Random 3-CNFs over `num_vars` variables, one per clause count, seeded
/// deterministically.
pub fn corpus(num_vars: u32, clause_counts: &[usize], seed: u64) -> Vec<Cnf> {
    clause_counts
        .iter()
        .enumerate()
        .map(|(k, &m)| random_3cnf(num_vars, m, seed + k as u64))
        .collect()
}
