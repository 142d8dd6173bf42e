//! Formula families for tests and benchmarks.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Clause, Cnf, Literal, Var};

/// How an unparenthesized chain `a ↔ b ↔ c ↔ …` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChainSemantics {
    /// Left-associative biconditional: the chain fixes the parity of its
    /// variables.
    #[default]
    Parity,
    /// Consecutive pairwise biconditionals: all variables are equal.
    AllEqual,
}

/// `n` independent chains over `j + 2` variables each; chain `k` links
/// `x_k, x_{k+n}, …, x_{k+(j+1)n}`.
pub fn chain_family(n: u32, j: u32) -> Cnf {
    chain_family_with(n, j, ChainSemantics::Parity)
}

pub fn chain_family_with(n: u32, j: u32, semantics: ChainSemantics) -> Cnf {
    assert!(n >= 1, "chain_family needs n >= 1");
    let width = j + 2;
    let num_vars = width * n;
    let mut clauses = Vec::new();
    for k in 1..=n {
        let vars: Vec<Var> = (0..width).map(|step| Var::new(k + step * n)).collect();
        match semantics {
            ChainSemantics::Parity => parity_clauses(&vars, &mut clauses),
            ChainSemantics::AllEqual => {
                for pair in vars.windows(2) {
                    clauses.push(Clause::new([Literal::new(pair[0], false), Literal::new(pair[1], true)]).unwrap());
                    clauses.push(Clause::new([Literal::new(pair[0], true), Literal::new(pair[1], false)]).unwrap());
                }
            }
        }
    }
    Cnf::new(num_vars, clauses).expect("chain variables are in range")
}

// A chain of m variables holds iff their xor equals m mod 2; every
// assignment of the wrong parity gets a blocking clause.
fn parity_clauses(vars: &[Var], out: &mut Vec<Clause>) {
    let m = vars.len() as u32;
    let target = m % 2;
    for bits in 0u64..(1u64 << m) {
        if bits.count_ones() % 2 == target {
            continue;
        }
        let lits = vars
            .iter()
            .enumerate()
            .map(|(pos, &v)| Literal::new(v, bits >> pos & 1 == 0));
        out.push(Clause::new(lits).unwrap());
    }
}

/// Uniform random 3-CNF: three distinct variables per clause, independent
/// polarities. Deterministic in `seed`.
pub fn random_3cnf(num_vars: u32, num_clauses: usize, seed: u64) -> Cnf {
    assert!(num_vars >= 3, "random_3cnf needs at least 3 variables");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..num_clauses)
        .map(|_| {
            let picks = sample(&mut rng, num_vars as usize, 3);
            let lits: Vec<Literal> = picks
                .iter()
                .map(|ix| Literal::new(Var::new(ix as u32 + 1), rng.gen_bool(0.5)))
                .collect();
            Clause::new(lits).unwrap()
        })
        .collect();
    Cnf::new(num_vars, clauses).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{oracle_count, oracle_eval, write_dimacs, Assignment};

    #[test]
    fn single_biconditional() {
        let cnf = chain_family(1, 0);
        assert_eq!(cnf.num_vars(), 2);
        let mut got: Vec<Vec<i64>> = cnf
            .clauses()
            .iter()
            .map(|c| c.literals().iter().map(|l| l.to_dimacs()).collect())
            .collect();
        got.sort();
        assert_eq!(got, vec![vec![-1, 2], vec![1, -2]]);
    }

    #[test]
    fn two_three_variable_chains() {
        // (x1 ↔ x3 ↔ x5) ∧ (x2 ↔ x4 ↔ x6), associative reading
        let cnf = chain_family(2, 1);
        assert_eq!(cnf.num_vars(), 6);
        for bits in 0..64u64 {
            let a = Assignment::from_bits(6, bits);
            let x = |k: u32| a.get(Var::new(k)).unwrap();
            let iff = |p: bool, q: bool| p == q;
            let expected = iff(iff(x(1), x(3)), x(5)) && iff(iff(x(2), x(4)), x(6));
            assert_eq!(oracle_eval(&cnf, &a).unwrap(), expected, "bits {bits:06b}");
        }
    }

    #[test]
    fn all_equal_reading() {
        let cnf = chain_family_with(2, 1, ChainSemantics::AllEqual);
        assert_eq!(oracle_count(&cnf).unwrap(), 4u32.into());
    }

    #[test]
    fn variable_count_formula() {
        for n in 1..5 {
            for j in 0..4 {
                assert_eq!(chain_family(n, j).num_vars(), (j + 2) * n);
            }
        }
    }

    #[test]
    fn chains_count_multiplicatively() {
        for j in 0..3 {
            let single = oracle_count(&chain_family(1, j)).unwrap();
            for n in 1..4 {
                assert_eq!(oracle_count(&chain_family(n, j)).unwrap(), single.pow(n));
            }
        }
    }

    #[test]
    fn random_generator_contract() {
        assert!(random_3cnf(20, 0, 7).clauses().is_empty());
        let cnf = random_3cnf(20, 40, 7);
        assert_eq!(cnf.clauses().len(), 40);
        assert!(cnf.clauses().iter().all(|c| c.len() == 3));
        assert_eq!(write_dimacs(&cnf), write_dimacs(&random_3cnf(20, 40, 7)));
        assert_ne!(write_dimacs(&cnf), write_dimacs(&random_3cnf(20, 40, 8)));
    }
}
