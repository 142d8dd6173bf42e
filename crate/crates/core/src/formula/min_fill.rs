use std::collections::BTreeSet;

use super::{Cnf, Var, VariableOrder};

/// Greedy min-fill elimination on the primal graph. Ties go to the lowest
/// variable index; variables that occur in no clause come last.
pub fn min_fill_order(cnf: &Cnf) -> VariableOrder {
    let n = cnf.num_vars() as usize;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut occurs = vec![false; n];
    for clause in cnf.clauses() {
        let vs: Vec<usize> = clause.literals().iter().map(|l| l.var.index() as usize - 1).collect();
        for (a, &u) in vs.iter().enumerate() {
            occurs[u] = true;
            for &w in &vs[a + 1..] {
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
    }

    let mut alive: BTreeSet<usize> = (0..n).filter(|&v| occurs[v]).collect();
    let mut sequence = Vec::with_capacity(n);
    while !alive.is_empty() {
        let (_, pick) = alive
            .iter()
            .map(|&v| (fill_in(&adj, v), v))
            .min()
            .expect("alive is non-empty");
        let nbrs: Vec<usize> = adj[pick].iter().copied().collect();
        for (a, &u) in nbrs.iter().enumerate() {
            adj[u].remove(&pick);
            for &w in &nbrs[a + 1..] {
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
        adj[pick].clear();
        alive.remove(&pick);
        sequence.push(Var::new(pick as u32 + 1));
    }
    sequence.extend((0..n).filter(|&v| !occurs[v]).map(|v| Var::new(v as u32 + 1)));
    VariableOrder::from_sequence(sequence).expect("elimination visits every variable once")
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (a, &u) in nbrs.iter().enumerate() {
        missing += nbrs[a + 1..].iter().filter(|w| !adj[u].contains(w)).count();
    }
    missing
}
