use kcdag::formula::{oracle_count, oracle_eval, random_3cnf};
use kcdag::{Assignment, Bound, Cnf, DiagramStore, FinestStatus, Schedule, VariableOrder};

const BOUNDS: [Bound; 5] = [Bound::Finite(0), Bound::Finite(1), Bound::Finite(2), Bound::Finite(3), Bound::Infinite];

fn agrees_pointwise(s: &DiagramStore, u: kcdag::VertexId, cnf: &Cnf) -> bool {
    let n = cnf.num_vars();
    (0..1u64 << n).all(|bits| {
        let a = Assignment::from_bits(n, bits);
        s.eval(u, &a) == oracle_eval(cnf, &a).unwrap()
    })
}

#[test]
fn compiled_diagrams_match_truth_tables() {
    for seed in 0..40 {
        let cnf = random_3cnf(8, 4 + (seed as usize % 20), seed);
        let mut s = DiagramStore::new(VariableOrder::natural(8));
        let vars: Vec<_> = cnf.vars().collect();
        let expected = oracle_count(&cnf).unwrap();
        for i in BOUNDS {
            let u = s.compile(&cnf, i, Schedule::Sequential);
            assert!(agrees_pointwise(&s, u, &cnf), "seed {seed} bound {i}");
            assert_eq!(s.model_count(u, &vars).unwrap(), expected, "seed {seed} bound {i}");
            let report = s.validate(u, i);
            assert!(report.all_ok(), "seed {seed} bound {i}: {report:?}");
            assert_eq!(report.decomposition_finest, FinestStatus::Passed);
        }
    }
}

#[test]
fn permuted_clauses_give_the_same_vertex() {
    for seed in 0..30 {
        let cnf = random_3cnf(10, 10 + seed as usize, 100 + seed);
        let m = cnf.clauses().len();
        let reversed: Vec<usize> = (0..m).rev().collect();
        let rotated: Vec<usize> = (0..m).map(|k| (k + 3) % m).collect();
        let mut s = DiagramStore::new(VariableOrder::natural(10));
        for i in BOUNDS {
            let a = s.compile(&cnf, i, Schedule::Balanced);
            assert_eq!(s.compile(&cnf.permuted(&reversed), i, Schedule::Sequential), a);
            assert_eq!(s.compile(&cnf.permuted(&rotated), i, Schedule::Balanced), a);
            assert_eq!(s.compile_via(&cnf, i), a, "seed {seed} bound {i}");
        }
    }
}

#[test]
fn custom_order_round_trip() {
    let cnf = random_3cnf(9, 18, 7);
    let order = kcdag::formula::min_fill_order(&cnf);
    let mut s = DiagramStore::new(order);
    for i in BOUNDS {
        let u = s.compile(&cnf, i, Schedule::Balanced);
        assert!(agrees_pointwise(&s, u, &cnf));
        assert!(s.validate(u, i).all_ok());
        let text = s.serialize(u, i);
        assert_eq!(s.read_into(&text).unwrap(), (u, i));
    }
}
