//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary so the report is printed even when a criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kcdag::formula::{chain_family, oracle_eval, random_3cnf};
use kcdag::{
    Assignment, Bound, Clause, Cnf, DiagramStore, FinestStatus, Literal, Schedule, Var, VariableOrder, VertexId,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BOUNDS: [Bound; 5] = [Bound::Finite(0), Bound::Finite(1), Bound::Finite(2), Bound::Finite(3), Bound::Infinite];

struct Outcome {
    passed: bool,
    detail: String,
}

#[derive(Default)]
struct Validations {
    checked: usize,
    finest_checked: usize,
    failures: Vec<String>,
}

impl Validations {
    fn check(&mut self, s: &DiagramStore, u: VertexId, i: Bound, ctx: &str) {
        let report = s.validate(u, i);
        self.checked += 1;
        if report.decomposition_finest != FinestStatus::Skipped {
            self.finest_checked += 1;
        }
        let small = s.var_count(u) <= 12;
        let finest_ok = match report.decomposition_finest {
            FinestStatus::Passed => true,
            FinestStatus::Failed => false,
            FinestStatus::Skipped => !small,
        };
        if !report.structural_ok() || !finest_ok {
            self.failures.push(format!("{ctx} at bound {i}: {:?}", report.offending.first()));
        }
    }
}

struct Instance {
    cnf: Cnf,
    table: Vec<bool>,
}

fn corpus() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..200)
        .map(|k| {
            let m = rng.gen_range(10..=30);
            let cnf = random_3cnf(12, m, 1000 + k);
            let table = (0..1u64 << 12).map(|b| oracle_eval(&cnf, &Assignment::from_bits(12, b)).unwrap()).collect();
            Instance { cnf, table }
        })
        .collect()
}

fn all_vars(n: u32) -> Vec<Var> {
    (1..=n).map(Var::new).collect()
}

fn bits_match(bits: u64, omega: &Assignment) -> bool {
    omega.iter().all(|(v, b)| (bits >> (v.index() - 1) & 1 == 1) == b)
}

fn random_partial(rng: &mut ChaCha8Rng, n: u32, lo: usize, hi: usize) -> Assignment {
    let k = rng.gen_range(lo..=hi);
    rand::seq::index::sample(rng, n as usize, k)
        .into_iter()
        .map(|v| (Var::new(v as u32 + 1), rng.gen_bool(0.5)))
        .collect()
}

fn canonicity(corpus: &[Instance], val: &mut Validations) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for (k, inst) in corpus.iter().enumerate() {
        let m = inst.cnf.clauses().len();
        let perms: Vec<Vec<usize>> = (0..3)
            .map(|_| {
                let mut p: Vec<usize> = (0..m).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let mut s = DiagramStore::new(VariableOrder::natural(12));
        for i in BOUNDS {
            let mut ids = Vec::new();
            for (n, p) in perms.iter().enumerate() {
                let schedule = if n == 0 { Schedule::Sequential } else { Schedule::Balanced };
                ids.push(s.compile(&inst.cnf.permuted(p), i, schedule));
            }
            ids.push(s.compile_via(&inst.cnf, i));
            if ids.iter().any(|&id| id != ids[0]) {
                mismatches += 1;
            }
            val.check(&s, ids[0], i, &format!("criterion 1 instance {k}"));
        }
    }
    Outcome {
        passed: mismatches == 0,
        detail: format!("{mismatches} mismatches over {} (instance, bound) pairs", corpus.len() * BOUNDS.len()),
    }
}

fn oracle_equivalence(corpus: &[Instance], val: &mut Validations) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let vars = all_vars(12);
    let mut mismatches = Vec::new();
    let mut checks = 0usize;
    for (k, inst) in corpus.iter().enumerate() {
        let models: Vec<u64> = (0..1u64 << 12).filter(|&b| inst.table[b as usize]).collect();
        let clauses: Vec<Clause> = (0..10)
            .map(|_| random_partial(&mut rng, 12, 1, 3))
            .map(|a| Clause::new(a.iter().map(|(v, b)| Literal::new(v, b))).unwrap())
            .collect();
        let terms: Vec<Assignment> = (0..10).map(|_| random_partial(&mut rng, 12, 1, 6)).collect();
        let omegas: Vec<Assignment> = (0..3).map(|_| random_partial(&mut rng, 12, 1, 5)).collect();
        let mut s = DiagramStore::new(VariableOrder::natural(12));
        for i in BOUNDS {
            let u = s.compile(&inst.cnf, i, Schedule::Balanced);
            let mut fail = |what: &str| mismatches.push(format!("instance {k} bound {i}: {what}"));
            checks += 3;
            if s.model_count(u, &vars).unwrap() != models.len() as u64 {
                fail("model count");
            }
            if s.is_consistent(u) != !models.is_empty() {
                fail("consistency");
            }
            if s.is_valid(u) != (models.len() == 1 << 12) {
                fail("validity");
            }
            for c in &clauses {
                checks += 1;
                let expected = models
                    .iter()
                    .all(|&b| c.literals().iter().any(|l| l.satisfied_by(b >> (l.var.index() - 1) & 1 == 1)));
                if s.entails_clause(u, c) != expected {
                    fail("clause entailment");
                }
            }
            for t in &terms {
                checks += 1;
                let expected = (0..1u64 << 12).filter(|&b| bits_match(b, t)).all(|b| inst.table[b as usize]);
                if s.implied_by_term(u, t) != expected {
                    fail("term implication");
                }
            }
            for omega in &omegas {
                checks += 1;
                let c = s.condition(u, omega, i);
                val.check(&s, c, i, &format!("criterion 2 conditioning instance {k}"));
                let ok = (0..1u64 << 12).all(|b| {
                    let mut fixed = b;
                    for (v, val) in omega.iter() {
                        let bit = 1u64 << (v.index() - 1);
                        fixed = if val { fixed | bit } else { fixed & !bit };
                    }
                    s.eval(c, &Assignment::from_bits(12, b)) == inst.table[fixed as usize]
                }) && omega.iter().all(|(v, _)| !s.mentions(c, v));
                if !ok {
                    fail("conditioning");
                }
            }
        }
    }
    Outcome {
        passed: mismatches.is_empty(),
        detail: match mismatches.first() {
            None => format!("0 mismatches over {checks} checks"),
            Some(first) => format!("{} mismatches over {checks} checks, first: {first}", mismatches.len()),
        },
    }
}

fn succinctness(val: &mut Validations) -> Outcome {
    let mut zero = Vec::new();
    let mut inf = Vec::new();
    for n in 2..=9u32 {
        let cnf = chain_family(n, 0);
        let mut s = DiagramStore::new(VariableOrder::natural(cnf.num_vars()));
        let a = s.compile(&cnf, Bound::Finite(0), Schedule::Balanced);
        let b = s.compile(&cnf, Bound::Infinite, Schedule::Balanced);
        val.check(&s, a, Bound::Finite(0), &format!("criterion 3 n={n}"));
        val.check(&s, b, Bound::Infinite, &format!("criterion 3 n={n}"));
        zero.push(s.vertex_count(a));
        inf.push(s.vertex_count(b));
    }
    // zero[k] holds n = k + 2
    let doubling = (2..zero.len()).all(|k| zero[k] >= 2 * zero[k - 1]);
    let diffs: Vec<isize> = inf.windows(2).map(|w| w[1] as isize - w[0] as isize).collect();
    let linear = diffs.iter().all(|&d| d == diffs[0]);
    Outcome {
        passed: doubling && linear,
        detail: format!("bound 0 vertices {zero:?}; bound inf vertices {inf:?}"),
    }
}

fn size_trend(val: &mut Validations) -> Outcome {
    let groups = [20usize, 40, 60, 80];
    let mut lines = Vec::new();
    let mut ok = true;
    for (g, &m) in groups.iter().enumerate() {
        let mut sums = [0usize; 6];
        for k in 0..25u64 {
            let cnf = random_3cnf(20, m, 5000 + 100 * g as u64 + k);
            let mut s = DiagramStore::new(VariableOrder::natural(20));
            let top = s.compile(&cnf, Bound::Infinite, Schedule::Balanced);
            for (i, sum) in sums.iter_mut().enumerate() {
                let u = s.convert_down(top, Bound::Finite(i as u32));
                val.check(&s, u, Bound::Finite(i as u32), &format!("criterion 4 m={m} k={k}"));
                *sum += s.vertex_count(u);
            }
        }
        let means: Vec<f64> = sums.iter().map(|&t| t as f64 / 25.0).collect();
        if means.windows(2).any(|w| w[0] < w[1]) {
            ok = false;
        }
        lines.push(format!("m={m}: {}", means.iter().map(|x| format!("{x:.1}")).collect::<Vec<_>>().join(" ")));
    }
    Outcome { passed: ok, detail: format!("mean vertices for i=0..5; {}", lines.join("; ")) }
}

// Runs alternate between the two bounds so drift in machine load hits
// both equally; each side keeps its best time.
fn timed_pair(cnf: &Cnf) -> (Duration, Duration, DiagramStore, VertexId) {
    let mut best = [Duration::MAX; 2];
    let mut last = None;
    for _ in 0..5 {
        for (slot, i) in [0u32, 1].into_iter().enumerate() {
            let mut s = DiagramStore::new(VariableOrder::natural(cnf.num_vars()));
            let start = Instant::now();
            let u = s.compile(cnf, Bound::Finite(i), Schedule::Sequential);
            best[slot] = best[slot].min(start.elapsed());
            if i == 1 {
                last = Some((s, u));
            }
        }
    }
    let (s, u) = last.expect("five runs");
    (best[0], best[1], s, u)
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2
    }
}

fn rapidity(val: &mut Validations) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut t0s, mut t1s) = (Vec::new(), Vec::new());
    let mut unequal = 0;
    let mut faster = 0;
    for k in 0..100u64 {
        let m = rng.gen_range(10..=100);
        let cnf = random_3cnf(20, m, 9000 + k);
        let (t0, t1, mut s, u1) = timed_pair(&cnf);
        let lowered = s.convert_down(u1, Bound::Finite(0));
        let direct = s.compile(&cnf, Bound::Finite(0), Schedule::Balanced);
        val.check(&s, u1, Bound::Finite(1), &format!("criterion 5 k={k}"));
        val.check(&s, direct, Bound::Finite(0), &format!("criterion 5 k={k}"));
        if lowered != direct {
            unequal += 1;
        }
        if t1 <= t0 {
            faster += 1;
        }
        t0s.push(t0);
        t1s.push(t1);
    }
    let (m0, m1) = (median(t0s), median(t1s));
    Outcome {
        passed: m1 <= m0 && unequal == 0,
        detail: format!(
            "median bound 0 {:.3} ms, bound 1 {:.3} ms; bound 1 no slower on {faster}/100; {unequal} inequivalent",
            m0.as_secs_f64() * 1e3,
            m1.as_secs_f64() * 1e3
        ),
    }
}

fn convert_agreement(corpus: &[Instance], val: &mut Validations) -> Outcome {
    let mut mismatches = 0;
    let mut checks = 0;
    for (k, inst) in corpus.iter().enumerate() {
        let mut s = DiagramStore::new(VariableOrder::natural(12));
        let direct: Vec<VertexId> = BOUNDS.iter().map(|&i| s.compile(&inst.cnf, i, Schedule::Balanced)).collect();
        for jx in 0..BOUNDS.len() {
            for (ix, &i) in BOUNDS[..=jx].iter().enumerate() {
                checks += 1;
                let down = s.convert_down(direct[jx], i);
                val.check(&s, down, i, &format!("criterion 6 instance {k}"));
                if down != direct[ix] {
                    mismatches += 1;
                }
                for &mid in &BOUNDS[ix..=jx] {
                    checks += 1;
                    let step = s.convert_down(direct[jx], mid);
                    if s.convert_down(step, i) != down {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    Outcome { passed: mismatches == 0, detail: format!("{mismatches} mismatches over {checks} checks") }
}

fn algebra(val: &mut Validations) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for trial in 0..1000u64 {
        let n = rng.gen_range(6..=10);
        let i = BOUNDS[rng.gen_range(0..BOUNDS.len())];
        let mut s = DiagramStore::new(VariableOrder::natural(n));
        let cu = random_3cnf(n, rng.gen_range(2..=12), 20_000 + 2 * trial);
        let cv = random_3cnf(n, rng.gen_range(2..=12), 20_001 + 2 * trial);
        let u = s.compile(&cu, i, Schedule::Balanced);
        let v = s.compile(&cv, i, Schedule::Balanced);
        let omega = random_partial(&mut rng, n, 1, 4);
        let mut law = |name: &str, ok: bool| {
            if !ok {
                failures.push(format!("trial {trial} bound {i}: {name}"));
            }
        };

        let uv = s.conjoin(u, v, i);
        let nuv = s.negate(uv, i);
        let (nu, nv) = (s.negate(u, i), s.negate(v, i));
        let dm = s.disjoin(nu, nv, i);
        law("de morgan", nuv == dm);
        let nnu = s.negate(nu, i);
        law("involution", nnu == u);
        law("conjoin neutral", s.conjoin(u, VertexId::TRUE, i) == u);
        law("disjoin neutral", s.disjoin(u, VertexId::FALSE, i) == u);
        law("conjoin absorbing", s.conjoin(u, VertexId::FALSE, i) == VertexId::FALSE);
        law("disjoin absorbing", s.disjoin(u, VertexId::TRUE, i) == VertexId::TRUE);
        law("excluded middle", s.disjoin(u, nu, i) == VertexId::TRUE);
        law("contradiction", s.conjoin(u, nu, i) == VertexId::FALSE);
        law("conjoin commutes", s.conjoin(v, u, i) == uv);
        let cond_uv = s.condition(uv, &omega, i);
        let cu_ = s.condition(u, &omega, i);
        let cv_ = s.condition(v, &omega, i);
        let joined = s.conjoin(cu_, cv_, i);
        law("conditioning distributes", cond_uv == joined);
        let vars = s.vars_of(u);
        let f = s.forget(u, &vars, i);
        law("forget all", (f == VertexId::TRUE) == s.is_consistent(u) && (f == VertexId::FALSE) != s.is_consistent(u));

        for (w, what) in [(uv, "conjoin"), (nuv, "negate"), (dm, "disjoin"), (cond_uv, "condition"), (joined, "conjoin")] {
            val.check(&s, w, i, &format!("criterion 7 trial {trial} {what}"));
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: match failures.first() {
            None => "0 failures over 1000 trials".to_string(),
            Some(first) => format!("{} failures, first: {first}", failures.len()),
        },
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let corpus = corpus();
    let mut val = Validations::default();
    let mut all = true;
    let mut report = |n: u32, name: &str, outcome: Outcome, t: Instant| {
        all &= outcome.passed;
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {n} ({name}): {} [{:.1}s]", outcome.detail, t.elapsed().as_secs_f64());
    };

    let t = Instant::now();
    let o = canonicity(&corpus, &mut val);
    report(1, "canonicity", o, t);
    let t = Instant::now();
    let o = oracle_equivalence(&corpus, &mut val);
    report(2, "oracle equivalence", o, t);
    let t = Instant::now();
    let o = succinctness(&mut val);
    report(3, "succinctness separation", o, t);
    let t = Instant::now();
    let o = size_trend(&mut val);
    report(4, "size versus bound", o, t);
    let t = Instant::now();
    let o = rapidity(&mut val);
    report(5, "conjoin rapidity", o, t);
    let t = Instant::now();
    let o = convert_agreement(&corpus, &mut val);
    report(6, "convert down", o, t);
    let t = Instant::now();
    let o = algebra(&mut val);
    report(7, "algebraic laws", o, t);
    let o = Outcome {
        passed: val.failures.is_empty(),
        detail: format!(
            "{} diagrams validated, {} with the finest check, {} failures{}",
            val.checked,
            val.finest_checked,
            val.failures.len(),
            val.failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    };
    report(8, "structural validation", o, started);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
