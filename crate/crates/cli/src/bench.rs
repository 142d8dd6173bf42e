use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use clap::Subcommand;

use kcdag::formula::random_3cnf;
use kcdag::{Bound, Cnf, DiagramStore, Schedule, VariableOrder, VertexId};

#[derive(Subcommand)]
pub enum BenchCommand {
    /// Diagram size at each bound over random 3-CNFs.
    /// CSV: instance,bound,vertices,edges,ms
    SizeSweep {
        #[arg(long, default_value_t = 20)]
        vars: u32,
        #[arg(long, value_delimiter = ',', default_value = "20,40,60,80")]
        clauses: Vec<usize>,
        /// Instances per clause count.
        #[arg(long, default_value_t = 25)]
        instances: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,inf")]
        bounds: Vec<Bound>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bottom-up compile time at bounds 0 and 1 on the same instances.
    /// CSV: instance,clauses,ms_bound0,ms_bound1,vertices_bound0,vertices_bound1
    ConjoinCompare {
        #[arg(long, default_value_t = 20)]
        vars: u32,
        #[arg(long, default_value_t = 10)]
        min_clauses: usize,
        #[arg(long, default_value_t = 100)]
        max_clauses: usize,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Timed runs per instance and bound; the best is reported.
        #[arg(long, default_value_t = 3)]
        repeat: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn timed(cnf: &Cnf, i: Bound, schedule: Schedule) -> (Duration, DiagramStore, VertexId) {
    let mut store = DiagramStore::new(VariableOrder::natural(cnf.num_vars()));
    let start = Instant::now();
    let root = store.compile(cnf, i, schedule);
    (start.elapsed(), store, root)
}

fn ms(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

pub fn run(cmd: BenchCommand) -> Result<()> {
    match cmd {
        BenchCommand::SizeSweep { vars, clauses, instances, bounds, seed } => {
            if vars < 3 {
                bail!("--vars must be at least 3");
            }
            println!("instance,bound,vertices,edges,ms");
            let mut serial = 0u64;
            for &m in &clauses {
                for k in 0..instances {
                    let cnf = random_3cnf(vars, m, seed + serial);
                    serial += 1;
                    for &i in &bounds {
                        let (t, store, root) = timed(&cnf, i, Schedule::Balanced);
                        println!("m{m}-{k},{i},{},{},{}", store.vertex_count(root), store.size(root), ms(t));
                    }
                }
            }
        }
        BenchCommand::ConjoinCompare { vars, min_clauses, max_clauses, instances, repeat, seed } => {
            if vars < 3 {
                bail!("--vars must be at least 3");
            }
            if min_clauses > max_clauses {
                bail!("--min-clauses exceeds --max-clauses");
            }
            println!("instance,clauses,ms_bound0,ms_bound1,vertices_bound0,vertices_bound1");
            let span = max_clauses - min_clauses;
            for k in 0..instances {
                let m = min_clauses + if instances > 1 { k * span / (instances - 1) } else { 0 };
                let cnf = random_3cnf(vars, m, seed + k as u64);
                let mut best = [Duration::MAX; 2];
                let mut sizes = [0; 2];
                // alternate bounds so load drift affects both alike
                for _ in 0..repeat.max(1) {
                    for (slot, i) in [Bound::Finite(0), Bound::Finite(1)].into_iter().enumerate() {
                        let (t, store, root) = timed(&cnf, i, Schedule::Sequential);
                        best[slot] = best[slot].min(t);
                        sizes[slot] = store.vertex_count(root);
                    }
                }
                println!("{k},{m},{},{},{},{}", ms(best[0]), ms(best[1]), sizes[0], sizes[1]);
            }
        }
    }
    Ok(())
}
