//! `kcdag`: compile CNF into canonical decision diagrams with bounded
//! conjunctive decomposition, then transform, query and export them.

mod bench;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kcdag::formula::{chain_family_with, min_fill_order, random_3cnf, write_dimacs, ChainSemantics};
use kcdag::{Bound, DiagramStore, FinestStatus, Schedule, Var, VariableOrder, Vertex};

use crate::io::{parse_literals, parse_term, parse_vars, read_cnf, Loaded};

#[derive(Parser)]
#[command(name = "kcdag", version, about = "Canonical decision diagrams with bounded conjunctive decomposition")]
struct Cli {
    /// Print plain text instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a DIMACS CNF (from --cnf or stdin).
    Compile(CompileArgs),
    /// Lower a diagram to a smaller bound.
    Convert(Transform),
    /// Decompose a diagram at a larger bound.
    Decompose(Transform),
    /// Answer a query about one or two diagrams.
    Query(QueryArgs),
    /// Count models over variables 1..=scope.
    Count(CountArgs),
    /// List models over variables 1..=scope.
    Enumerate(EnumerateArgs),
    /// Conjoin, disjoin or negate diagrams.
    Apply(ApplyArgs),
    /// Condition on a partial assignment.
    Condition(ConditionArgs),
    /// Existentially quantify variables away.
    Forget(ForgetArgs),
    /// Check the structural and decomposition invariants; exits 1 on failure.
    Validate(ValidateArgs),
    /// Summarize a diagram.
    Stats(InArg),
    /// Export Graphviz DOT.
    Dot(DotArgs),
    /// Print a generated CNF in DIMACS.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run experiments and print CSV.
    #[command(subcommand)]
    Bench(bench::BenchCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderKind {
    Natural,
    MinFill,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleKind {
    Sequential,
    Balanced,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    cnf: Option<PathBuf>,
    #[arg(long, default_value = "inf")]
    bound: Bound,
    #[arg(long, value_enum, default_value = "natural")]
    order: OrderKind,
    #[arg(long, value_enum, default_value = "balanced")]
    schedule: ScheduleKind,
    /// Write the diagram here in kdag format.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InArg {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct Transform {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    bound: Bound,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum QueryKind {
    /// Consistency.
    Co,
    /// Validity.
    Va,
    /// Clausal entailment; needs --clause.
    Ce,
    /// Implicant check; needs --term.
    Im,
    /// Equivalence; needs --with.
    Eq,
    /// Sentential entailment of --with; needs --with.
    Se,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(value_enum)]
    kind: QueryKind,
    #[arg(long = "in")]
    input: PathBuf,
    /// Second diagram for eq and se.
    #[arg(long)]
    with: Option<PathBuf>,
    /// DIMACS literals, e.g. `1,-3`.
    #[arg(long, allow_hyphen_values = true)]
    clause: Option<String>,
    /// Literals such as `x1=true,x3=false` or `1,-3`.
    #[arg(long, allow_hyphen_values = true)]
    term: Option<String>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Defaults to every variable of the file's order.
    #[arg(long)]
    scope: Option<u32>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    scope: Option<u32>,
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApplyOp {
    And,
    Or,
    Not,
}

#[derive(Args)]
struct ApplyArgs {
    #[arg(value_enum)]
    op: ApplyOp,
    #[arg(long = "in")]
    input: PathBuf,
    /// Second operand for and/or.
    #[arg(long)]
    with: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConditionArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// e.g. `x1=true,x2=false`.
    #[arg(long, allow_hyphen_values = true)]
    set: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ForgetArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// e.g. `1,3` or `x1,x3`.
    #[arg(long)]
    vars: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Defaults to the bound recorded in the file.
    #[arg(long)]
    bound: Option<Bound>,
}

#[derive(Args)]
struct DotArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// `n` chains over `j + 2` variables each.
    Chain {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        j: u32,
        /// Pairwise biconditionals instead of parity.
        #[arg(long)]
        all_equal: bool,
    },
    /// Uniform random 3-CNF.
    Random {
        #[arg(long)]
        vars: u32,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, cli.plain) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Prints `value` as JSON, or as `key=value` lines under --plain.
fn emit(value: Value, plain: bool) {
    if !plain {
        println!("{value}");
        return;
    }
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::String(s) => println!("{k}={s}"),
                    other => println!("{k}={other}"),
                }
            }
        }
        other => println!("{other}"),
    }
}

fn summary(store: &DiagramStore, root: kcdag::VertexId, bound: Bound) -> Value {
    json!({
        "bound": bound.to_string(),
        "vertices": store.vertex_count(root),
        "edges": store.size(root),
    })
}

fn finish(loaded: &Loaded, root: kcdag::VertexId, bound: Bound, out: Option<&PathBuf>, plain: bool) -> Result<()> {
    if let Some(path) = out {
        io::write_file(path, &loaded.store.serialize(root, bound))?;
    }
    emit(summary(&loaded.store, root, bound), plain);
    Ok(())
}

fn scope_vars(store: &DiagramStore, scope: Option<u32>) -> Vec<Var> {
    match scope {
        Some(n) => (1..=n).map(Var::new).collect(),
        None => {
            let mut vars = store.order().sequence().to_vec();
            vars.sort();
            vars
        }
    }
}

fn run(command: Command, plain: bool) -> Result<()> {
    match command {
        Command::Compile(args) => {
            let cnf = read_cnf(args.cnf.as_deref())?;
            let order = match args.order {
                OrderKind::Natural => VariableOrder::natural(cnf.num_vars()),
                OrderKind::MinFill => min_fill_order(&cnf),
            };
            let schedule = match args.schedule {
                ScheduleKind::Sequential => Schedule::Sequential,
                ScheduleKind::Balanced => Schedule::Balanced,
            };
            let mut store = DiagramStore::new(order);
            let start = Instant::now();
            let root = store.compile(&cnf, args.bound, schedule);
            let ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
            if let Some(path) = &args.out {
                io::write_file(path, &store.serialize(root, args.bound))?;
            }
            let mut value = summary(&store, root, args.bound);
            value["ms"] = json!(ms);
            emit(value, plain);
        }
        Command::Convert(args) => {
            let mut loaded = Loaded::open(&args.input)?;
            if args.bound > loaded.bound {
                bail!("cannot convert from bound {} up to {}; use decompose", loaded.bound, args.bound);
            }
            let root = loaded.store.convert_down(loaded.root, args.bound);
            finish(&loaded, root, args.bound, args.out.as_ref(), plain)?;
        }
        Command::Decompose(args) => {
            let mut loaded = Loaded::open(&args.input)?;
            let root = loaded.store.decompose(loaded.root, args.bound)?;
            finish(&loaded, root, args.bound, args.out.as_ref(), plain)?;
        }
        Command::Query(args) => query(args, plain)?,
        Command::Count(args) => {
            let loaded = Loaded::open(&args.input)?;
            let scope = scope_vars(&loaded.store, args.scope);
            let count = loaded.store.model_count(loaded.root, &scope)?;
            emit(json!({ "models": count.to_string() }), plain);
        }
        Command::Enumerate(args) => {
            let loaded = Loaded::open(&args.input)?;
            let scope = scope_vars(&loaded.store, args.scope);
            let stream = loaded.store.enumerate_models(loaded.root, &scope)?;
            let limit = args.limit.unwrap_or(usize::MAX);
            let mut models = Vec::new();
            let mut truncated = false;
            for (k, model) in stream.enumerate() {
                if k == limit {
                    truncated = true;
                    break;
                }
                let mut lits: Vec<i64> =
                    model.iter().map(|(v, b)| kcdag::Literal::new(v, b).to_dimacs()).collect();
                lits.sort_by_key(|l| l.abs());
                models.push(lits);
            }
            if plain {
                for m in &models {
                    println!("{}", m.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
                }
            } else {
                println!("{}", json!({ "models": models, "truncated": truncated }));
            }
        }
        Command::Apply(args) => {
            let mut loaded = Loaded::open(&args.input)?;
            let i = loaded.bound;
            let root = match args.op {
                ApplyOp::Not => loaded.store.negate(loaded.root, i),
                ApplyOp::And | ApplyOp::Or => {
                    let other = args.with.as_ref().context("and/or need --with")?;
                    let v = loaded.load_other(other)?;
                    if matches!(args.op, ApplyOp::And) {
                        loaded.store.conjoin(loaded.root, v, i)
                    } else {
                        loaded.store.disjoin(loaded.root, v, i)
                    }
                }
            };
            finish(&loaded, root, i, args.out.as_ref(), plain)?;
        }
        Command::Condition(args) => {
            let mut loaded = Loaded::open(&args.input)?;
            let omega = parse_term(&args.set)?;
            let root = loaded.store.condition(loaded.root, &omega, loaded.bound);
            finish(&loaded, root, loaded.bound, args.out.as_ref(), plain)?;
        }
        Command::Forget(args) => {
            let mut loaded = Loaded::open(&args.input)?;
            let vars = parse_vars(&args.vars)?;
            let root = loaded.store.forget(loaded.root, &vars, loaded.bound);
            finish(&loaded, root, loaded.bound, args.out.as_ref(), plain)?;
        }
        Command::Validate(args) => {
            let loaded = Loaded::open(&args.input)?;
            let bound = args.bound.unwrap_or(loaded.bound);
            let report = loaded.store.validate(loaded.root, bound);
            let finest = match report.decomposition_finest {
                FinestStatus::Passed => "passed",
                FinestStatus::Failed => "failed",
                FinestStatus::Skipped => "skipped",
            };
            let offending: Vec<String> = report.offending.iter().map(ToString::to_string).collect();
            emit(
                json!({
                    "ok": report.all_ok(),
                    "ordered": report.ordered_ok,
                    "reduced": report.reduced_ok,
                    "bounded": report.bounded_ok,
                    "finest": finest,
                    "offending": offending,
                }),
                plain,
            );
            if !report.all_ok() {
                bail!("diagram is not canonical at bound {bound}");
            }
        }
        Command::Stats(args) => {
            let loaded = Loaded::open(&args.input)?;
            let store = &loaded.store;
            let reachable = store.reachable(loaded.root);
            let conj = reachable.iter().filter(|&&id| matches!(store.vertex(id), Vertex::Conj(_))).count();
            let decision = reachable.iter().filter(|&&id| matches!(store.vertex(id), Vertex::Decision { .. })).count();
            let mut value = summary(store, loaded.root, loaded.bound);
            value["decision_vertices"] = json!(decision);
            value["conj_vertices"] = json!(conj);
            value["vars"] = json!(store.var_count(loaded.root));
            value["order_len"] = json!(store.num_vars());
            emit(value, plain);
        }
        Command::Dot(args) => {
            let loaded = Loaded::open(&args.input)?;
            let dot = loaded.store.export_dot(loaded.root);
            match &args.out {
                Some(path) => io::write_file(path, &dot)?,
                None => print!("{dot}"),
            }
        }
        Command::Gen(GenCommand::Chain { n, j, all_equal }) => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let semantics = if all_equal { ChainSemantics::AllEqual } else { ChainSemantics::Parity };
            print!("{}", write_dimacs(&chain_family_with(n, j, semantics)));
        }
        Command::Gen(GenCommand::Random { vars, clauses, seed }) => {
            if vars < 3 {
                bail!("--vars must be at least 3");
            }
            print!("{}", write_dimacs(&random_3cnf(vars, clauses, seed)));
        }
        Command::Bench(cmd) => bench::run(cmd)?,
    }
    Ok(())
}

fn query(args: QueryArgs, plain: bool) -> Result<()> {
    let mut loaded = Loaded::open(&args.input)?;
    let (u, i) = (loaded.root, loaded.bound);
    let (name, result) = match args.kind {
        QueryKind::Co => ("co", loaded.store.is_consistent(u)),
        QueryKind::Va => ("va", loaded.store.is_valid(u)),
        QueryKind::Ce => {
            let text = args.clause.as_deref().context("ce needs --clause")?;
            let lits = parse_literals(text)?;
            let result = match kcdag::Clause::new(lits) {
                Ok(clause) => loaded.store.entails_clause(u, &clause),
                Err(kcdag::FormulaError::Tautology(_)) => true,
                Err(e) => return Err(e.into()),
            };
            ("ce", result)
        }
        QueryKind::Im => {
            let text = args.term.as_deref().context("im needs --term")?;
            ("im", loaded.store.implied_by_term(u, &parse_term(text)?))
        }
        QueryKind::Eq | QueryKind::Se => {
            let other = args.with.as_ref().context("eq and se need --with")?;
            let v = loaded.load_other(other)?;
            if matches!(args.kind, QueryKind::Eq) {
                ("eq", loaded.store.equivalent(u, v))
            } else {
                ("se", loaded.store.entails(u, v, i))
            }
        }
    };
    emit(json!({ "query": name, "result": result }), plain);
    Ok(())
}
