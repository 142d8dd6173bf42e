use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};

use kcdag::formula::parse_dimacs;
use kcdag::{Assignment, Bound, Cnf, DiagramStore, Literal, Var, VertexId};

/// A diagram read from a kdag file, with the store that owns it.
pub struct Loaded {
    pub store: DiagramStore,
    pub root: VertexId,
    pub bound: Bound,
}

impl Loaded {
    pub fn open(path: &Path) -> Result<Self> {
        let text = read_file(path)?;
        let (store, root, bound) =
            DiagramStore::deserialize(&text).with_context(|| format!("reading {}", path.display()))?;
        Ok(Loaded { store, root, bound })
    }

    /// Reads a second diagram into the same store. Both files must share a
    /// variable order and a bound.
    pub fn load_other(&mut self, path: &Path) -> Result<VertexId> {
        let text = read_file(path)?;
        let (root, bound) = self.store.read_into(&text).with_context(|| format!("reading {}", path.display()))?;
        if bound != self.bound {
            bail!("operands are at different bounds ({} and {bound})", self.bound);
        }
        Ok(root)
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// DIMACS from `path`, or from stdin when no path is given.
pub fn read_cnf(path: Option<&Path>) -> Result<Cnf> {
    let text = match path {
        Some(p) => read_file(p)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).context("cannot read stdin")?;
            buf
        }
    };
    Ok(parse_dimacs(&text)?)
}

fn parse_var(token: &str) -> Result<Var> {
    let digits = token.strip_prefix('x').unwrap_or(token);
    let index: u32 = digits.parse().with_context(|| format!("bad variable `{token}`"))?;
    Ok(Var::try_new(index)?)
}

fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// `1,-3` or `x1,-x3`.
pub fn parse_literals(text: &str) -> Result<Vec<Literal>> {
    tokens(text)
        .map(|t| {
            let (positive, rest) = match t.strip_prefix('-') {
                Some(rest) => (false, rest),
                None => (true, t),
            };
            Ok(Literal::new(parse_var(rest)?, positive))
        })
        .collect()
}

/// `x1=true,x2=false`, or signed literals as in [`parse_literals`].
pub fn parse_term(text: &str) -> Result<Assignment> {
    let mut omega = Assignment::new();
    for t in tokens(text) {
        let (var, value) = match t.split_once('=') {
            Some((v, b)) => {
                let value = match b.trim() {
                    "true" | "1" => true,
                    "false" | "0" => false,
                    other => bail!("bad value `{other}` for {v}"),
                };
                (parse_var(v.trim())?, value)
            }
            None => {
                let lit = parse_literals(t)?[0];
                (lit.var, lit.positive)
            }
        };
        omega.bind(var, value)?;
    }
    Ok(omega)
}

pub fn parse_vars(text: &str) -> Result<Vec<Var>> {
    tokens(text).map(parse_var).collect()
}
