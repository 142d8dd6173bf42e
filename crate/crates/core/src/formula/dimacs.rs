use std::fmt::Write as _;

use super::{Clause, Cnf, FormulaError, Literal};

fn err(line: usize, msg: impl Into<String>) -> FormulaError {
    FormulaError::Dimacs {
        line,
        msg: msg.into(),
    }
}

/// Parses DIMACS CNF text.
///
/// Clauses may span lines; each ends at a `0`. Tautological clauses are
/// counted against the header and then dropped, since they constrain
/// nothing.
pub fn parse_dimacs(text: &str) -> Result<Cnf, FormulaError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut seen = 0usize;
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate problem line"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(err(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let vars = fields[2]
                .parse::<u32>()
                .map_err(|_| err(line_no, format!("bad variable count `{}`", fields[2])))?;
            let count = fields[3]
                .parse::<usize>()
                .map_err(|_| err(line_no, format!("bad clause count `{}`", fields[3])))?;
            header = Some((vars, count));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err(line_no, "clause before problem line"));
        };
        for tok in line.split_whitespace() {
            let code: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("non-integer token `{tok}`")))?;
            if pending.is_empty() {
                pending_line = line_no;
            }
            if code == 0 {
                seen += 1;
                match Clause::new(pending.drain(..)) {
                    Ok(c) => clauses.push(c),
                    Err(FormulaError::Tautology(_)) => {}
                    Err(e) => return Err(e),
                }
                continue;
            }
            if code.unsigned_abs() > u64::from(num_vars) {
                return Err(err(
                    line_no,
                    format!("literal {code} exceeds declared {num_vars} variables"),
                ));
            }
            pending.push(Literal::from_dimacs(code)?);
        }
    }

    let Some((num_vars, count)) = header else {
        return Err(err(0, "missing problem line"));
    };
    if !pending.is_empty() {
        return Err(err(pending_line, "clause not terminated by 0"));
    }
    if seen != count {
        return Err(err(0, format!("header declares {count} clauses, found {seen}")));
    }
    Cnf::new(num_vars, clauses)
}

/// Canonical printer: clauses sorted by first literal, literals ascending
/// by variable index.
pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut clauses: Vec<&Clause> = cnf.clauses().iter().collect();
    // ties on a variable put the negative literal first
    clauses.sort_by_key(|c| {
        c.literals()
            .iter()
            .map(|l| (l.var, l.positive))
            .collect::<Vec<_>>()
    });
    let mut out = format!("p cnf {} {}\n", cnf.num_vars(), clauses.len());
    for c in clauses {
        for lit in c.literals() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}
