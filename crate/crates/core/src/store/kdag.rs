use std::fmt::Write;

use thiserror::Error;

use super::{Bound, DiagramStore, StoreError, Vertex, VertexId};
use crate::formula::{Var, VariableOrder};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KdagError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: child {child} does not refer to an earlier vertex")]
    Dangling { line: usize, child: usize },
    #[error("line {line}: {source}")]
    Store { line: usize, source: StoreError },
    #[error("file order differs from the store order")]
    OrderMismatch,
}

fn malformed(line: usize, msg: impl Into<String>) -> KdagError {
    KdagError::Malformed { line, msg: msg.into() }
}

impl DiagramStore {
    /// Writes the diagram under `root` in the line-based kdag format.
    pub fn serialize(&self, root: VertexId, bound: Bound) -> String {
        let vertices = self.reachable(root);
        let mut index = vec![usize::MAX; self.len()];
        let mut out = String::new();
        writeln!(out, "kdag 1 {} {} {}", self.num_vars(), vertices.len(), bound).unwrap();
        out.push_str("order");
        for v in self.order().sequence() {
            write!(out, " {}", v.index()).unwrap();
        }
        out.push('\n');
        for (pos, &id) in vertices.iter().enumerate() {
            index[id.index()] = pos;
            match self.vertex(id) {
                Vertex::Leaf(false) => out.push_str("F\n"),
                Vertex::Leaf(true) => out.push_str("T\n"),
                Vertex::Decision { var, lo, hi } => {
                    writeln!(out, "D {} {} {}", var.index(), index[lo.index()], index[hi.index()]).unwrap();
                }
                Vertex::Conj(children) => {
                    write!(out, "C {}", children.len()).unwrap();
                    for c in children.iter() {
                        write!(out, " {}", index[c.index()]).unwrap();
                    }
                    out.push('\n');
                }
            }
        }
        out
    }

    /// Parses a kdag file into a fresh store using the file's order.
    pub fn deserialize(text: &str) -> Result<(DiagramStore, VertexId, Bound), KdagError> {
        let header = parse_header(text)?;
        let mut store = DiagramStore::new(header.order.clone());
        let (root, bound) = store.load(text, header)?;
        Ok((store, root, bound))
    }

    /// Parses a kdag file into this store, whose order must match the file.
    pub fn read_into(&mut self, text: &str) -> Result<(VertexId, Bound), KdagError> {
        let header = parse_header(text)?;
        if &header.order != self.order() {
            return Err(KdagError::OrderMismatch);
        }
        self.load(text, header)
    }

    fn load(&mut self, text: &str, header: Header) -> Result<(VertexId, Bound), KdagError> {
        let mut ids: Vec<VertexId> = Vec::with_capacity(header.count);
        let child = |ids: &[VertexId], line: usize, tok: Option<&str>| -> Result<VertexId, KdagError> {
            let k: usize = tok.ok_or_else(|| malformed(line, "missing child"))?.parse().map_err(|_| malformed(line, "bad child index"))?;
            ids.get(k).copied().ok_or(KdagError::Dangling { line, child: k })
        };
        for (n, raw) in text.lines().enumerate().skip(2) {
            let line = n + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let mut toks = raw.split_whitespace();
            let id = match toks.next() {
                Some("F") => VertexId::FALSE,
                Some("T") => VertexId::TRUE,
                Some("D") => {
                    let var: u32 = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| malformed(line, "bad variable"))?;
                    let var = Var::try_new(var).map_err(|e| malformed(line, e.to_string()))?;
                    let lo = child(&ids, line, toks.next())?;
                    let hi = child(&ids, line, toks.next())?;
                    self.make_decision(var, lo, hi).map_err(|source| KdagError::Store { line, source })?
                }
                Some("C") => {
                    let k: usize = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| malformed(line, "bad arity"))?;
                    let mut children = Vec::with_capacity(k);
                    for _ in 0..k {
                        children.push(child(&ids, line, toks.next())?);
                    }
                    self.make_conj(children).map_err(|source| KdagError::Store { line, source })?
                }
                Some(other) => return Err(malformed(line, format!("unknown vertex kind {other:?}"))),
                None => unreachable!(),
            };
            if toks.next().is_some() {
                return Err(malformed(line, "trailing tokens"));
            }
            ids.push(id);
        }
        if ids.len() != header.count {
            return Err(malformed(1, format!("header declares {} vertices, found {}", header.count, ids.len())));
        }
        let root = ids.last().copied().ok_or_else(|| malformed(1, "no vertices"))?;
        Ok((root, header.bound))
    }
}

struct Header {
    order: VariableOrder,
    count: usize,
    bound: Bound,
}

fn parse_header(text: &str) -> Result<Header, KdagError> {
    let mut lines = text.lines();
    let first: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
    if first.len() != 5 || first[0] != "kdag" || first[1] != "1" {
        return Err(malformed(1, "expected `kdag 1 <vars> <vertices> <bound>`"));
    }
    let num_vars: u32 = first[2].parse().map_err(|_| malformed(1, "bad variable count"))?;
    let count: usize = first[3].parse().map_err(|_| malformed(1, "bad vertex count"))?;
    let bound: Bound = first[4].parse().map_err(|_| malformed(1, "bad bound"))?;
    let second: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
    if second.first() != Some(&"order") {
        return Err(malformed(2, "expected `order ...`"));
    }
    let mut seq = Vec::with_capacity(second.len() - 1);
    for tok in &second[1..] {
        let v: u32 = tok.parse().map_err(|_| malformed(2, "bad variable"))?;
        seq.push(Var::try_new(v).map_err(|e| malformed(2, e.to_string()))?);
    }
    if seq.len() != num_vars as usize {
        return Err(malformed(2, "order length differs from the variable count"));
    }
    let order = VariableOrder::from_sequence(seq).map_err(|e| malformed(2, e.to_string()))?;
    Ok(Header { order, count, bound })
}
