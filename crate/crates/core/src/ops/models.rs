use crate::formula::{Assignment, Var};
use crate::store::{DiagramStore, Vertex, VertexId};

use super::query::ScopeError;

type Partial = Vec<(Var, bool)>;
type Stream<'a> = Box<dyn Iterator<Item = Partial> + 'a>;

/// Lazy enumeration of the models of a diagram over a scope. Each model is
/// produced exactly once.
pub struct ModelStream<'a> {
    inner: Stream<'a>,
}

impl Iterator for ModelStream<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        self.inner.next().map(|m| m.into_iter().collect())
    }
}

impl DiagramStore {
    pub fn enumerate_models<'a>(&'a self, u: VertexId, scope: &[Var]) -> Result<ModelStream<'a>, ScopeError> {
        let mut scope: Vec<Var> = scope.to_vec();
        scope.sort();
        scope.dedup();
        for v in self.vars_of(u) {
            if scope.binary_search(&v).is_err() {
                return Err(ScopeError(v));
            }
        }
        let free: Vec<Var> = scope.into_iter().filter(|&v| !self.order().contains(v) || !self.mentions(u, v)).collect();
        Ok(ModelStream { inner: with_free(models(self, u), free) })
    }
}

fn models(store: &DiagramStore, u: VertexId) -> Stream<'_> {
    match store.vertex(u) {
        Vertex::Leaf(true) => Box::new(std::iter::once(Vec::new())),
        Vertex::Leaf(false) => Box::new(std::iter::empty()),
        Vertex::Decision { var, lo, hi } => {
            let branch = move |child: VertexId, value: bool| {
                let free: Vec<Var> =
                    store.vars_of(u).into_iter().filter(|&v| v != var && !store.mentions(child, v)).collect();
                with_free(models(store, child), free).map(move |mut m| {
                    m.push((var, value));
                    m
                })
            };
            Box::new(branch(lo, false).chain(branch(hi, true)))
        }
        Vertex::Conj(children) => {
            let mut acc: Stream<'_> = Box::new(std::iter::once(Vec::new()));
            for &c in children.iter() {
                acc = product(acc, store, c);
            }
            acc
        }
    }
}

fn product<'a>(left: Stream<'a>, store: &'a DiagramStore, right: VertexId) -> Stream<'a> {
    Box::new(left.flat_map(move |m| {
        models(store, right).map(move |mut r| {
            r.extend_from_slice(&m);
            r
        })
    }))
}

fn with_free(stream: Stream<'_>, free: Vec<Var>) -> Stream<'_> {
    let mut acc = stream;
    for v in free {
        acc = Box::new(acc.flat_map(move |m| {
            [false, true].into_iter().map(move |b| {
                let mut m = m.clone();
                m.push((v, b));
                m
            })
        }));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::Bound;

    fn x(i: u32) -> Var {
        Var::new(i)
    }

    #[test]
    fn leaves_and_literal() {
        let mut s = DiagramStore::with_natural_order(2);
        assert_eq!(s.enumerate_models(VertexId::FALSE, &[x(1), x(2)]).unwrap().count(), 0);
        assert_eq!(s.enumerate_models(VertexId::TRUE, &[x(1), x(2)]).unwrap().count(), 4);
        let a = s.literal(x(1), true);
        let all: Vec<Assignment> = s.enumerate_models(a, &[x(1)]).unwrap().collect();
        assert_eq!(all, vec![[(x(1), true)].into_iter().collect::<Assignment>()]);
        assert!(s.enumerate_models(a, &[x(2)]).is_err());
    }

    #[test]
    fn distinct_and_counted() {
        let mut s = DiagramStore::with_natural_order(4);
        let a = s.literal(x(1), true);
        let b = s.literal(x(3), false);
        let c = s.literal(x(2), true);
        let ab = s.conjoin(a, b, Bound::Infinite);
        let u = s.disjoin(ab, c, Bound::Infinite);
        let scope = [x(1), x(2), x(3), x(4)];
        let all: Vec<Assignment> = s.enumerate_models(u, &scope).unwrap().collect();
        let mut dedup = all.clone();
        dedup.sort_by_key(|m| m.to_string());
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
        assert_eq!(s.model_count(u, &scope).unwrap(), all.len() as u64);
        assert!(all.iter().all(|m| m.len() == 4 && s.eval(u, m)));
    }
}
