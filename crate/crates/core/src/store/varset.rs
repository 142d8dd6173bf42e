// Variable sets indexed by rank. Every vertex's set lives in one shared
// word arena, so creating a vertex does not allocate a set of its own.

use smallvec::SmallVec;

#[derive(Clone, Copy, Debug)]
pub(crate) struct VarSet<'a>(&'a [u64]);

impl<'a> VarSet<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        VarSet(words)
    }

    pub(crate) fn contains(self, rank: usize) -> bool {
        self.0.get(rank / 64).is_some_and(|w| w >> (rank % 64) & 1 == 1)
    }

    pub(crate) fn is_disjoint(self, other: VarSet<'_>) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| a & b == 0)
    }

    pub(crate) fn union_count(self, other: VarSet<'_>) -> usize {
        self.0.iter().zip(other.0).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub(crate) fn count(self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn minimum(self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub(crate) fn ones(self) -> impl Iterator<Item = usize> + 'a {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    k * 64 + bit
                })
            })
        })
    }

    /// Ranks in `self` but not in `other`.
    pub(crate) fn difference<'b>(self, other: VarSet<'b>) -> impl Iterator<Item = usize> + use<'a, 'b> {
        self.ones().filter(move |&r| !other.contains(r))
    }
}

/// Owned set used to build vertex sets and query masks.
#[derive(Clone, Debug, Default)]
pub(crate) struct VarMask(SmallVec<[u64; 4]>);

impl VarMask {
    pub(crate) fn with_width(ranks: usize) -> Self {
        VarMask(SmallVec::from_elem(0, ranks.div_ceil(64)))
    }

    pub(crate) fn from_set(set: VarSet<'_>) -> Self {
        VarMask(SmallVec::from_slice(set.0))
    }

    /// Inserts `rank`; returns whether it was already present.
    pub(crate) fn put(&mut self, rank: usize) -> bool {
        let w = &mut self.0[rank / 64];
        let bit = 1u64 << (rank % 64);
        let had = *w & bit != 0;
        *w |= bit;
        had
    }

    pub(crate) fn union_with(&mut self, other: VarSet<'_>) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a |= b;
        }
    }

    pub(crate) fn as_set(&self) -> VarSet<'_> {
        VarSet(&self.0)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let mut a = VarMask::with_width(130);
        let mut b = VarMask::with_width(130);
        for r in [0, 5, 64, 129] {
            a.put(r);
        }
        assert!(b.as_set().is_disjoint(a.as_set()));
        assert!(!b.put(5));
        assert!(b.put(5));
        assert!(!a.as_set().is_disjoint(b.as_set()));
        assert_eq!(a.as_set().ones().collect::<Vec<_>>(), vec![0, 5, 64, 129]);
        assert_eq!(a.as_set().count(), 4);
        assert_eq!(a.as_set().union_count(b.as_set()), 4);
        assert_eq!(b.as_set().minimum(), Some(5));
        assert_eq!(a.as_set().difference(b.as_set()).collect::<Vec<_>>(), vec![0, 64, 129]);
        assert!(a.as_set().contains(129) && !a.as_set().contains(128) && !a.as_set().contains(500));
        b.union_with(a.as_set());
        assert_eq!(b.as_set().count(), 4);
        assert_eq!(VarMask::with_width(0).as_set().minimum(), None);
    }
}
