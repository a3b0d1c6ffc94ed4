//! Bitset of HT-pairs for small signatures.
//!
//! Pair `⟨X, Y⟩` over `n` atoms sits at bit `(Y << n) | X`. Used where the
//! same model sets are intersected and queried millions of times, namely
//! closure computation and bounded context enumeration.

use crate::bits::{self, submasks};
use crate::semantics::{HtInterpretation, HtModelSet, PairMembership};
use crate::syntax::{RuleMask, Signature};

pub(crate) const DENSE_MAX_ATOMS: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct PairSet {
    n: u32,
    words: Vec<u64>,
}

impl PairSet {
    pub fn empty(n: usize) -> Self {
        assert!(n <= DENSE_MAX_ATOMS, "dense pair sets support at most {DENSE_MAX_ATOMS} atoms");
        let bits = 1usize << (2 * n);
        PairSet {
            n: n as u32,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub fn all(n: usize) -> Self {
        let mut s = PairSet::empty(n);
        for y in submasks(bits::full(n)) {
            for x in submasks(y) {
                s.insert(x, y);
            }
        }
        s
    }

    pub fn from_rules(rules: &[RuleMask], n: usize) -> Self {
        let mut s = PairSet::empty(n);
        for y in 0..=bits::full(n) {
            if !rules.iter().all(|r| r.satisfied_by(y)) {
                continue;
            }
            for x in submasks(y) {
                if rules
                    .iter()
                    .all(|r| !r.survives_reduct(y) || r.reduct_satisfied_by(x))
                {
                    s.insert(x, y);
                }
            }
        }
        s
    }

    pub fn from_model_set(models: &HtModelSet) -> Self {
        let mut s = PairSet::empty(models.signature().len());
        for p in models.iter() {
            s.insert(p.here.0, p.there.0);
        }
        s
    }

    pub fn to_model_set(&self, sig: &Signature) -> HtModelSet {
        debug_assert_eq!(sig.len(), self.n as usize);
        HtModelSet::from_sorted(sig.clone(), self.iter().collect())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    fn index(&self, here: u32, there: u32) -> usize {
        ((there as usize) << self.n) | here as usize
    }

    #[inline]
    pub fn insert(&mut self, here: u32, there: u32) {
        let i = self.index(here, there);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, here: u32, there: u32) -> bool {
        let i = self.index(here, there);
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn intersect_with(&mut self, other: &PairSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn intersection(&self, other: &PairSet) -> PairSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    #[cfg(test)]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = HtInterpretation> + '_ {
        let n = self.n;
        let mask = bits::full(n as usize);
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                let i = wi * 64 + b;
                Some(HtInterpretation::raw(i as u32 & mask, (i >> n) as u32))
            })
        })
    }

    /// Answer sets as raw masks, ascending.
    pub fn answer_sets(&self) -> Vec<u32> {
        (0..=bits::full(self.n()))
            .filter(|&y| self.contains(y, y) && !submasks(y).any(|x| x != y && self.contains(x, y)))
            .collect()
    }
}

impl PairMembership for PairSet {
    #[inline]
    fn has(&self, here: u32, there: u32) -> bool {
        self.contains(here, there)
    }
}

impl std::fmt::Debug for PairSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries(self.iter().map(|p| (p.here.0, p.there.0)))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::ht_models;
    use crate::syntax::parse_program;

    #[test]
    fn agrees_with_sparse_enumeration() {
        let p = parse_program("a :- p. b :- not p. p :- not not p.").unwrap();
        let sig = p.signature();
        let sparse = ht_models(&p, &sig).unwrap();
        let dense = PairSet::from_rules(&p.compile(&sig).unwrap(), sig.len());
        assert_eq!(dense.to_model_set(&sig), sparse);
        assert_eq!(PairSet::from_model_set(&sparse), dense);
        assert_eq!(dense.answer_sets(), vec![0b010, 0b101]);
    }

    #[test]
    fn set_operations() {
        let all = PairSet::all(2);
        assert_eq!(all.iter().count(), 9);
        let mut one = PairSet::empty(2);
        one.insert(0b01, 0b11);
        assert!(one.is_subset(&all));
        assert!(!all.is_subset(&one));
        assert_eq!(all.intersection(&one), one);
        assert!(PairSet::empty(3).is_empty());
    }
}
