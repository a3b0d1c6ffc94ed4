//! Bounded enumeration of context programs.
//!
//! Properties quantified over added programs `R` only depend on `R` through
//! its HT-models, so the engine works with one representative per distinct
//! model set. [`enumerate_contexts`] is the literal enumeration.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::dense::PairSet;
use crate::error::Result;
use crate::forgetting::canonical_rule_masks;
use crate::limits;
use crate::syntax::{Program, Rule, RuleMask, Signature};

/// Every program of at most `bound` distinct canonical rules over `sig`:
/// the empty program, then single rules, then pairs, and so on, each in
/// lexicographic order of rule indices.
pub fn enumerate_contexts(sig: &Signature, bound: usize) -> Result<impl Iterator<Item = Program> + '_> {
    limits::check_rule_atoms(sig.len())?;
    let rules: Vec<RuleMask> = canonical_rule_masks(sig.len()).collect();
    let total = rules.len();
    let combos = (0..=bound.min(total)).flat_map(move |size| Combinations::new(total, size));
    Ok(combos.map(move |idx| idx.iter().map(|&i| Rule::from_mask(rules[i], sig)).collect()))
}

struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// A set of contexts sharing one HT-model set, with the first one found.
#[derive(Clone, Debug)]
pub(crate) struct ContextClass {
    pub models: PairSet,
    pub rules: Vec<RuleMask>,
}

impl ContextClass {
    pub fn program(&self, sig: &Signature) -> Program {
        self.rules.iter().map(|&r| Rule::from_mask(r, sig)).collect()
    }
}

type ClassCache = Mutex<HashMap<(usize, usize), Arc<Vec<ContextClass>>>>;

fn cache() -> &'static ClassCache {
    static CACHE: OnceLock<ClassCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Distinct HT-model sets of programs with at most `bound` rules over `k`
/// atoms, with representatives. Level `i + 1` intersects every class of
/// level `i` with every single-rule class.
pub(crate) fn context_classes(k: usize, bound: usize) -> Result<Arc<Vec<ContextClass>>> {
    limits::check_rule_atoms(k)?;
    if let Some(hit) = cache().lock().expect("cache lock").get(&(k, bound)) {
        return Ok(hit.clone());
    }

    let mut index: HashMap<PairSet, usize> = HashMap::new();
    let mut classes = vec![ContextClass {
        models: PairSet::all(k),
        rules: Vec::new(),
    }];
    index.insert(PairSet::all(k), 0);

    let mut singles: Vec<ContextClass> = Vec::new();
    let mut seen: HashMap<PairSet, ()> = HashMap::new();
    for r in canonical_rule_masks(k) {
        let models = PairSet::from_rules(&[r], k);
        if seen.insert(models.clone(), ()).is_none() {
            singles.push(ContextClass { models, rules: vec![r] });
        }
    }

    let mut frontier: Vec<usize> = vec![0];
    for _ in 0..bound {
        let mut next = Vec::new();
        for &c in &frontier {
            for s in &singles {
                let models = classes[c].models.intersection(&s.models);
                if index.contains_key(&models) {
                    continue;
                }
                let mut rules = classes[c].rules.clone();
                rules.extend(&s.rules);
                index.insert(models.clone(), classes.len());
                next.push(classes.len());
                classes.push(ContextClass { models, rules });
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let classes = Arc::new(classes);
    cache()
        .lock()
        .expect("cache lock")
        .insert((k, bound), classes.clone());
    Ok(classes)
}

/// One program per distinct HT-model set among the programs of
/// [`enumerate_contexts`]. Sufficient for any condition on `AS(P ∪ R)`,
/// since strongly equivalent contexts are interchangeable.
pub fn distinct_contexts(sig: &Signature, bound: usize) -> Result<Vec<Program>> {
    Ok(context_classes(sig.len(), bound)?
        .iter()
        .map(|c| c.program(sig))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::ht_models;
    use std::collections::BTreeSet;

    #[test]
    fn context_counts() {
        let one = Signature::new(["a"]).unwrap();
        assert_eq!(enumerate_contexts(&one, 0).unwrap().count(), 1);
        assert!(enumerate_contexts(&one, 0).unwrap().next().unwrap().is_empty());
        assert_eq!(enumerate_contexts(&one, 1).unwrap().count(), 17);
        assert_eq!(enumerate_contexts(&one, 2).unwrap().count(), 1 + 16 + 120);
        let distinct: BTreeSet<_> = enumerate_contexts(&one, 2).unwrap().map(|p| p.rules().clone()).collect();
        assert_eq!(distinct.len(), 137);
    }

    #[test]
    fn classes_cover_the_enumeration() {
        let sig = Signature::new(["a", "b"]).unwrap();
        let from_enum: BTreeSet<_> = enumerate_contexts(&sig, 2)
            .unwrap()
            .map(|r| ht_models(&r, &sig).unwrap().pairs().clone())
            .collect();
        let from_classes: BTreeSet<_> = distinct_contexts(&sig, 2)
            .unwrap()
            .iter()
            .map(|r| ht_models(r, &sig).unwrap().pairs().clone())
            .collect();
        assert_eq!(from_enum, from_classes);
        assert_eq!(distinct_contexts(&sig, 2).unwrap().len(), from_classes.len());
        for class in context_classes(2, 2).unwrap().iter() {
            assert!(class.rules.len() <= 2);
            assert_eq!(class.models.to_model_set(&sig), ht_models(&class.program(&sig), &sig).unwrap());
        }
    }

    #[test]
    fn one_atom_classes() {
        // over one atom the total-closed sets of rules are: everything,
        // nothing, and the four proper non-empty ones
        let classes = context_classes(1, 2).unwrap();
        assert_eq!(classes.len(), 6);
        assert!(classes.iter().any(|c| c.models.is_empty()));
    }
}
