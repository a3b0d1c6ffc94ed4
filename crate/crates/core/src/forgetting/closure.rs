//! The closure operator: every rule over the remaining atoms whose addition
//! keeps the program relativized equivalent to itself.

use rayon::prelude::*;

use super::ForgettingInstance;
use crate::bits;
use crate::dense::{PairSet, DENSE_MAX_ATOMS};
use crate::error::Result;
use crate::limits;
use crate::relativized::v_ht_from_ht;
use crate::semantics::PairMembership;
use crate::syntax::{Program, Rule, RuleMask, Signature};

/// All `16^n` rules over `n` atoms: atom `i` takes the placement given by
/// the `i`-th hexadecimal digit of the counter (head, pos, neg, nneg bits).
pub fn canonical_rule_masks(n: usize) -> impl Iterator<Item = RuleMask> {
    (0..1u64 << (4 * n)).map(move |code| {
        let mut r = RuleMask::default();
        for i in 0..n {
            let digit = (code >> (4 * i)) & 0xf;
            let bit = 1u32 << i;
            if digit & 1 != 0 {
                r.head |= bit;
            }
            if digit & 2 != 0 {
                r.pos |= bit;
            }
            if digit & 4 != 0 {
                r.neg |= bit;
            }
            if digit & 8 != 0 {
                r.nneg |= bit;
            }
        }
        r
    })
}

/// Every rule over `sig` exactly once, in counter order.
pub fn enumerate_canonical_rules(sig: &Signature) -> Result<impl Iterator<Item = Rule> + '_> {
    limits::check_rule_atoms(sig.len())?;
    Ok(canonical_rule_masks(sig.len()).map(move |r| Rule::from_mask(r, sig)))
}

fn lift(r: RuleMask, keep: u32) -> RuleMask {
    RuleMask {
        head: bits::expand(r.head, keep),
        pos: bits::expand(r.pos, keep),
        neg: bits::expand(r.neg, keep),
        nneg: bits::expand(r.nneg, keep),
    }
}

/// Membership in `HT(P) ∩ HT(r)` without materializing the intersection.
struct WithRule<'a, M> {
    models: &'a M,
    rule: RuleMask,
}

impl<M: PairMembership> PairMembership for WithRule<'_, M> {
    fn has(&self, here: u32, there: u32) -> bool {
        self.models.has(here, there)
            && self.rule.satisfied_by(there)
            && (!self.rule.survives_reduct(there) || self.rule.reduct_satisfied_by(here))
    }
}

fn closure_rules<M: PairMembership + Sync>(models: &M, n: usize, v: u32, keep: u32, k: usize) -> Vec<RuleMask> {
    let reference = v_ht_from_ht(models, n, v);
    let masks: Vec<RuleMask> = canonical_rule_masks(k).collect();
    masks
        .into_par_iter()
        .filter(|&r| {
            let with = WithRule {
                models,
                rule: lift(r, keep),
            };
            v_ht_from_ht(&with, n, v) == reference
        })
        .collect()
}

/// `f_r(P, V)`: all rules over the ambient signature without `V` that can be
/// added to `P` without changing its V-HT-models. No minimization.
pub fn closure_forget(inst: &ForgettingInstance) -> Result<Program> {
    let remaining = inst.remaining();
    limits::check_rule_atoms(remaining.len())?;
    let n = inst.ambient().len();
    let v = inst.forget().0;
    let keep = inst.keep_mask();
    let rules = if n <= DENSE_MAX_ATOMS {
        let dense = PairSet::from_model_set(inst.models());
        closure_rules(&dense, n, v, keep, remaining.len())
    } else {
        closure_rules(inst.models(), n, v, keep, remaining.len())
    };
    Ok(rules
        .into_iter()
        .map(|r| Rule::from_mask(r, &remaining))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forgetting::{forget_models, OperatorKind};
    use crate::error::Error;
    use crate::relativized::relativized_equivalent;
    use crate::semantics::{answer_sets, ht_models, strongly_equivalent};
    use crate::syntax::{parse_program, render_program};

    #[test]
    fn rule_counts() {
        let one = Signature::new(["a"]).unwrap();
        let rules: Vec<Rule> = enumerate_canonical_rules(&one).unwrap().collect();
        assert_eq!(rules.len(), 16);
        assert!(rules.contains(&Rule::new(&[], &[], &[], &[])));
        let two = Signature::new(["a", "b"]).unwrap();
        let rules: std::collections::BTreeSet<Rule> = enumerate_canonical_rules(&two).unwrap().collect();
        assert_eq!(rules.len(), 256);
        assert!(!rules
            .iter()
            .any(|r| render_program(&std::iter::once(r.clone()).collect()).contains('c')));
    }

    #[test]
    fn rule_cap() {
        let five = Signature::new(["a", "b", "c", "d", "e"]).unwrap();
        assert!(matches!(
            enumerate_canonical_rules(&five).err(),
            Some(Error::SignatureTooLarge { size: 5, cap: 4 })
        ));
        let with_c = Signature::new(["a", "b", "c"]).unwrap();
        let target = parse_program("a | b :- not c.").unwrap();
        assert!(enumerate_canonical_rules(&with_c)
            .unwrap()
            .any(|r| Some(&r) == target.rules().iter().next()));
    }

    #[test]
    fn example_three_closure() {
        let p = parse_program("a :- p. b :- not p. p :- not not p.").unwrap();
        let inst = ForgettingInstance::of(p, &["p"]).unwrap();
        let closure = closure_forget(&inst).unwrap();
        let remaining = inst.remaining();
        let expected = parse_program("a :- not b. b :- not a. :- not a, not b. a | b.").unwrap();
        assert!(strongly_equivalent(&closure, &expected, &remaining).unwrap());
        assert_eq!(
            ht_models(&closure, &remaining).unwrap(),
            forget_models(&inst, OperatorKind::R).unwrap()
        );
        assert!(!answer_sets(&closure, &remaining).unwrap().contains_atoms(&["a", "b"]));
        assert!(closure.rules().iter().all(|r| r.atoms().all(|a| a != "p")));
    }

    #[test]
    fn closure_is_relativized_equivalent() {
        let p = parse_program("a :- p. p :- not not p.").unwrap();
        let inst = ForgettingInstance::of(p.clone(), &["p"]).unwrap();
        let closure = closure_forget(&inst).unwrap();
        let both = p.union(&closure);
        assert!(relativized_equivalent(&both, &p, inst.forget(), inst.ambient()).unwrap());
    }
}
