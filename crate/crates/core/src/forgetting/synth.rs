//! From a total-closed HT-model set back to a program.

use std::collections::HashSet;

use crate::bits::{self, submasks};
use crate::dense::PairSet;
use crate::error::{Error, Result};
use crate::limits;
use crate::semantics::{ht_models, HtModelSet, Interpretation};
use crate::syntax::{Program, ProgramClass, Rule, RuleMask, Signature};

/// A program over `sig` whose HT-models are exactly `target`.
///
/// One rule per excluded interpretation: `:- Y, not (sig\Y).` removes a
/// whole column, `(Y\X) :- X, not (sig\Y), not not (Y\X).` removes exactly
/// `⟨X, Y⟩`. The result is re-enumerated and compared with the target.
pub fn synthesize(target: &HtModelSet, sig: &Signature) -> Result<Program> {
    let target = if target.signature() == sig {
        target.clone()
    } else {
        target.reencode(sig)?
    };
    target.check_total_closed()?;
    limits::check_atoms(sig.len())?;

    let full = bits::full(sig.len());
    let mut rules = Vec::new();
    for y in submasks(full) {
        let outside = full & !y;
        if !target.contains(Interpretation(y), Interpretation(y)) {
            rules.push(RuleMask {
                head: 0,
                pos: y,
                neg: outside,
                nneg: 0,
            });
            continue;
        }
        for x in submasks(y) {
            if x != y && !target.contains(Interpretation(x), Interpretation(y)) {
                rules.push(RuleMask {
                    head: y & !x,
                    pos: x,
                    neg: outside,
                    nneg: y & !x,
                });
            }
        }
    }
    let program: Program = rules.into_iter().map(|r| Rule::from_mask(r, sig)).collect();
    if ht_models(&program, sig)? != target {
        return Err(Error::SynthesisMismatch);
    }
    Ok(program)
}

/// Largest signature for which [`minimize`] searches prime rules exhaustively.
const PRIME_SEARCH_MAX_ATOMS: usize = 5;

/// Per-atom placements that can occur in a prime rule. Atoms in both head
/// and positive body, positive and negative body, or negative and doubly
/// negated body make the rule a tautology; an atom in the positive and
/// doubly negated body is redundant in the latter.
const PRIME_PLACEMENTS: [(bool, bool, bool, bool); 7] = [
    (false, false, false, false),
    (true, false, false, false),
    (false, true, false, false),
    (false, false, true, false),
    (false, false, false, true),
    (true, false, true, false),
    (true, false, false, true),
];

fn non_redundant_rules(n: usize, class: ProgramClass) -> impl Iterator<Item = RuleMask> {
    let total = 7usize.pow(n as u32);
    (0..total)
        .map(move |mut code| {
            let mut r = RuleMask::default();
            for i in 0..n {
                let (h, p, ng, nn) = PRIME_PLACEMENTS[code % 7];
                code /= 7;
                let bit = 1u32 << i;
                if h {
                    r.head |= bit;
                }
                if p {
                    r.pos |= bit;
                }
                if ng {
                    r.neg |= bit;
                }
                if nn {
                    r.nneg |= bit;
                }
            }
            r
        })
        .filter(move |r| in_class(r, class))
}

fn in_class(r: &RuleMask, class: ProgramClass) -> bool {
    let rule_class = if r.nneg != 0 {
        ProgramClass::Extended
    } else if r.head.count_ones() > 1 {
        ProgramClass::Disjunctive
    } else if r.neg != 0 {
        ProgramClass::Normal
    } else if r.pos != 0 {
        ProgramClass::Horn
    } else {
        ProgramClass::FactOnly
    };
    class.contains(rule_class)
}

fn literal_count(r: &RuleMask) -> u32 {
    r.head.count_ones() + r.pos.count_ones() + r.neg.count_ones() + r.nneg.count_ones()
}

/// Rules obtained by deleting a single literal or head atom.
fn weakenings(r: &RuleMask) -> impl Iterator<Item = RuleMask> + '_ {
    let fields = [r.head, r.pos, r.neg, r.nneg];
    (0..4).flat_map(move |f| {
        let field = fields[f];
        (0..32).filter(move |b| field & (1 << b) != 0).map(move |b| {
            let mut out = *r;
            let slot = match f {
                0 => &mut out.head,
                1 => &mut out.pos,
                2 => &mut out.neg,
                _ => &mut out.nneg,
            };
            *slot &= !(1 << b);
            out
        })
    })
}

/// Implied rules of the class that lose their consequence status when any
/// literal is dropped, each with its model set.
fn prime_rules(target: &PairSet, n: usize, class: ProgramClass) -> Vec<(RuleMask, PairSet)> {
    let implied: Vec<(RuleMask, PairSet)> = non_redundant_rules(n, class)
        .map(|r| (r, PairSet::from_rules(&[r], n)))
        .filter(|(_, models)| target.is_subset(models))
        .collect();
    let implied_set: HashSet<RuleMask> = implied.iter().map(|(r, _)| *r).collect();
    implied
        .into_iter()
        .filter(|(r, _)| !weakenings(r).any(|w| implied_set.contains(&w)))
        .collect()
}

/// Greedy cover of the countermodels of `target` by prime rules, followed
/// by removal of rules implied by the others. `None` if the primes cannot
/// reproduce the target (only possible for restricted classes).
fn prime_cover(target: &PairSet, n: usize, class: ProgramClass) -> Option<Vec<RuleMask>> {
    let primes = prime_rules(target, n, class);
    let mut models = PairSet::all(n);
    for (_, m) in &primes {
        models.intersect_with(m);
    }
    if &models != target {
        return None;
    }

    let all: Vec<_> = PairSet::all(n).iter().collect();
    let mut uncovered: HashSet<(u32, u32)> = all
        .iter()
        .filter(|p| !target.contains(p.here.0, p.there.0))
        .map(|p| (p.here.0, p.there.0))
        .collect();
    let mut chosen: Vec<(RuleMask, PairSet)> = Vec::new();
    while !uncovered.is_empty() {
        let (best, _) = primes
            .iter()
            .enumerate()
            .map(|(i, (r, m))| {
                let gain = uncovered.iter().filter(|&&(x, y)| !m.contains(x, y)).count();
                (i, (gain, std::cmp::Reverse(literal_count(r)), std::cmp::Reverse(*r)))
            })
            .max_by_key(|(_, key)| *key)
            .expect("primes reproduce the target");
        let (r, m) = primes[best].clone();
        uncovered.retain(|&(x, y)| m.contains(x, y));
        chosen.push((r, m));
    }

    let mut i = chosen.len();
    while i > 0 {
        i -= 1;
        let mut rest = PairSet::all(n);
        for (j, (_, m)) in chosen.iter().enumerate() {
            if j != i {
                rest.intersect_with(m);
            }
        }
        if &rest == target {
            chosen.remove(i);
        }
    }
    Some(chosen.into_iter().map(|(r, _)| r).collect())
}

fn greedy_reduce(program: &Program, sig: &Signature, target: &HtModelSet) -> Result<Program> {
    let mut rules: Vec<Rule> = program.rules().iter().cloned().collect();
    // drop literals while the program stays strongly equivalent
    for i in 0..rules.len() {
        loop {
            let mask = rules[i].compile(sig)?;
            let mut improved = false;
            for w in weakenings(&mask).collect::<Vec<_>>() {
                let mut trial = rules.clone();
                trial[i] = Rule::from_mask(w, sig);
                if ht_models(&trial.iter().cloned().collect(), sig)? == *target {
                    rules = trial;
                    improved = true;
                    break;
                }
            }
            if !improved {
                break;
            }
        }
    }
    let mut program: Program = rules.into_iter().collect();
    for rule in program.rules().clone() {
        let mut trial = program.clone();
        trial.remove(&rule);
        if ht_models(&trial, sig)? == *target {
            program = trial;
        }
    }
    Ok(program)
}

/// A small program strongly equivalent to `program` over `sig`.
///
/// Up to five atoms: greedy cover of the countermodels by prime rules.
/// Beyond that: greedy literal deletion, then greedy rule deletion.
pub fn minimize(program: &Program, sig: &Signature) -> Result<Program> {
    let target = ht_models(program, sig)?;
    let reduced = if sig.len() <= PRIME_SEARCH_MAX_ATOMS {
        let dense = PairSet::from_model_set(&target);
        let rules = prime_cover(&dense, sig.len(), ProgramClass::Extended)
            .expect("extended primes express every total-closed set");
        rules.into_iter().map(|r| Rule::from_mask(r, sig)).collect()
    } else {
        greedy_reduce(program, sig, &target)?
    };
    if ht_models(&reduced, sig)? != target {
        return Err(Error::SynthesisMismatch);
    }
    Ok(reduced)
}

/// A program of the given class with exactly the HT-models `target`, if
/// one exists. Decided exactly: the conjunction of all implied rules of the
/// class is the strongest such program.
pub fn express_in_class(target: &HtModelSet, class: ProgramClass) -> Result<Option<Program>> {
    let sig = target.signature();
    if sig.len() > PRIME_SEARCH_MAX_ATOMS {
        return Err(Error::SignatureTooLarge {
            size: sig.len(),
            cap: PRIME_SEARCH_MAX_ATOMS,
        });
    }
    let dense = PairSet::from_model_set(target);
    Ok(prime_cover(&dense, sig.len(), class)
        .map(|rules| rules.into_iter().map(|r| Rule::from_mask(r, sig)).collect()))
}
