//! Here-and-there semantics by explicit enumeration.
//!
//! Interpretations are bit masks over a [`Signature`]. Model sets are kept
//! sorted by `(there, here)`, so iteration visits `Y` in ascending bit
//! order and, within each `Y`, the here-parts `X ⊆ Y` in ascending order.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Bound;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bits::{self, submasks};
use crate::error::{Error, Result};
use crate::limits;
use crate::syntax::{Program, Rule, RuleMask, Signature};

/// A set of atoms, bit `i` standing for atom `i` of some signature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation(pub u32);

impl Interpretation {
    pub const EMPTY: Interpretation = Interpretation(0);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_subset_of(self, other: Interpretation) -> bool {
        bits::is_subset(self.0, other.0)
    }

    pub fn minus(self, other: Interpretation) -> Interpretation {
        Interpretation(self.0 & !other.0)
    }

    pub fn union(self, other: Interpretation) -> Interpretation {
        Interpretation(self.0 | other.0)
    }

    pub fn intersects(self, other: Interpretation) -> bool {
        self.0 & other.0 != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

/// `⟨X, Y⟩` with `X ⊆ Y`. Ordered by `there` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HtInterpretation {
    pub there: Interpretation,
    pub here: Interpretation,
}

impl HtInterpretation {
    pub fn new(here: Interpretation, there: Interpretation) -> Result<Self> {
        if !here.is_subset_of(there) {
            return Err(Error::InvalidShape {
                here: format!("{:#b}", here.0),
                there: format!("{:#b}", there.0),
                reason: "here-part is not contained in there-part",
            });
        }
        Ok(HtInterpretation { there, here })
    }

    pub(crate) fn raw(here: u32, there: u32) -> Self {
        debug_assert!(bits::is_subset(here, there));
        HtInterpretation {
            there: Interpretation(there),
            here: Interpretation(here),
        }
    }

    pub fn total(y: Interpretation) -> Self {
        HtInterpretation { there: y, here: y }
    }

    pub fn is_total(&self) -> bool {
        self.here == self.there
    }

    pub fn show(&self, sig: &Signature) -> String {
        format!("<{},{}>", sig.show(self.here), sig.show(self.there))
    }
}

/// Membership test on HT-pairs given as raw masks.
pub(crate) trait PairMembership {
    fn has(&self, here: u32, there: u32) -> bool;
}

/// A set of HT-interpretations over a fixed signature.
#[derive(Clone, PartialEq, Eq)]
pub struct HtModelSet {
    signature: Signature,
    pairs: BTreeSet<HtInterpretation>,
}

impl HtModelSet {
    /// Fails if a pair mentions atoms outside the signature.
    pub fn new<I>(signature: Signature, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = HtInterpretation>,
    {
        let full = signature.full();
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if pairs.iter().any(|p| !p.there.is_subset_of(full)) {
            return Err(Error::SignatureMismatch);
        }
        Ok(HtModelSet { signature, pairs })
    }

    pub(crate) fn from_sorted(signature: Signature, pairs: BTreeSet<HtInterpretation>) -> Self {
        HtModelSet { signature, pairs }
    }

    /// Every HT-interpretation over the signature.
    pub fn all(signature: Signature) -> Result<Self> {
        limits::check_atoms(signature.len())?;
        let full = bits::full(signature.len());
        let pairs = submasks(full)
            .flat_map(|y| submasks(y).map(move |x| HtInterpretation::raw(x, y)))
            .collect();
        Ok(HtModelSet { signature, pairs })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn pairs(&self) -> &BTreeSet<HtInterpretation> {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = &HtInterpretation> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, here: Interpretation, there: Interpretation) -> bool {
        self.pairs.contains(&HtInterpretation { there, here })
    }

    /// The pairs whose there-part is `y`, ascending by here-part.
    pub fn column(&self, y: Interpretation) -> impl Iterator<Item = &HtInterpretation> {
        let lo = HtInterpretation {
            there: y,
            here: Interpretation(0),
        };
        let hi = HtInterpretation { there: y, here: y };
        self.pairs
            .range((Bound::Included(lo), Bound::Included(hi)))
    }

    /// There-parts `Y` with `⟨Y, Y⟩` in the set.
    pub fn totals(&self) -> impl Iterator<Item = Interpretation> + '_ {
        self.pairs.iter().filter(|p| p.is_total()).map(|p| p.there)
    }

    pub fn is_total_closed(&self) -> bool {
        self.check_total_closed().is_ok()
    }

    pub fn check_total_closed(&self) -> Result<()> {
        for p in &self.pairs {
            if !self.pairs.contains(&HtInterpretation::total(p.there)) {
                return Err(Error::NotTotalClosed {
                    here: self.signature.show(p.here),
                    there: self.signature.show(p.there),
                });
            }
        }
        Ok(())
    }

    /// Answer sets: totals `Y` without any `⟨X, Y⟩`, `X ⊂ Y`.
    pub fn answer_sets(&self) -> AnswerSets {
        let sets = self
            .totals()
            .filter(|&y| self.column(y).count() == 1)
            .collect();
        AnswerSets {
            signature: self.signature.clone(),
            sets,
        }
    }

    pub fn is_subset(&self, other: &HtModelSet) -> bool {
        self.signature == other.signature && self.pairs.is_subset(&other.pairs)
    }

    pub fn intersection(&self, other: &HtModelSet) -> Result<HtModelSet> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch);
        }
        Ok(HtModelSet {
            signature: self.signature.clone(),
            pairs: self.pairs.intersection(&other.pairs).copied().collect(),
        })
    }

    /// `{⟨X\V, Y\V⟩}`, re-encoded over the signature without `V`.
    pub fn v_exclude(&self, v: Interpretation) -> HtModelSet {
        let keep = self.signature.full().minus(v).0;
        let pairs = self
            .pairs
            .iter()
            .map(|p| HtInterpretation::raw(bits::compact(p.here.0, keep), bits::compact(p.there.0, keep)))
            .collect();
        HtModelSet {
            signature: self.signature.without(v),
            pairs,
        }
    }

    /// Reads a model set given over a subsignature as a set over `ambient`:
    /// a pair belongs to the result iff its restriction belongs to `self`.
    pub fn lift_to(&self, ambient: &Signature) -> Result<HtModelSet> {
        if !ambient.is_superset_of(&self.signature) {
            return Err(Error::SignatureMismatch);
        }
        limits::check_atoms(ambient.len())?;
        let positions: Vec<usize> = self
            .signature
            .atoms()
            .iter()
            .map(|a| ambient.index_of(a).expect("checked superset"))
            .collect();
        let restrict = |m: u32| {
            positions
                .iter()
                .enumerate()
                .filter(|(_, &pos)| m & (1 << pos) != 0)
                .fold(0u32, |acc, (i, _)| acc | (1 << i))
        };
        let full = bits::full(ambient.len());
        let pairs = submasks(full)
            .flat_map(|y| submasks(y).map(move |x| (x, y)))
            .filter(|&(x, y)| self.has(restrict(x), restrict(y)))
            .map(|(x, y)| HtInterpretation::raw(x, y))
            .collect();
        Ok(HtModelSet {
            signature: ambient.clone(),
            pairs,
        })
    }

    /// Same pairs re-encoded over a permutation or superset signature, no lifting.
    pub fn reencode(&self, target: &Signature) -> Result<HtModelSet> {
        if !target.is_superset_of(&self.signature) {
            return Err(Error::SignatureMismatch);
        }
        let map = |m: Interpretation| target.mask_lenient(&self.signature.atom_set(m));
        let pairs = self
            .pairs
            .iter()
            .map(|p| HtInterpretation {
                there: map(p.there),
                here: map(p.here),
            })
            .collect();
        Ok(HtModelSet {
            signature: target.clone(),
            pairs,
        })
    }

    pub fn to_json(&self) -> Value {
        let sig = &self.signature;
        json!({
            "signature": sig.atoms(),
            "ht_models": self
                .pairs
                .iter()
                .map(|p| json!([sig.names(p.here), sig.names(p.there)]))
                .collect::<Vec<_>>(),
            "answer_sets": self.answer_sets().to_json_list(),
        })
    }

    /// Parses `{"signature": [...], "ht_models": [[[..],[..]], ...]}`.
    pub fn from_json(value: &Value) -> Result<HtModelSet> {
        let bad = |m: &str| Error::Witness(m.to_string());
        let atoms: Vec<String> = value
            .get("signature")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `signature` array"))?
            .iter()
            .map(|a| a.as_str().map(String::from).ok_or_else(|| bad("atom must be a string")))
            .collect::<Result<_>>()?;
        let sig = Signature::new(atoms)?;
        let set_of = |v: &Value| -> Result<Interpretation> {
            let names: Vec<String> = v
                .as_array()
                .ok_or_else(|| bad("interpretation must be an array"))?
                .iter()
                .map(|a| a.as_str().map(String::from).ok_or_else(|| bad("atom must be a string")))
                .collect::<Result<_>>()?;
            sig.mask(&names)
        };
        let mut pairs = BTreeSet::new();
        for pair in value
            .get("ht_models")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `ht_models` array"))?
        {
            let parts = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("pair must have two elements"))?;
            pairs.insert(HtInterpretation::new(set_of(&parts[0])?, set_of(&parts[1])?)?);
        }
        Ok(HtModelSet {
            signature: sig,
            pairs,
        })
    }
}

impl PairMembership for HtModelSet {
    fn has(&self, here: u32, there: u32) -> bool {
        self.pairs.contains(&HtInterpretation::raw(here, there))
    }
}

impl fmt::Display for HtModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.pairs.iter().map(|p| p.show(&self.signature)).collect();
        f.write_str(&shown.join(" "))
    }
}

impl fmt::Debug for HtModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HtModelSet{:?}[{}]", self.signature.atoms(), self)
    }
}

/// A collection of interpretations over a signature, typically answer sets.
#[derive(Clone, PartialEq, Eq)]
pub struct AnswerSets {
    signature: Signature,
    sets: BTreeSet<Interpretation>,
}

impl AnswerSets {
    pub fn new<I: IntoIterator<Item = Interpretation>>(signature: Signature, sets: I) -> Self {
        AnswerSets {
            signature,
            sets: sets.into_iter().collect(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn sets(&self) -> &BTreeSet<Interpretation> {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, i: Interpretation) -> bool {
        self.sets.contains(&i)
    }

    /// Contains the interpretation consisting of exactly these atoms.
    pub fn contains_atoms(&self, atoms: &[&str]) -> bool {
        let names: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
        self.signature
            .mask(&names)
            .map(|m| self.sets.contains(&m))
            .unwrap_or(false)
    }

    pub fn is_subset(&self, other: &AnswerSets) -> bool {
        self.signature == other.signature && self.sets.is_subset(&other.sets)
    }

    /// `{X\V}`, re-encoded over the signature without `V`.
    pub fn v_exclude(&self, v: Interpretation) -> AnswerSets {
        let keep = self.signature.full().minus(v).0;
        AnswerSets {
            signature: self.signature.without(v),
            sets: self
                .sets
                .iter()
                .map(|s| Interpretation(bits::compact(s.0, keep)))
                .collect(),
        }
    }

    /// Atom names of every set, sorted as name lists.
    pub fn to_json_list(&self) -> Vec<Vec<&str>> {
        let mut named: Vec<Vec<&str>> = self.sets.iter().map(|s| self.signature.names(*s)).collect();
        named.sort();
        named
    }
}

impl fmt::Display for AnswerSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self
            .to_json_list()
            .iter()
            .map(|names| format!("{{{}}}", names.join(",")))
            .collect();
        f.write_str(&shown.join(" "))
    }
}

impl fmt::Debug for AnswerSets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnswerSets{:?}[{}]", self.signature.atoms(), self)
    }
}

fn check_interpretation(i: Interpretation, sig: &Signature) -> Result<()> {
    if i.is_subset_of(sig.full()) {
        Ok(())
    } else {
        Err(Error::SignatureMismatch)
    }
}

/// Classical satisfaction with `not` read as classical negation.
pub fn satisfies(i: Interpretation, program: &Program, sig: &Signature) -> Result<bool> {
    check_interpretation(i, sig)?;
    Ok(program.compile(sig)?.iter().all(|r| r.satisfied_by(i.0)))
}

/// The Gelfond-Lifschitz style reduct `P^I` for extended rules.
pub fn reduct(program: &Program, i: Interpretation, sig: &Signature) -> Result<Program> {
    check_interpretation(i, sig)?;
    let mut out = Vec::new();
    for rule in program.rules() {
        if rule.compile(sig)?.survives_reduct(i.0) {
            out.push(Rule {
                head: rule.head.clone(),
                pos: rule.pos.clone(),
                ..Rule::default()
            });
        }
    }
    Ok(Program::new(out))
}

#[inline]
pub(crate) fn is_ht_model_masks(rules: &[RuleMask], here: u32, there: u32) -> bool {
    rules.iter().all(|r| {
        r.satisfied_by(there) && (!r.survives_reduct(there) || r.reduct_satisfied_by(here))
    })
}

pub fn is_ht_model(program: &Program, pair: HtInterpretation, sig: &Signature) -> Result<bool> {
    check_interpretation(pair.there, sig)?;
    if !pair.here.is_subset_of(pair.there) {
        return Err(Error::InvalidShape {
            here: sig.show(pair.here),
            there: sig.show(pair.there),
            reason: "here-part is not contained in there-part",
        });
    }
    Ok(is_ht_model_masks(&program.compile(sig)?, pair.here.0, pair.there.0))
}

fn column_of(rules: &[RuleMask], y: u32) -> Vec<HtInterpretation> {
    if !rules.iter().all(|r| r.satisfied_by(y)) {
        return Vec::new();
    }
    let reduct: Vec<&RuleMask> = rules.iter().filter(|r| r.survives_reduct(y)).collect();
    submasks(y)
        .filter(|&x| reduct.iter().all(|r| r.reduct_satisfied_by(x)))
        .map(|x| HtInterpretation::raw(x, y))
        .collect()
}

const PARALLEL_FROM: usize = 12;

pub(crate) fn ht_models_masks(rules: &[RuleMask], n: usize) -> BTreeSet<HtInterpretation> {
    let full = bits::full(n);
    if n >= PARALLEL_FROM {
        (0..=full)
            .into_par_iter()
            .flat_map_iter(|y| column_of(rules, y))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    } else {
        (0..=full).flat_map(|y| column_of(rules, y)).collect()
    }
}

/// All HT-models of `program` over `sig`.
pub fn ht_models(program: &Program, sig: &Signature) -> Result<HtModelSet> {
    limits::check_atoms(sig.len())?;
    let rules = program.compile(sig)?;
    Ok(HtModelSet {
        signature: sig.clone(),
        pairs: ht_models_masks(&rules, sig.len()),
    })
}

pub fn answer_sets(program: &Program, sig: &Signature) -> Result<AnswerSets> {
    Ok(ht_models(program, sig)?.answer_sets())
}

/// `P ⊨_HT Q` over the common signature `sig`.
pub fn ht_consequence(p: &Program, q: &Program, sig: &Signature) -> Result<bool> {
    Ok(ht_models(p, sig)?.is_subset(&ht_models(q, sig)?))
}

pub fn strongly_equivalent(p: &Program, q: &Program, sig: &Signature) -> Result<bool> {
    Ok(ht_models(p, sig)? == ht_models(q, sig)?)
}

/// The smallest HT-interpretation in exactly one of the two model sets.
pub fn distinguishing_pair(
    p: &Program,
    q: &Program,
    sig: &Signature,
) -> Result<Option<HtInterpretation>> {
    let (mp, mq) = (ht_models(p, sig)?, ht_models(q, sig)?);
    Ok(mp.pairs.symmetric_difference(&mq.pairs).next().copied())
}

/// `A(P) ∪ A(Q)` with declared signatures taking precedence.
pub fn common_signature(p: &Program, q: &Program) -> Signature {
    p.signature().union(&q.signature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn prog(text: &str) -> Program {
        parse_program(text).unwrap()
    }

    fn sig(atoms: &[&str]) -> Signature {
        Signature::new(atoms.iter().copied()).unwrap()
    }

    fn i(sig: &Signature, atoms: &[&str]) -> Interpretation {
        let names: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
        sig.mask(&names).unwrap()
    }

    fn pair(sig: &Signature, x: &[&str], y: &[&str]) -> HtInterpretation {
        HtInterpretation::new(i(sig, x), i(sig, y)).unwrap()
    }

    const EX2: &str = "a :- p. b :- not p. p :- not not p.";
    const EX4: &str = "a :- p. p :- not not p.";

    #[test]
    fn satisfies_examples() {
        let s = sig(&["a", "b", "p"]);
        let p = prog(EX2);
        assert!(satisfies(i(&s, &["a", "p"]), &p, &s).unwrap());
        assert!(!satisfies(i(&s, &["p"]), &p, &s).unwrap());
        assert!(satisfies(i(&s, &["b"]), &Program::empty(), &s).unwrap());
        assert_eq!(
            satisfies(Interpretation(0b1000), &p, &s),
            Err(Error::SignatureMismatch)
        );
    }

    #[test]
    fn reduct_examples() {
        let s = sig(&["a", "b", "p"]);
        let p = prog("p :- not not p.");
        assert_eq!(reduct(&p, i(&s, &["p"]), &s).unwrap(), prog("p."));
        assert!(reduct(&p, i(&s, &[]), &s).unwrap().is_empty());
        let q = prog("b :- not p.");
        assert!(reduct(&q, i(&s, &["a", "p"]), &s).unwrap().is_empty());
        assert_eq!(reduct(&q, i(&s, &["b"]), &s).unwrap(), prog("b."));
    }

    #[test]
    fn ht_model_examples() {
        let s = sig(&["a", "b", "p"]);
        let p = prog(EX2);
        assert!(is_ht_model(&p, pair(&s, &["b"], &["a", "b"]), &s).unwrap());
        assert!(!is_ht_model(&p, pair(&s, &["a"], &["a", "b"]), &s).unwrap());
        assert!(is_ht_model(&Program::empty(), pair(&s, &["a"], &["a", "b"]), &s).unwrap());
    }

    #[test]
    fn example_two_models() {
        let s = sig(&["a", "b", "p"]);
        let models = ht_models(&prog(EX2), &s).unwrap();
        let expected = HtModelSet::new(
            s.clone(),
            [
                pair(&s, &["a", "p"], &["a", "p"]),
                pair(&s, &["b"], &["b"]),
                pair(&s, &["b"], &["a", "b"]),
                pair(&s, &["a", "b"], &["a", "b"]),
                pair(&s, &["a", "p"], &["a", "b", "p"]),
                pair(&s, &["a", "b", "p"], &["a", "b", "p"]),
            ],
        )
        .unwrap();
        assert_eq!(models, expected);
        assert!(models.is_total_closed());
        let answers = models.answer_sets();
        assert_eq!(answers.to_string(), "{a,p} {b}");
        assert!(answers.contains_atoms(&["a", "p"]) && answers.contains_atoms(&["b"]));
        assert_eq!(answers.len(), 2);
    }

    #[test]
    fn example_four_models() {
        let s = sig(&["a", "p"]);
        let models = ht_models(&prog(EX4), &s).unwrap();
        assert_eq!(models.to_string(), "<{},{}> <{},{a}> <{a},{a}> <{a,p},{a,p}>");
    }

    #[test]
    fn empty_program_models() {
        let s = sig(&["a"]);
        assert_eq!(ht_models(&Program::empty(), &s).unwrap().len(), 3);
        assert_eq!(answer_sets(&Program::empty(), &s).unwrap().to_string(), "{}");
    }

    #[test]
    fn example_three_answer_sets() {
        let p = prog("a :- not b. b :- not a. :- not a, not b. a | b.");
        let s = sig(&["a", "b"]);
        let answers = answer_sets(&p, &s).unwrap();
        assert_eq!(answers.to_string(), "{a} {b}");
        assert!(!answers.contains_atoms(&["a", "b"]));
    }

    #[test]
    fn consequence_and_equivalence() {
        let s = sig(&["a", "b"]);
        let p = prog("a :- not b.");
        assert!(ht_consequence(&p, &p, &s).unwrap());
        assert!(ht_consequence(&p, &Program::empty(), &s).unwrap());
        assert!(ht_consequence(&prog("a."), &prog("a :- b."), &s).unwrap());
        assert!(!ht_consequence(&prog("a :- b."), &prog("a."), &s).unwrap());
        let sa = sig(&["a"]);
        assert!(strongly_equivalent(
            &prog("a :- not not a. a :- not not a."),
            &prog("a :- not not a."),
            &sa
        )
        .unwrap());
    }

    #[test]
    fn v_exclusion() {
        let s = sig(&["a", "b", "p"]);
        let answers = answer_sets(&prog(EX2), &s).unwrap();
        let p_mask = i(&s, &["p"]);
        assert_eq!(answers.v_exclude(p_mask).to_string(), "{a} {b}");
        assert_eq!(answers.v_exclude(Interpretation::EMPTY), answers);

        let set = HtModelSet::new(
            s.clone(),
            [
                pair(&s, &["a", "p"], &["a", "b", "p"]),
                pair(&s, &["b"], &["a", "b"]),
            ],
        )
        .unwrap();
        assert_eq!(set.v_exclude(p_mask).to_string(), "<{a},{a,b}> <{b},{a,b}>");
    }

    #[test]
    fn lifting_matches_direct_enumeration() {
        let small = sig(&["a"]);
        let big = sig(&["a", "p"]);
        let p = prog("a :- not not a.");
        let lifted = ht_models(&p, &small).unwrap().lift_to(&big).unwrap();
        assert_eq!(lifted, ht_models(&p, &big).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let s = sig(&["a", "b", "p"]);
        let models = ht_models(&prog(EX2), &s).unwrap();
        let v = models.to_json();
        assert_eq!(v["answer_sets"], json!([["a", "p"], ["b"]]));
        assert_eq!(HtModelSet::from_json(&v).unwrap(), models);
    }
}
