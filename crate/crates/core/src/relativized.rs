//! V-HT-models and relativized equivalence.
//!
//! `V` is the set of atoms a context program may not mention. A pair
//! `⟨X, Y⟩` is a V-HT-interpretation when `X = Y` or `X ⊂ Y \ V`.
//! Two independent routes compute the V-HT-models of a program: straight
//! from the three model conditions, and from the HT-models restricted to
//! the relevant there-parts. They must agree.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::bits::{self, submasks};
use crate::error::{Error, Result};
use crate::limits;
use crate::semantics::{ht_models, HtInterpretation, HtModelSet, Interpretation, PairMembership};
use crate::syntax::{Program, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VhtAlgorithm {
    /// Check conditions (a)-(c) on every V-HT-interpretation.
    Direct,
    /// Derive from the HT-models and the relevant sets.
    ViaHt,
}

/// Shape condition: `X = Y` or `X ⊂ Y \ V`.
pub fn is_v_ht_interpretation(pair: HtInterpretation, v: Interpretation) -> bool {
    pair.is_total() || {
        let rest = pair.there.minus(v);
        pair.here.is_subset_of(rest) && pair.here != rest
    }
}

fn check_shape(pair: HtInterpretation, v: Interpretation, sig: &Signature) -> Result<()> {
    if !pair.there.is_subset_of(sig.full()) || !v.is_subset_of(sig.full()) {
        return Err(Error::SignatureMismatch);
    }
    if !is_v_ht_interpretation(pair, v) {
        return Err(Error::InvalidShape {
            here: sig.show(pair.here),
            there: sig.show(pair.there),
            reason: "expected X = Y or X a strict subset of Y minus the forgotten atoms",
        });
    }
    Ok(())
}

/// Decides V-HT-modelhood from the definition, without computing HT-models.
pub fn is_v_ht_model_direct(
    program: &Program,
    v: Interpretation,
    pair: HtInterpretation,
    sig: &Signature,
) -> Result<bool> {
    check_shape(pair, v, sig)?;
    let rules = program.compile(sig)?;
    let (x, y) = (pair.here.0, pair.there.0);

    // (a) Y is a classical model
    if !rules.iter().all(|r| r.satisfied_by(y)) {
        return Ok(false);
    }
    let reduct: Vec<_> = rules.iter().filter(|r| r.survives_reduct(y)).collect();
    let models_reduct = |i: u32| reduct.iter().all(|r| r.reduct_satisfied_by(i));

    // (b) no Y' ⊂ Y agreeing with Y outside V models P^Y
    let y_rest = y & !v.0;
    let y_v = y & v.0;
    if submasks(y_v).any(|b| b != y_v && models_reduct(y_rest | b)) {
        return Ok(false);
    }

    // (c) a non-total X must extend, within Y, to a model of P^Y
    if x != y && !submasks(y_v).any(|b| models_reduct(x | b)) {
        return Ok(false);
    }
    Ok(true)
}

/// Every V-HT-interpretation over `sig`, ordered by there-part then here-part.
pub fn v_ht_interpretations(
    sig: &Signature,
    v: Interpretation,
) -> impl Iterator<Item = HtInterpretation> {
    let v = v.0;
    submasks(bits::full(sig.len())).flat_map(move |y| {
        let rest = y & !v;
        submasks(rest)
            .filter(move |&x| x != rest || x == y)
            .chain(std::iter::once(y).filter(move |&y| y != rest))
            .map(move |x| HtInterpretation::raw(x, y))
    })
}

pub(crate) fn is_relevant<M: PairMembership>(models: &M, y: u32, v: u32) -> bool {
    if !models.has(y, y) {
        return false;
    }
    let rest = y & !v;
    let yv = y & v;
    !submasks(yv).any(|b| b != yv && models.has(rest | b, y))
}

/// `Rel(P, V)`: there-parts `Y` with `⟨Y, Y⟩` an HT-model and no
/// HT-model `⟨Y', Y⟩` for `Y' ⊂ Y` agreeing with `Y` outside `V`.
pub fn relevant_sets(
    program: &Program,
    v: Interpretation,
    sig: &Signature,
) -> Result<BTreeSet<Interpretation>> {
    let models = ht_models(program, sig)?;
    Ok(relevant_sets_of(&models, v))
}

pub fn relevant_sets_of(models: &HtModelSet, v: Interpretation) -> BTreeSet<Interpretation> {
    models
        .totals()
        .filter(|y| is_relevant(models, y.0, v.0))
        .collect()
}

/// V-HT-models from an HT-model set: for each relevant `Y`, the pairs
/// `⟨X \ V, Y⟩` for HT-models `⟨X, Y⟩` with `X ⊂ Y`, plus `⟨Y, Y⟩`.
pub(crate) fn v_ht_from_ht<M: PairMembership>(models: &M, n: usize, v: u32) -> BTreeSet<HtInterpretation> {
    let mut out = BTreeSet::new();
    for y in submasks(bits::full(n)) {
        if !is_relevant(models, y, v) {
            continue;
        }
        out.insert(HtInterpretation::raw(y, y));
        for x in submasks(y) {
            if x != y && models.has(x, y) {
                out.insert(HtInterpretation::raw(x & !v, y));
            }
        }
    }
    out
}

/// The V-HT-models of a program together with the signature and `V`.
#[derive(Clone, PartialEq, Eq)]
pub struct VhtModelSet {
    signature: Signature,
    forgotten: Interpretation,
    pairs: BTreeSet<HtInterpretation>,
}

impl VhtModelSet {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn forgotten(&self) -> Interpretation {
        self.forgotten
    }

    pub fn pairs(&self) -> &BTreeSet<HtInterpretation> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn totals(&self) -> impl Iterator<Item = Interpretation> + '_ {
        self.pairs.iter().filter(|p| p.is_total()).map(|p| p.there)
    }

    /// `HT_V(P)‖V` as an ordinary HT-model set over the signature without `V`.
    pub fn v_exclude(&self) -> HtModelSet {
        HtModelSet::from_sorted(self.signature.clone(), self.pairs.clone()).v_exclude(self.forgotten)
    }

    pub fn to_json(&self) -> Value {
        let sig = &self.signature;
        json!({
            "signature": sig.atoms(),
            "forgotten": sig.names(self.forgotten),
            "v_ht_models": self
                .pairs
                .iter()
                .map(|p| json!([sig.names(p.here), sig.names(p.there)]))
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for VhtModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.pairs.iter().map(|p| p.show(&self.signature)).collect();
        f.write_str(&shown.join(" "))
    }
}

impl fmt::Debug for VhtModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VhtModelSet{:?}/{}[{}]",
            self.signature.atoms(),
            self.signature.show(self.forgotten),
            self
        )
    }
}

pub fn v_ht_models(
    program: &Program,
    v: Interpretation,
    sig: &Signature,
    algorithm: VhtAlgorithm,
) -> Result<VhtModelSet> {
    limits::check_atoms(sig.len())?;
    if !v.is_subset_of(sig.full()) {
        return Err(Error::SignatureMismatch);
    }
    let pairs = match algorithm {
        VhtAlgorithm::Direct => {
            let mut out = BTreeSet::new();
            for pair in v_ht_interpretations(sig, v) {
                if is_v_ht_model_direct(program, v, pair, sig)? {
                    out.insert(pair);
                }
            }
            out
        }
        VhtAlgorithm::ViaHt => v_ht_from_ht(&ht_models(program, sig)?, sig.len(), v.0),
    };
    Ok(VhtModelSet {
        signature: sig.clone(),
        forgotten: v,
        pairs,
    })
}

pub fn v_ht_models_of(models: &HtModelSet, v: Interpretation) -> VhtModelSet {
    VhtModelSet {
        signature: models.signature().clone(),
        forgotten: v,
        pairs: v_ht_from_ht(models, models.signature().len(), v.0),
    }
}

/// `P ≡_V Q`: same answer sets under every added program avoiding `V`.
pub fn relativized_equivalent(
    p: &Program,
    q: &Program,
    v: Interpretation,
    sig: &Signature,
) -> Result<bool> {
    Ok(v_ht_models(p, v, sig, VhtAlgorithm::ViaHt)? == v_ht_models(q, v, sig, VhtAlgorithm::ViaHt)?)
}

/// The smallest V-HT-interpretation that is a model of exactly one program.
pub fn distinguishing_v_pair(
    p: &Program,
    q: &Program,
    v: Interpretation,
    sig: &Signature,
) -> Result<Option<HtInterpretation>> {
    let mp = v_ht_models(p, v, sig, VhtAlgorithm::ViaHt)?;
    let mq = v_ht_models(q, v, sig, VhtAlgorithm::ViaHt)?;
    Ok(mp.pairs.symmetric_difference(&mq.pairs).next().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::answer_sets;
    use crate::syntax::parse_program;

    fn prog(text: &str) -> Program {
        parse_program(text).unwrap()
    }

    fn sig(atoms: &[&str]) -> Signature {
        Signature::new(atoms.iter().copied()).unwrap()
    }

    fn m(sig: &Signature, atoms: &[&str]) -> Interpretation {
        let names: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
        sig.mask(&names).unwrap()
    }

    const EX2: &str = "a :- p. b :- not p. p :- not not p.";
    const EX4: &str = "a :- p. p :- not not p.";

    /// Every V-HT-interpretation of `EX2` over {a,b,p}, V = {p}, checked against
    /// a hand evaluation of conditions (a)-(c).
    #[test]
    fn example_two_direct() {
        let s = sig(&["a", "b", "p"]);
        let v = m(&s, &["p"]);
        let models = v_ht_models(&prog(EX2), v, &s, VhtAlgorithm::Direct).unwrap();
        assert_eq!(
            models.to_string(),
            "<{b},{b}> <{b},{a,b}> <{a,b},{a,b}> <{a,p},{a,p}> <{a},{a,b,p}> <{a,b,p},{a,b,p}>"
        );
        assert_eq!(models, v_ht_models(&prog(EX2), v, &s, VhtAlgorithm::ViaHt).unwrap());
    }

    #[test]
    fn answer_set_is_a_model_at_empty_v() {
        let s = sig(&["a", "b", "p"]);
        let p = prog(EX2);
        for y in answer_sets(&p, &s).unwrap().sets() {
            assert!(is_v_ht_model_direct(&p, Interpretation::EMPTY, HtInterpretation::total(*y), &s).unwrap());
        }
    }

    #[test]
    fn fact_fails_condition_a() {
        let s = sig(&["a"]);
        let pair = HtInterpretation::total(Interpretation::EMPTY);
        assert!(!is_v_ht_model_direct(&prog("a."), m(&s, &["a"]), pair, &s).unwrap());
    }

    #[test]
    fn shape_violation_is_an_error() {
        let s = sig(&["a", "p"]);
        let pair = HtInterpretation::new(m(&s, &["p"]), m(&s, &["a", "p"])).unwrap();
        assert!(matches!(
            is_v_ht_model_direct(&prog(EX4), m(&s, &["p"]), pair, &s),
            Err(Error::InvalidShape { .. })
        ));
    }

    #[test]
    fn relevant_sets_examples() {
        let s = sig(&["a", "b", "p"]);
        let rel = relevant_sets(&prog(EX2), m(&s, &["p"]), &s).unwrap();
        let shown: Vec<String> = rel.iter().map(|y| s.show(*y)).collect();
        assert_eq!(shown, ["{b}", "{a,b}", "{a,p}", "{a,b,p}"]);

        let sa = sig(&["a"]);
        let rel = relevant_sets(&prog("a."), m(&sa, &["a"]), &sa).unwrap();
        assert_eq!(rel.into_iter().collect::<Vec<_>>(), vec![m(&sa, &["a"])]);
    }

    #[test]
    fn relevant_sets_at_the_extremes() {
        let s = sig(&["a", "b", "p"]);
        let p = prog(EX2);
        // V = ∅: condition (ii) is vacuous, every classical model is relevant
        let models = crate::semantics::ht_models(&p, &s).unwrap();
        let totals: BTreeSet<_> = models.totals().collect();
        assert_eq!(relevant_sets(&p, Interpretation::EMPTY, &s).unwrap(), totals);
        // V = A: every smaller Y' agrees with Y outside V, leaving the answer sets
        let answers = answer_sets(&p, &s).unwrap();
        assert_eq!(&relevant_sets(&p, s.full(), &s).unwrap(), answers.sets());
    }

    #[test]
    fn example_four_via_ht() {
        let s = sig(&["a", "p"]);
        let v = m(&s, &["p"]);
        let rel = relevant_sets(&prog(EX4), v, &s).unwrap();
        assert_eq!(rel.len(), 3);
        let models = v_ht_models(&prog(EX4), v, &s, VhtAlgorithm::ViaHt).unwrap();
        assert_eq!(models.to_string(), "<{},{}> <{},{a}> <{a},{a}> <{a,p},{a,p}>");
        assert_eq!(models, v_ht_models(&prog(EX4), v, &s, VhtAlgorithm::Direct).unwrap());
    }

    #[test]
    fn empty_v_gives_ht_models() {
        let s = sig(&["a", "b", "p"]);
        let p = prog(EX2);
        let vht = v_ht_models(&p, Interpretation::EMPTY, &s, VhtAlgorithm::Direct).unwrap();
        let ht = crate::semantics::ht_models(&p, &s).unwrap();
        assert_eq!(vht.pairs(), ht.pairs());
    }

    #[test]
    fn full_v_equivalence_is_ordinary_equivalence() {
        let s = sig(&["a", "b"]);
        let p = prog("a :- not b. b :- not a.");
        let q = prog("a | b. :- a, b.");
        assert_eq!(answer_sets(&p, &s).unwrap(), answer_sets(&q, &s).unwrap());
        assert!(relativized_equivalent(&p, &q, s.full(), &s).unwrap());
        assert!(!relativized_equivalent(&p, &q, Interpretation::EMPTY, &s).unwrap());
    }

    #[test]
    fn interpretations_have_valid_shape() {
        let s = sig(&["a", "b", "p"]);
        let v = m(&s, &["p"]);
        let all: Vec<_> = v_ht_interpretations(&s, v).collect();
        assert!(all.iter().all(|&p| is_v_ht_interpretation(p, v)));
        let brute = crate::semantics::HtModelSet::all(s.clone())
            .unwrap()
            .iter()
            .filter(|&&p| is_v_ht_interpretation(p, v))
            .count();
        assert_eq!(all.len(), brute);
        let unique: BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }
}
