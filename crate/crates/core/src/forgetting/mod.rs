//! Forgetting operators as transformers of HT-model sets.
//!
//! For a base `Y` outside the forgotten atoms `V`, the R-family collects,
//! for every minimal augmentation `A ⊆ V` with `⟨Y∪A, Y∪A⟩` an HT-model,
//! the here-parts `X \ V` of the HT-models `⟨X, Y∪A⟩`. The operators differ
//! only in how a family is collapsed into the column of `Y`:
//!
//! * [`OperatorKind::Sp`] intersects the family,
//! * [`OperatorKind::R`] takes its union,
//! * [`OperatorKind::M`] intersects when a least member exists, unions otherwise.
//!
//! An empty family contributes nothing: its intersection is taken to be the
//! empty set, not the universe.

mod closure;
pub(crate) mod fast;
mod synth;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::bits::{self, submasks};
use crate::error::{Error, Result};
use crate::semantics::{ht_models, HtInterpretation, HtModelSet, Interpretation, PairMembership};
use crate::syntax::{AtomSet, Program, Signature};

pub use closure::{canonical_rule_masks, closure_forget, enumerate_canonical_rules};
pub use synth::{express_in_class, minimize, synthesize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    Sp,
    R,
    M,
    /// The closure operator: all rules that keep relativized equivalence.
    Closure,
}

impl OperatorKind {
    pub const MODEL_BASED: [OperatorKind; 3] = [OperatorKind::Sp, OperatorKind::R, OperatorKind::M];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Sp => "sp",
            OperatorKind::R => "r",
            OperatorKind::M => "m",
            OperatorKind::Closure => "closure",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Ok(OperatorKind::Sp),
            "r" => Ok(OperatorKind::R),
            "m" => Ok(OperatorKind::M),
            "closure" => Ok(OperatorKind::Closure),
            _ => Err(Error::UnknownOperator(s.to_string())),
        }
    }
}

/// A program, the atoms to forget, and the ambient signature.
#[derive(Clone, Debug)]
pub struct ForgettingInstance {
    program: Program,
    forget: Interpretation,
    ambient: Signature,
    models: HtModelSet,
}

impl ForgettingInstance {
    /// `ambient` defaults to the program's signature (declared, else `A(P)`).
    pub fn new(program: Program, forget: &AtomSet, ambient: Option<Signature>) -> Result<Self> {
        let ambient = match ambient {
            Some(a) => a,
            None => program.signature(),
        };
        if let Some(atom) = forget.iter().find(|a| !ambient.contains(a)) {
            return Err(Error::ForgetOutsideAmbient(atom.clone()));
        }
        let forget = ambient.mask(forget)?;
        let models = ht_models(&program, &ambient)?;
        Ok(ForgettingInstance {
            program,
            forget,
            ambient,
            models,
        })
    }

    /// Convenience constructor from atom names.
    pub fn of(program: Program, forget: &[&str]) -> Result<Self> {
        let forget: AtomSet = forget.iter().map(|a| a.to_string()).collect();
        ForgettingInstance::new(program, &forget, None)
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn ambient(&self) -> &Signature {
        &self.ambient
    }

    /// `V` encoded over the ambient signature.
    pub fn forget(&self) -> Interpretation {
        self.forget
    }

    pub fn forget_atoms(&self) -> AtomSet {
        self.ambient.atom_set(self.forget)
    }

    /// `HT(P)` over the ambient signature.
    pub fn models(&self) -> &HtModelSet {
        &self.models
    }

    /// The ambient signature without `V`: the signature of every result.
    pub fn remaining(&self) -> Signature {
        self.ambient.without(self.forget)
    }

    pub(crate) fn keep_mask(&self) -> u32 {
        bits::full(self.ambient.len()) & !self.forget.0
    }
}

/// The R-family of a base `Y`.
///
/// Augmentations and member sets are encoded over the ambient signature;
/// member interpretations never contain forgotten atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RFamily {
    base: Interpretation,
    members: BTreeMap<Interpretation, BTreeSet<Interpretation>>,
}

impl RFamily {
    pub fn base(&self) -> Interpretation {
        self.base
    }

    /// Map from each relevant augmentation `A` to its member set.
    pub fn members(&self) -> &BTreeMap<Interpretation, BTreeSet<Interpretation>> {
        &self.members
    }

    /// Distinct member sets; the family is a set of sets.
    pub fn sets(&self) -> BTreeSet<&BTreeSet<Interpretation>> {
        self.members.values().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of distinct member sets.
    pub fn len(&self) -> usize {
        self.sets().len()
    }

    pub fn intersection(&self) -> BTreeSet<Interpretation> {
        let mut sets = self.members.values();
        let Some(first) = sets.next() else {
            return BTreeSet::new();
        };
        sets.fold(first.clone(), |acc, s| acc.intersection(s).copied().collect())
    }

    pub fn union(&self) -> BTreeSet<Interpretation> {
        self.members.values().flatten().copied().collect()
    }

    pub fn to_json(&self, sig: &Signature) -> Value {
        json!(self
            .members
            .iter()
            .map(|(a, set)| json!({
                "augmentation": sig.names(*a),
                "members": set.iter().map(|x| sig.names(*x)).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>())
    }
}

/// Raw family computation shared by every route: `(A, sorted member masks)`.
pub(crate) fn family_masks<M: PairMembership>(models: &M, y: u32, v: u32) -> Vec<(u32, Vec<u32>)> {
    let mut out = Vec::new();
    for a in submasks(v) {
        let ya = y | a;
        if !models.has(ya, ya) {
            continue;
        }
        if submasks(a).any(|a2| a2 != a && models.has(y | a2, ya)) {
            continue;
        }
        let mut set: Vec<u32> = submasks(ya)
            .filter(|&x| models.has(x, ya))
            .map(|x| x & !v)
            .collect();
        set.sort_unstable();
        set.dedup();
        out.push((a, set));
    }
    out
}

/// The R-family of `y`, which must avoid the forgotten atoms.
pub fn r_family(inst: &ForgettingInstance, y: Interpretation) -> Result<RFamily> {
    if y.intersects(inst.forget) {
        return Err(Error::BaseIntersectsForgotten);
    }
    if !y.is_subset_of(inst.ambient.full()) {
        return Err(Error::SignatureMismatch);
    }
    let members = family_masks(&inst.models, y.0, inst.forget.0)
        .into_iter()
        .map(|(a, set)| (Interpretation(a), set.into_iter().map(Interpretation).collect()))
        .collect();
    Ok(RFamily { base: y, members })
}

/// The member contained in every other member, if there is one.
pub fn least_element(family: &RFamily) -> Option<BTreeSet<Interpretation>> {
    let sets = family.sets();
    sets.iter()
        .find(|cand| sets.iter().all(|other| cand.is_subset(other)))
        .map(|s| (*s).clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaVerdict {
    pub satisfied: bool,
    /// Smallest base (in bit order) whose family is non-empty without a least member.
    pub witness: Option<Interpretation>,
}

/// Criterion Ω: forgetting `V` while keeping strong persistence is impossible.
pub fn omega(inst: &ForgettingInstance) -> OmegaVerdict {
    for y in submasks(inst.keep_mask()) {
        let family = r_family(inst, Interpretation(y)).expect("base avoids V");
        if !family.is_empty() && least_element(&family).is_none() {
            return OmegaVerdict {
                satisfied: true,
                witness: Some(Interpretation(y)),
            };
        }
    }
    OmegaVerdict {
        satisfied: false,
        witness: None,
    }
}

/// Every non-empty family of the instance, keyed by base.
pub fn families(inst: &ForgettingInstance) -> Vec<RFamily> {
    submasks(inst.keep_mask())
        .map(|y| r_family(inst, Interpretation(y)).expect("base avoids V"))
        .filter(|f| !f.is_empty())
        .collect()
}

pub fn omega_to_json(inst: &ForgettingInstance, verdict: &OmegaVerdict, explain: bool) -> Value {
    let sig = inst.ambient();
    let mut out = json!({
        "satisfies_omega": verdict.satisfied,
        "witness": verdict.witness.map(|w| sig.names(w)),
    });
    if explain {
        let fams: serde_json::Map<String, Value> = families(inst)
            .iter()
            .map(|f| (sig.show(f.base()), f.to_json(sig)))
            .collect();
        out["families"] = Value::Object(fams);
    }
    out
}

/// Collapses a family into the here-parts of its column.
fn column(family: &RFamily, kind: OperatorKind) -> BTreeSet<Interpretation> {
    match kind {
        OperatorKind::Sp => family.intersection(),
        OperatorKind::R => family.union(),
        OperatorKind::M => {
            if !family.is_empty() && least_element(family).is_none() {
                family.union()
            } else {
                family.intersection()
            }
        }
        OperatorKind::Closure => unreachable!("rejected by caller"),
    }
}

/// The HT-models every result of the operator class must have, over
/// the ambient signature without `V`.
pub fn forget_models(inst: &ForgettingInstance, kind: OperatorKind) -> Result<HtModelSet> {
    if kind == OperatorKind::Closure {
        return Err(Error::UnsupportedOperator(kind.name().into()));
    }
    let keep = inst.keep_mask();
    let mut pairs = BTreeSet::new();
    for y in submasks(keep) {
        let family = r_family(inst, Interpretation(y))?;
        let local_y = bits::compact(y, keep);
        for x in column(&family, kind) {
            pairs.insert(HtInterpretation::raw(bits::compact(x.0, keep), local_y));
        }
    }
    HtModelSet::new(inst.remaining(), pairs)
}

/// A concrete result program for the operator, over the ambient signature
/// without `V`. `Closure` returns the full closure.
pub fn forget(inst: &ForgettingInstance, kind: OperatorKind) -> Result<Program> {
    match kind {
        OperatorKind::Closure => closure_forget(inst),
        _ => synthesize(&forget_models(inst, kind)?, &inst.remaining()),
    }
}
