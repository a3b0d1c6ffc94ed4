//! Falsification engine for the forgetting postulates.
//!
//! Each property is evaluated per instance of a corpus. Properties that
//! quantify over added programs are checked against every context of at
//! most `bound` rules over the remaining atoms, so a clean report means
//! "no violation up to bound", never that the property holds.

mod contexts;
mod generate;
mod golden;
mod witness;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::bits::{self, submasks};
use crate::dense::{PairSet, DENSE_MAX_ATOMS};
use crate::error::{Error, Result};
use crate::forgetting::fast::forget_dense;
use crate::forgetting::{express_in_class, synthesize, ForgettingInstance, OperatorKind};
use crate::semantics::{HtInterpretation, HtModelSet, Interpretation};
use crate::syntax::{atoms_of, classify, AtomSet, Program, ProgramClass, Rule, Signature};

pub use contexts::{distinct_contexts, enumerate_contexts};
pub use generate::{random_corpus, random_instance, random_program, random_program_with, GeneratorConfig, Instance};
pub use witness::{load_corpus, read_witness, replay, shrink, witness_dirs, write_witness, Witness};

use contexts::context_classes;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    SC,
    WC,
    CP,
    WE,
    SE,
    W,
    PP,
    SI,
    SP,
    SSP,
    WSP,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::SC,
        Property::WC,
        Property::CP,
        Property::WE,
        Property::SE,
        Property::W,
        Property::PP,
        Property::SI,
        Property::SP,
        Property::SSP,
        Property::WSP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::SC => "sC",
            Property::WC => "wC",
            Property::CP => "CP",
            Property::WE => "wE",
            Property::SE => "SE",
            Property::W => "W",
            Property::PP => "PP",
            Property::SI => "SI",
            Property::SP => "SP",
            Property::SSP => "sSP",
            Property::WSP => "wSP",
        }
    }

    /// Quantifies over added programs and is therefore only checked up to a bound.
    pub fn uses_contexts(self) -> bool {
        matches!(
            self,
            Property::PP | Property::SI | Property::SP | Property::SSP | Property::WSP
        )
    }

    /// Compares the results for two related programs.
    pub fn uses_partners(self) -> bool {
        matches!(self, Property::SE | Property::WE)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }
}

/// Whether the operator class is known to satisfy the property.
pub fn expected_satisfied(property: Property, kind: OperatorKind) -> bool {
    use Property::*;
    let satisfied: &[Property] = match kind {
        OperatorKind::Sp => &[WC, SE, PP, SI, WSP],
        OperatorKind::R | OperatorKind::Closure => &[SC, SE, PP, SI, SSP],
        OperatorKind::M => &[SC, WC, CP, WE, SE, PP, SSP],
    };
    satisfied.contains(&property)
}

/// One refuted instance: what was compared and how it differed.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub instance: usize,
    pub program: Program,
    pub forget: AtomSet,
    pub partner: Option<Program>,
    pub context: Option<Program>,
    pub left_label: String,
    pub left: Vec<String>,
    pub right_label: String,
    pub right: Vec<String>,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({
            "instance": self.instance,
            "program": crate::syntax::render_program(&self.program),
            "forget": self.forget,
            "partner": self.partner.as_ref().map(crate::syntax::render_program),
            "context": self.context.as_ref().map(crate::syntax::render_program),
            "left": {"label": self.left_label, "value": self.left},
            "right": {"label": self.right_label, "value": self.right},
        })
    }
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub property: Property,
    pub kind: OperatorKind,
    /// Instances, or instance pairs for `SE`/`wE`, that were evaluated.
    pub checked: usize,
    /// Context bound, for properties that quantify over added programs.
    pub bound: Option<usize>,
    /// At most one violation per instance.
    pub violations: Vec<Violation>,
}

impl PropertyReport {
    pub fn verdict(&self) -> &'static str {
        match (self.violations.is_empty(), self.bound.is_some()) {
            (false, _) => "violated",
            (true, true) => "no violation up to bound",
            (true, false) => "no violation on corpus",
        }
    }

    pub fn matches_expected(&self) -> bool {
        expected_satisfied(self.property, self.kind) == self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "violations": self.violations.len(),
            "bound": self.bound,
            "verdict": self.verdict(),
            "expected": if expected_satisfied(self.property, self.kind) { "satisfied" } else { "violated" },
        })
    }
}

/// The report matrix as `{"matrix": {property: {operator: cell}}, ...}`.
pub fn matrix_to_json(reports: &[PropertyReport], instances: usize, bound: usize) -> Value {
    let mut matrix = Map::new();
    for r in reports {
        let row = matrix
            .entry(r.property.name().to_string())
            .or_insert_with(|| Value::Object(Map::new()));
        row[r.kind.name()] = r.to_json();
    }
    json!({
        "instances": instances,
        "bound": bound,
        "matrix": matrix,
        "matches_expected": reports.iter().all(PropertyReport::matches_expected),
    })
}

fn kind_index(kind: OperatorKind) -> Result<usize> {
    match kind {
        OperatorKind::Sp => Ok(0),
        OperatorKind::R => Ok(1),
        OperatorKind::M => Ok(2),
        OperatorKind::Closure => Err(Error::UnsupportedOperator(kind.name().into())),
    }
}

/// An instance with everything the checks share precomputed. Results are
/// encoded over the `k` atoms outside `V`, in ambient order.
pub(crate) struct Prepared {
    index: usize,
    program: Program,
    forget: AtomSet,
    ambient: Signature,
    remaining: Signature,
    v: u32,
    /// `compact[i]` is `i` restricted to the atoms outside `V`, renumbered.
    compact: Vec<u32>,
    models: PairSet,
    /// `HT(P)` with `V` removed from both components.
    projected: PairSet,
    answer_sets: Vec<u32>,
    /// `AS(P)‖V` over the remaining atoms.
    projected_answer_sets: Vec<u32>,
    results: [PairSet; 3],
}

impl Prepared {
    fn new(index: usize, program: &Program, forget: &AtomSet, ambient: &Signature) -> Result<Prepared> {
        if ambient.len() > DENSE_MAX_ATOMS {
            return Err(Error::SignatureTooLarge {
                size: ambient.len(),
                cap: DENSE_MAX_ATOMS,
            });
        }
        let inst = ForgettingInstance::new(program.clone(), forget, Some(ambient.clone()))?;
        let n = ambient.len();
        let v = inst.forget().0;
        let keep = inst.keep_mask();
        let compact: Vec<u32> = (0..=bits::full(n)).map(|i| bits::compact(i, keep)).collect();
        let models = PairSet::from_model_set(inst.models());
        let k = keep.count_ones() as usize;
        let mut projected = PairSet::empty(k);
        for p in models.iter() {
            projected.insert(compact[p.here.0 as usize], compact[p.there.0 as usize]);
        }
        let answer_sets = models.answer_sets();
        let projected_answer_sets = project_sets(&answer_sets, &compact);
        let results = [OperatorKind::Sp, OperatorKind::R, OperatorKind::M].map(|kind| forget_dense(&models, v, kind));
        Ok(Prepared {
            index,
            program: program.clone(),
            forget: forget.clone(),
            ambient: ambient.clone(),
            remaining: inst.remaining(),
            v,
            compact,
            models,
            projected,
            answer_sets,
            projected_answer_sets,
            results,
        })
    }

    fn of(index: usize, instance: &Instance) -> Result<Prepared> {
        Prepared::new(index, &instance.program, &instance.forget, &instance.program.signature())
    }

    /// `HT(P ∪ R)` for a context with models `m` over the remaining atoms.
    fn with_context(&self, m: &PairSet) -> PairSet {
        let mut out = PairSet::empty(self.models.n());
        for p in self.models.iter() {
            let (x, y) = (p.here.0, p.there.0);
            if m.contains(self.compact[x as usize], self.compact[y as usize]) {
                out.insert(x, y);
            }
        }
        out
    }

    fn show_local(&self, sets: &[u32]) -> Vec<String> {
        sets.iter().map(|&s| self.remaining.show(Interpretation(s))).collect()
    }

    fn show_local_pairs(&self, set: &PairSet) -> Vec<String> {
        set.iter().map(|p| p.show(&self.remaining)).collect()
    }

    fn show_pairs(&self, set: &PairSet) -> Vec<String> {
        set.iter().map(|p| p.show(&self.ambient)).collect()
    }

    fn violation(&self, left: (&str, Vec<String>), right: (&str, Vec<String>)) -> Violation {
        Violation {
            instance: self.index,
            program: self.program.clone(),
            forget: self.forget.clone(),
            partner: None,
            context: None,
            left_label: left.0.to_string(),
            left: left.1,
            right_label: right.0.to_string(),
            right: right.1,
        }
    }
}

fn project_sets(sets: &[u32], compact: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = sets.iter().map(|&s| compact[s as usize]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn is_sorted_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Properties about a single instance without contexts: sC, wC, CP, W.
fn evaluate_plain(property: Property, kind: usize, prep: &Prepared) -> Option<Violation> {
    let result = &prep.results[kind];
    let violated = match property {
        Property::SC | Property::WC | Property::CP => {
            let got = result.answer_sets();
            let want = &prep.projected_answer_sets;
            let ok = match property {
                Property::SC => is_sorted_subset(&got, want),
                Property::WC => is_sorted_subset(want, &got),
                _ => &got == want,
            };
            (!ok).then(|| prep.violation(("AS(f(P,V))", prep.show_local(&got)), ("AS(P)|V", prep.show_local(want))))
        }
        Property::W => (!prep.projected.is_subset(result)).then(|| {
            prep.violation(
                ("HT(P)", prep.show_pairs(&prep.models)),
                ("HT(f(P,V))", prep.show_local_pairs(result)),
            )
        }),
        _ => unreachable!("not a plain property"),
    };
    violated
}

/// Data about `P ∪ R` shared by all context properties.
struct ContextView<'a> {
    m: &'a PairSet,
    combined: Option<PairSet>,
    combined_answer_sets: Option<Vec<u32>>,
}

impl<'a> ContextView<'a> {
    fn new(m: &'a PairSet) -> Self {
        ContextView {
            m,
            combined: None,
            combined_answer_sets: None,
        }
    }

    fn combined(&mut self, prep: &Prepared) -> &PairSet {
        self.combined.get_or_insert_with(|| prep.with_context(self.m))
    }

    fn projected_answer_sets(&mut self, prep: &Prepared) -> Vec<u32> {
        if self.combined_answer_sets.is_none() {
            let sets = self.combined(prep).answer_sets();
            self.combined_answer_sets = Some(project_sets(&sets, &prep.compact));
        }
        self.combined_answer_sets.clone().expect("just computed")
    }
}

/// Properties quantified over a context with models `ctx.m`: PP, SI, SP, sSP, wSP.
fn evaluate_context(property: Property, kind: usize, prep: &Prepared, ctx: &mut ContextView) -> Option<Violation> {
    let result = &prep.results[kind];
    let m = ctx.m;
    match property {
        Property::PP => (prep.projected.is_subset(m) && !result.is_subset(m)).then(|| {
            prep.violation(
                ("HT(f(P,V))", prep.show_local_pairs(result)),
                ("HT(P')", prep.show_local_pairs(m)),
            )
        }),
        Property::SI => {
            let left = result.intersection(m);
            let kinds = [OperatorKind::Sp, OperatorKind::R, OperatorKind::M];
            let right = forget_dense(ctx.combined(prep), prep.v, kinds[kind]);
            (left != right).then(|| {
                prep.violation(
                    ("HT(f(P,V) u R)", prep.show_local_pairs(&left)),
                    ("HT(f(P u R,V))", prep.show_local_pairs(&right)),
                )
            })
        }
        Property::SP | Property::SSP | Property::WSP => {
            let got = result.intersection(m).answer_sets();
            let want = ctx.projected_answer_sets(prep);
            let ok = match property {
                Property::SSP => is_sorted_subset(&got, &want),
                Property::WSP => is_sorted_subset(&want, &got),
                _ => got == want,
            };
            (!ok).then(|| {
                prep.violation(
                    ("AS(f(P,V) u R)", prep.show_local(&got)),
                    ("AS(P u R)|V", prep.show_local(&want)),
                )
            })
        }
        _ => unreachable!("not a context property"),
    }
}

/// SE and wE for a partner prepared over the same ambient signature.
fn evaluate_pair(property: Property, kind: usize, prep: &Prepared, other: &Prepared) -> Option<Violation> {
    let (a, b) = (&prep.results[kind], &other.results[kind]);
    let mut v = match property {
        Property::SE => (a != b).then(|| {
            prep.violation(
                ("HT(f(P,V))", prep.show_local_pairs(a)),
                ("HT(f(P',V))", prep.show_local_pairs(b)),
            )
        }),
        Property::WE => {
            let (x, y) = (a.answer_sets(), b.answer_sets());
            (x != y).then(|| {
                prep.violation(("AS(f(P,V))", prep.show_local(&x)), ("AS(f(P',V))", prep.show_local(&y)))
            })
        }
        _ => unreachable!("not a pair property"),
    }?;
    v.partner = Some(other.program.clone());
    Some(v)
}

/// Whether `partner` may serve as the second program of a pair property.
fn is_partner(property: Property, prep: &Prepared, partner: &Prepared) -> bool {
    if atoms_of(&prep.program) != atoms_of(&partner.program) {
        return false;
    }
    match property {
        Property::SE => prep.models == partner.models,
        Property::WE => prep.answer_sets == partner.answer_sets,
        _ => false,
    }
}

/// Programs strongly equivalent to `P`: `P` with a rule weakened by an extra
/// body literal added, and the countermodel program for `HT(P)`.
fn equivalent_variants(prep: &Prepared) -> Vec<Program> {
    let mut out = Vec::new();
    let atoms = prep.ambient.atoms();
    for (i, rule) in prep.program.rules().iter().enumerate().take(2) {
        let extra = &atoms[i % atoms.len()];
        let mut weaker: Rule = rule.clone();
        if i % 2 == 0 {
            weaker.neg.insert(extra.clone());
        } else {
            weaker.pos.insert(extra.clone());
        }
        let mut variant = prep.program.clone();
        variant.insert(weaker);
        out.push(variant);
    }
    if let Ok(p) = synthesize(&prep.models.to_model_set(&prep.ambient), &prep.ambient) {
        out.push(p);
    }
    out
}

/// A program whose HT-models are exactly the totals `⟨Y, Y⟩` for the answer
/// sets `Y` of `P`, so it has the same answer sets and nothing else.
fn answer_set_variant(prep: &Prepared) -> Option<Program> {
    let totals = prep
        .answer_sets
        .iter()
        .map(|&y| HtInterpretation::total(Interpretation(y)));
    let target = HtModelSet::new(prep.ambient.clone(), totals).ok()?;
    synthesize(&target, &prep.ambient).ok()
}

fn partner_candidates(
    property: Property,
    prep: &Prepared,
    explicit: &[Program],
    same_answer_sets: &[&Prepared],
) -> Vec<Program> {
    let mut out = equivalent_variants(prep);
    out.extend(explicit.iter().cloned());
    if property == Property::WE {
        out.extend(answer_set_variant(prep));
        out.extend(same_answer_sets.iter().map(|p| p.program.clone()));
    }
    out
}

/// Built-in instances on which every class fails each property the
/// literature says it fails, with their recorded partners.
pub fn golden_corpus() -> Vec<Instance> {
    golden::GOLDEN
        .iter()
        .map(|g| {
            let parse = |text| {
                crate::syntax::parse_program(text).unwrap_or_else(|e| panic!("golden instance {}: {e}", g.name))
            };
            Instance {
                program: parse(g.program),
                forget: g.forget.iter().map(|a| a.to_string()).collect(),
                partners: g.partner.map(parse).into_iter().collect(),
            }
        })
        .collect()
}

/// The corpus `check` uses by default: `size` random instances followed by
/// the golden ones.
pub fn default_corpus(cfg: &GeneratorConfig, size: usize) -> Result<Vec<Instance>> {
    let mut corpus = random_corpus(cfg, size)?;
    corpus.extend(golden_corpus());
    Ok(corpus)
}

/// Per cell: how many checks ran and the first violation, if any.
type CellOutcomes = Vec<(usize, Option<Violation>)>;

/// Checks every requested (property, operator) cell on the corpus.
pub fn check_matrix(
    properties: &[Property],
    kinds: &[OperatorKind],
    corpus: &[Instance],
    bound: usize,
) -> Result<Vec<PropertyReport>> {
    let kind_ids: Vec<usize> = kinds.iter().map(|&k| kind_index(k)).collect::<Result<_>>()?;
    let prepared: Vec<Prepared> = corpus
        .iter()
        .enumerate()
        .map(|(i, inst)| Prepared::of(i, inst))
        .collect::<Result<_>>()?;

    // instances sharing signature, V and answer sets pair up for (wE)
    let mut by_answer_sets: HashMap<(Vec<String>, AtomSet, Vec<u32>), Vec<usize>> = HashMap::new();
    for p in &prepared {
        by_answer_sets
            .entry((p.ambient.atoms().to_vec(), p.forget.clone(), p.answer_sets.clone()))
            .or_default()
            .push(p.index);
    }

    let cells: Vec<(Property, usize)> = properties
        .iter()
        .flat_map(|&p| kind_ids.iter().map(move |&k| (p, k)))
        .collect();

    let per_instance: Vec<Result<CellOutcomes>> = prepared
        .par_iter()
        .map(|prep| {
            let mut outcome: CellOutcomes = vec![(0, None); cells.len()];
            let instance = &corpus[prep.index];
            for (c, &(property, kind)) in cells.iter().enumerate() {
                if property.uses_partners() {
                    let group = &by_answer_sets[&(prep.ambient.atoms().to_vec(), prep.forget.clone(), prep.answer_sets.clone())];
                    let others: Vec<&Prepared> = group
                        .iter()
                        .filter(|&&j| j != prep.index)
                        .take(3)
                        .map(|&j| &prepared[j])
                        .collect();
                    for candidate in partner_candidates(property, prep, &instance.partners, &others) {
                        let Ok(other) = Prepared::new(prep.index, &candidate, &prep.forget, &prep.ambient) else {
                            continue;
                        };
                        if !is_partner(property, prep, &other) {
                            continue;
                        }
                        outcome[c].0 += 1;
                        if outcome[c].1.is_none() {
                            outcome[c].1 = evaluate_pair(property, kind, prep, &other);
                        }
                    }
                } else if !property.uses_contexts() {
                    outcome[c] = (1, evaluate_plain(property, kind, prep));
                }
            }

            let context_cells: Vec<usize> = (0..cells.len()).filter(|&c| cells[c].0.uses_contexts()).collect();
            if !context_cells.is_empty() {
                let classes = context_classes(prep.remaining.len(), bound)?;
                for &c in &context_cells {
                    outcome[c].0 = 1;
                }
                for class in classes.iter() {
                    let mut view = ContextView::new(&class.models);
                    for &c in &context_cells {
                        if outcome[c].1.is_some() {
                            continue;
                        }
                        let (property, kind) = cells[c];
                        if let Some(mut v) = evaluate_context(property, kind, prep, &mut view) {
                            v.context = Some(class.program(&prep.remaining));
                            outcome[c].1 = Some(v);
                        }
                    }
                    if context_cells.iter().all(|&c| outcome[c].1.is_some()) {
                        break;
                    }
                }
            }
            Ok(outcome)
        })
        .collect();

    let mut reports: Vec<PropertyReport> = cells
        .iter()
        .map(|&(property, kind)| PropertyReport {
            property,
            kind: kinds[kind_ids.iter().position(|&k| k == kind).expect("listed")],
            checked: 0,
            bound: property.uses_contexts().then_some(bound),
            violations: Vec::new(),
        })
        .collect();
    for outcome in per_instance {
        for (report, (checked, violation)) in reports.iter_mut().zip(outcome?) {
            report.checked += checked;
            report.violations.extend(violation);
        }
    }
    Ok(reports)
}

/// Checks one property for one operator class on the corpus.
pub fn check_property(
    property: Property,
    kind: OperatorKind,
    corpus: &[Instance],
    bound: usize,
) -> Result<PropertyReport> {
    Ok(check_matrix(&[property], &[kind], corpus, bound)?.remove(0))
}

/// Re-evaluates a single recorded violation: the property on the instance,
/// with the recorded partner or context only. `None` if it no longer fails.
pub fn reevaluate(
    property: Property,
    kind: OperatorKind,
    program: &Program,
    forget: &AtomSet,
    partner: Option<&Program>,
    context: Option<&Program>,
) -> Result<Option<Violation>> {
    let kind = kind_index(kind)?;
    let prep = Prepared::new(0, program, forget, &program.signature())?;
    if property.uses_partners() {
        let partner = partner.ok_or_else(|| Error::Witness(format!("{property} needs a partner program")))?;
        let other = Prepared::new(0, partner, forget, &prep.ambient)?;
        if !is_partner(property, &prep, &other) {
            return Err(Error::Witness(format!("partner does not meet the precondition of {property}")));
        }
        return Ok(evaluate_pair(property, kind, &prep, &other));
    }
    if property.uses_contexts() {
        let context = context.cloned().unwrap_or_else(Program::empty);
        let compiled = context.compile(&prep.remaining)?;
        let m = PairSet::from_rules(&compiled, prep.remaining.len());
        let mut view = ContextView::new(&m);
        return Ok(evaluate_context(property, kind, &prep, &mut view).map(|mut v| {
            v.context = Some(context);
            v
        }));
    }
    Ok(evaluate_plain(property, kind, &prep))
}

/// `E(C)` for one instance: if `P` lies in `class`, some program of `class`
/// has exactly the operator's result models.
pub fn class_closure_holds(instance: &Instance, kind: OperatorKind, class: ProgramClass) -> Result<bool> {
    if !class.contains(classify(&instance.program)) {
        return Ok(true);
    }
    let prep = Prepared::of(0, instance)?;
    let target = prep.results[kind_index(kind)?].to_model_set(&prep.remaining);
    Ok(express_in_class(&target, class)?.is_some())
}

/// Every R-family of a Horn instance has at most one member.
pub fn families_are_singletons(instance: &Instance) -> Result<bool> {
    let prep = Prepared::of(0, instance)?;
    let keep = bits::full(prep.ambient.len()) & !prep.v;
    Ok(submasks(keep).all(|y| {
        let family = crate::forgetting::family_masks(&prep.models, y, prep.v);
        family.len() <= 1 || family.windows(2).all(|w| w[0].1 == w[1].1)
    }))
}
