//! Extended propositional logic programs.
//!
//! A rule has the shape `a1 | ... | ak :- b1, ..., not c1, ..., not not d1, ...`.
//! Programs are sets of rules over an explicit finite [`Signature`]; the
//! order of atoms in the signature fixes the bit encoding used by every
//! semantic operation.

mod parse;
mod render;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::limits::REPRESENTABLE_ATOMS;
use crate::semantics::Interpretation;

pub use parse::parse_program;
pub use render::render_program;

/// Set of atom names.
pub type AtomSet = BTreeSet<String>;

pub(crate) fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "not"
        && s != "bot"
}

/// An ordered, duplicate-free list of atoms. Atom `i` is bit `i` of every
/// [`Interpretation`] built over this signature.
#[derive(Clone, Default)]
pub struct Signature {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Signature {
    pub fn new<I, S>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut sig = Signature::default();
        for atom in atoms {
            sig.push(atom.into())?;
        }
        Ok(sig)
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    fn push(&mut self, atom: String) -> Result<()> {
        if !is_atom_name(&atom) {
            return Err(Error::InvalidAtomName(atom));
        }
        if self.index.contains_key(&atom) {
            return Err(Error::DuplicateAtom(atom));
        }
        if self.atoms.len() >= REPRESENTABLE_ATOMS {
            return Err(Error::SignatureTooLarge {
                size: self.atoms.len() + 1,
                cap: REPRESENTABLE_ATOMS,
            });
        }
        self.index.insert(atom.clone(), self.atoms.len());
        self.atoms.push(atom);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.index.contains_key(atom)
    }

    /// Mask with every atom of the signature set.
    pub fn full(&self) -> Interpretation {
        Interpretation(crate::bits::full(self.len()))
    }

    /// Atoms of `self` followed by the atoms of `other` not already present.
    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        for atom in &other.atoms {
            if !out.contains(atom) {
                out.push(atom.clone()).expect("atom names already validated");
            }
        }
        out
    }

    /// The signature with the atoms of `mask` removed, order preserved.
    pub fn without(&self, mask: Interpretation) -> Signature {
        let kept = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask.0 & (1 << i) == 0)
            .map(|(_, a)| a.clone());
        Signature::new(kept).expect("subsequence of a valid signature")
    }

    pub fn is_superset_of(&self, other: &Signature) -> bool {
        other.atoms.iter().all(|a| self.contains(a))
    }

    /// Encodes a set of atom names. Fails on atoms outside the signature.
    pub fn mask<'a, I>(&self, atoms: I) -> Result<Interpretation>
    where
        I: IntoIterator<Item = &'a String>,
    {
        let mut bits = 0u32;
        for atom in atoms {
            let i = self.index_of(atom).ok_or_else(|| Error::UnknownAtom {
                atom: atom.clone(),
            })?;
            bits |= 1 << i;
        }
        Ok(Interpretation(bits))
    }

    /// Like [`Signature::mask`] but silently drops unknown atoms.
    pub fn mask_lenient<'a, I>(&self, atoms: I) -> Interpretation
    where
        I: IntoIterator<Item = &'a String>,
    {
        Interpretation(
            atoms
                .into_iter()
                .filter_map(|a| self.index_of(a))
                .fold(0, |acc, i| acc | (1 << i)),
        )
    }

    pub fn names(&self, mask: Interpretation) -> Vec<&str> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask.0 & (1 << i) != 0)
            .map(|(_, a)| a.as_str())
            .collect()
    }

    pub fn atom_set(&self, mask: Interpretation) -> AtomSet {
        self.names(mask).into_iter().map(String::from).collect()
    }

    /// Renders `mask` as `{a,b}`.
    pub fn show(&self, mask: Interpretation) -> String {
        format!("{{{}}}", self.names(mask).join(","))
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for Signature {}

impl Hash for Signature {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.atoms.hash(state);
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature{:?}", self.atoms)
    }
}

/// `head :- pos, not neg, not not nneg`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: AtomSet,
    pub pos: AtomSet,
    pub neg: AtomSet,
    pub nneg: AtomSet,
}

fn set_of(atoms: &[&str]) -> AtomSet {
    atoms.iter().map(|a| a.to_string()).collect()
}

impl Rule {
    pub fn new(head: &[&str], pos: &[&str], neg: &[&str], nneg: &[&str]) -> Self {
        Rule {
            head: set_of(head),
            pos: set_of(pos),
            neg: set_of(neg),
            nneg: set_of(nneg),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &String> {
        self.head
            .iter()
            .chain(&self.pos)
            .chain(&self.neg)
            .chain(&self.nneg)
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn class(&self) -> ProgramClass {
        if !self.nneg.is_empty() {
            ProgramClass::Extended
        } else if self.head.len() > 1 {
            ProgramClass::Disjunctive
        } else if !self.neg.is_empty() {
            ProgramClass::Normal
        } else if !self.pos.is_empty() {
            ProgramClass::Horn
        } else {
            ProgramClass::FactOnly
        }
    }

    pub fn compile(&self, sig: &Signature) -> Result<RuleMask> {
        Ok(RuleMask {
            head: sig.mask(&self.head)?.0,
            pos: sig.mask(&self.pos)?.0,
            neg: sig.mask(&self.neg)?.0,
            nneg: sig.mask(&self.nneg)?.0,
        })
    }

    pub fn from_mask(mask: RuleMask, sig: &Signature) -> Rule {
        let set = |m: u32| sig.atom_set(Interpretation(m));
        Rule {
            head: set(mask.head),
            pos: set(mask.pos),
            neg: set(mask.neg),
            nneg: set(mask.nneg),
        }
    }
}

/// A rule encoded over a signature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleMask {
    pub head: u32,
    pub pos: u32,
    pub neg: u32,
    pub nneg: u32,
}

impl RuleMask {
    /// Classical body satisfaction, `not` read as classical negation.
    #[inline]
    pub fn body_holds(&self, i: u32) -> bool {
        self.pos & !i == 0 && self.neg & i == 0 && self.nneg & !i == 0
    }

    #[inline]
    pub fn satisfied_by(&self, i: u32) -> bool {
        !self.body_holds(i) || self.head & i != 0
    }

    /// Whether the rule survives in the reduct w.r.t. `there`.
    #[inline]
    pub fn survives_reduct(&self, there: u32) -> bool {
        self.neg & there == 0 && self.nneg & !there == 0
    }

    /// Satisfaction of the reduct rule `head :- pos` by `here`.
    #[inline]
    pub fn reduct_satisfied_by(&self, here: u32) -> bool {
        self.pos & !here != 0 || self.head & here != 0
    }

    pub fn atoms(&self) -> u32 {
        self.head | self.pos | self.neg | self.nneg
    }
}

/// Syntactic program classes, ordered by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProgramClass {
    FactOnly,
    Horn,
    Normal,
    Disjunctive,
    Extended,
}

impl ProgramClass {
    pub fn contains(self, other: ProgramClass) -> bool {
        other <= self
    }

    pub fn name(self) -> &'static str {
        match self {
            ProgramClass::FactOnly => "fact-only",
            ProgramClass::Horn => "horn",
            ProgramClass::Normal => "normal",
            ProgramClass::Disjunctive => "disjunctive",
            ProgramClass::Extended => "extended",
        }
    }
}

impl fmt::Display for ProgramClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    rules: BTreeSet<Rule>,
    signature: Option<Signature>,
}

impl Program {
    pub fn new<I: IntoIterator<Item = Rule>>(rules: I) -> Self {
        Program {
            rules: rules.into_iter().collect(),
            signature: None,
        }
    }

    pub fn empty() -> Self {
        Program::default()
    }

    /// Fixes the ambient signature. Every atom of every rule must belong to it.
    pub fn with_signature(mut self, sig: Signature) -> Result<Self> {
        for atom in self.rules.iter().flat_map(Rule::atoms) {
            if !sig.contains(atom) {
                return Err(Error::UnknownAtom { atom: atom.clone() });
            }
        }
        self.signature = Some(sig);
        Ok(self)
    }

    pub fn without_signature(mut self) -> Self {
        self.signature = None;
        self
    }

    pub fn rules(&self) -> &BTreeSet<Rule> {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn declared_signature(&self) -> Option<&Signature> {
        self.signature.as_ref()
    }

    /// The declared signature if any, otherwise `A(P)`.
    pub fn signature(&self) -> Signature {
        match &self.signature {
            Some(sig) => sig.clone(),
            None => atoms_of(self),
        }
    }

    pub fn insert(&mut self, rule: Rule) -> bool {
        if let Some(sig) = &self.signature {
            if rule.atoms().any(|a| !sig.contains(a)) {
                self.signature = Some(sig.union(&atoms_of(&Program::new([rule.clone()]))));
            }
        }
        self.rules.insert(rule)
    }

    pub fn remove(&mut self, rule: &Rule) -> bool {
        self.rules.remove(rule)
    }

    /// Set union of the rules. Declared signatures are merged when present.
    pub fn union(&self, other: &Program) -> Program {
        let rules = self.rules.union(&other.rules).cloned().collect();
        let signature = match (&self.signature, &other.signature) {
            (Some(a), Some(b)) => Some(a.union(b)),
            (Some(a), None) => Some(a.union(&atoms_of(other))),
            (None, Some(b)) => Some(atoms_of(self).union(b)),
            (None, None) => None,
        };
        Program { rules, signature }
    }

    pub fn compile(&self, sig: &Signature) -> Result<Vec<RuleMask>> {
        self.rules.iter().map(|r| r.compile(sig)).collect()
    }
}

impl FromIterator<Rule> for Program {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        Program::new(iter)
    }
}

/// `A(P)`: the atoms occurring in some rule, in lexicographic order.
pub fn atoms_of(program: &Program) -> Signature {
    let atoms: BTreeSet<&String> = program.rules.iter().flat_map(Rule::atoms).collect();
    Signature::new(atoms.into_iter().cloned()).expect("rule atoms are valid names")
}

/// The tightest class containing every rule of the program.
pub fn classify(program: &Program) -> ProgramClass {
    program
        .rules
        .iter()
        .map(Rule::class)
        .max()
        .unwrap_or(ProgramClass::FactOnly)
}
