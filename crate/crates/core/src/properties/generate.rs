//! Seeded random programs and forgetting instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::syntax::{AtomSet, Program, ProgramClass, Rule};

const ATOM_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    /// Number of atoms to draw from (`a`, `b`, ...).
    pub atoms: usize,
    pub min_rules: usize,
    pub max_rules: usize,
    pub p_head: f64,
    pub p_pos: f64,
    pub p_neg: f64,
    pub p_nneg: f64,
    /// Chance that an atom also gets the choice rule `x :- not not x`
    /// (extended class only). Without these, instances where forgetting
    /// must give up strong persistence are very rare.
    pub p_choice: f64,
    /// Generated rules are cut down to this class.
    pub class: ProgramClass,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            atoms: 4,
            min_rules: 1,
            max_rules: 5,
            p_head: 0.3,
            p_pos: 0.2,
            p_neg: 0.2,
            p_nneg: 0.12,
            p_choice: 0.3,
            class: ProgramClass::Extended,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.atoms == 0 || self.atoms > ATOM_NAMES.len() {
            return bad(format!("atoms must be between 1 and {}", ATOM_NAMES.len()));
        }
        if self.min_rules > self.max_rules {
            return bad("min_rules exceeds max_rules".into());
        }
        for (name, p) in [
            ("p_head", self.p_head),
            ("p_pos", self.p_pos),
            ("p_neg", self.p_neg),
            ("p_nneg", self.p_nneg),
            ("p_choice", self.p_choice),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// The same configuration with the seed for the `index`-th corpus item.
    pub fn for_index(&self, index: usize) -> GeneratorConfig {
        GeneratorConfig {
            seed: self
                .seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(index as u64 + 1),
            ..self.clone()
        }
    }
}

fn pick(rng: &mut impl Rng, atoms: usize, p: f64) -> AtomSet {
    ATOM_NAMES[..atoms]
        .iter()
        .filter(|_| rng.gen_bool(p))
        .map(|a| a.to_string())
        .collect()
}

fn random_rule(cfg: &GeneratorConfig, rng: &mut impl Rng) -> Rule {
    let mut rule = Rule {
        head: pick(rng, cfg.atoms, cfg.p_head),
        pos: pick(rng, cfg.atoms, cfg.p_pos),
        neg: pick(rng, cfg.atoms, cfg.p_neg),
        nneg: pick(rng, cfg.atoms, cfg.p_nneg),
    };
    if cfg.class != ProgramClass::Extended {
        rule.nneg.clear();
    }
    if cfg.class <= ProgramClass::Normal && rule.head.len() > 1 {
        let keep = rule.head.iter().nth(rng.gen_range(0..rule.head.len())).cloned();
        rule.head = keep.into_iter().collect();
    }
    if cfg.class <= ProgramClass::Horn {
        rule.neg.clear();
    }
    if cfg.class == ProgramClass::FactOnly {
        rule.pos.clear();
    }
    rule
}

/// A program drawn with `cfg.seed`; its class is at most `cfg.class`.
pub fn random_program(cfg: &GeneratorConfig) -> Program {
    random_program_with(cfg, &mut cfg.rng())
}

pub fn random_program_with(cfg: &GeneratorConfig, rng: &mut impl Rng) -> Program {
    let count = rng.gen_range(cfg.min_rules..=cfg.max_rules);
    let mut program: Program = (0..count).map(|_| random_rule(cfg, rng)).collect();
    if cfg.class == ProgramClass::Extended {
        for atom in &ATOM_NAMES[..cfg.atoms] {
            if rng.gen_bool(cfg.p_choice) {
                program.insert(Rule::new(&[atom], &[], &[], &[atom]));
            }
        }
    }
    program
}

/// A program and the atoms to forget from it. `partners` are programs the
/// pair-based properties should compare against in addition to the
/// generated ones.
#[derive(Clone, Debug)]
pub struct Instance {
    pub program: Program,
    pub forget: AtomSet,
    pub partners: Vec<Program>,
}

impl Instance {
    pub fn new(program: Program, forget: AtomSet) -> Self {
        Instance {
            program,
            forget,
            partners: Vec::new(),
        }
    }
}

/// `size` instances; each draws its program and a non-empty `V ⊆ A(P)` from
/// its own seed, so prefixes of corpora agree.
pub fn random_corpus(cfg: &GeneratorConfig, size: usize) -> Result<Vec<Instance>> {
    cfg.validate()?;
    Ok((0..size).map(|i| random_instance(&cfg.for_index(i))).collect())
}

/// One instance with a non-empty program signature and a non-empty `V`.
pub fn random_instance(cfg: &GeneratorConfig) -> Instance {
    let mut rng = cfg.rng();
    loop {
        let program = random_program_with(cfg, &mut rng);
        let atoms = program.signature();
        if atoms.is_empty() {
            continue;
        }
        let mut forget = AtomSet::new();
        while forget.is_empty() {
            forget = atoms
                .atoms()
                .iter()
                .filter(|_| rng.gen_bool(0.4))
                .cloned()
                .collect();
        }
        return Instance::new(program, forget);
    }
}
