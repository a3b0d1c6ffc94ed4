//! Violation witnesses on disk.
//!
//! A witness is a directory holding `program.lp`, optionally `partner.lp`
//! and `context.lp`, and `witness.json` with the property, the operator,
//! the forgotten atoms and the two sides that differed. Program files
//! declare their signature so replay uses the same ambient atoms.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::{reevaluate, Instance, Property, Violation};
use crate::error::{Error, Result};
use crate::forgetting::OperatorKind;
use crate::syntax::{parse_program, render_program, AtomSet, Program};

#[derive(Clone, Debug)]
pub struct Witness {
    pub property: Property,
    pub kind: OperatorKind,
    pub program: Program,
    pub forget: AtomSet,
    pub partner: Option<Program>,
    pub context: Option<Program>,
    /// The recorded comparison, as written by [`write_witness`].
    pub details: Value,
}

impl Witness {
    pub fn from_violation(property: Property, kind: OperatorKind, violation: &Violation) -> Witness {
        Witness {
            property,
            kind,
            program: violation.program.clone(),
            forget: violation.forget.clone(),
            partner: violation.partner.clone(),
            context: violation.context.clone(),
            details: json!({
                "left": {"label": violation.left_label, "value": violation.left},
                "right": {"label": violation.right_label, "value": violation.right},
            }),
        }
    }

    pub fn instance(&self) -> Instance {
        Instance {
            program: self.program.clone(),
            forget: self.forget.clone(),
            partners: self.partner.iter().cloned().collect(),
        }
    }
}

fn declared(program: &Program, atoms: &crate::syntax::Signature) -> Result<Program> {
    program.clone().without_signature().with_signature(atoms.clone())
}

/// Writes the violation under `dir/name` and returns that path.
pub fn write_witness(
    dir: &Path,
    name: &str,
    property: Property,
    kind: OperatorKind,
    violation: &Violation,
) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::create_dir_all(&path)?;
    let ambient = violation.program.signature();
    fs::write(path.join("program.lp"), render_program(&declared(&violation.program, &ambient)?))?;
    if let Some(partner) = &violation.partner {
        fs::write(path.join("partner.lp"), render_program(&declared(partner, &ambient)?))?;
    }
    if let Some(context) = &violation.context {
        let v = ambient.mask(&violation.forget)?;
        let remaining = ambient.without(v);
        fs::write(path.join("context.lp"), render_program(&declared(context, &remaining)?))?;
    }
    let meta = json!({
        "property": property.name(),
        "operator": kind.name(),
        "forget": violation.forget,
        "left": {"label": violation.left_label, "value": violation.left},
        "right": {"label": violation.right_label, "value": violation.right},
    });
    let text = serde_json::to_string_pretty(&meta).map_err(|e| Error::Witness(e.to_string()))?;
    fs::write(path.join("witness.json"), text + "\n")?;
    Ok(path)
}

fn read_program(path: &Path) -> Result<Program> {
    parse_program(&fs::read_to_string(path)?)
}

fn read_optional(path: &Path) -> Result<Option<Program>> {
    if path.exists() {
        read_program(path).map(Some)
    } else {
        Ok(None)
    }
}

pub fn read_witness(dir: &Path) -> Result<Witness> {
    let text = fs::read_to_string(dir.join("witness.json"))?;
    let meta: Value = serde_json::from_str(&text).map_err(|e| Error::Witness(e.to_string()))?;
    let field = |key: &str| {
        meta.get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Witness(format!("missing `{key}`")))
    };
    let property: Property = field("property")?.parse()?;
    let kind: OperatorKind = field("operator")?.parse()?;
    let forget: AtomSet = meta
        .get("forget")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Witness("missing `forget`".into()))?
        .iter()
        .map(|a| {
            a.as_str()
                .map(String::from)
                .ok_or_else(|| Error::Witness("atoms must be strings".into()))
        })
        .collect::<Result<_>>()?;
    Ok(Witness {
        property,
        kind,
        program: read_program(&dir.join("program.lp"))?,
        forget,
        partner: read_optional(&dir.join("partner.lp"))?,
        context: read_optional(&dir.join("context.lp"))?,
        details: json!({"left": meta.get("left"), "right": meta.get("right")}),
    })
}

/// Whether the witness still demonstrates a violation.
pub fn replay(witness: &Witness) -> Result<bool> {
    Ok(reevaluate(
        witness.property,
        witness.kind,
        &witness.program,
        &witness.forget,
        witness.partner.as_ref(),
        witness.context.as_ref(),
    )?
    .is_some())
}

fn still_fails(w: &Witness) -> bool {
    matches!(replay(w), Ok(true))
}

fn without_rule(program: &Program, rule: &crate::syntax::Rule) -> Program {
    let mut out = program.clone();
    out.remove(rule);
    out
}

/// Greedily drops rules from the program, the partner and the context
/// while the witness keeps failing. The signature of the program stays
/// fixed so the recorded sides remain comparable.
pub fn shrink(witness: &Witness) -> Witness {
    let mut w = witness.clone();
    let ambient = w.program.signature();
    if let Ok(p) = w.program.clone().without_signature().with_signature(ambient.clone()) {
        w.program = p;
    }
    loop {
        let mut changed = false;
        for rule in w.program.rules().clone() {
            let mut trial = w.clone();
            trial.program = without_rule(&w.program, &rule);
            if still_fails(&trial) {
                w = trial;
                changed = true;
            }
        }
        for slot in [0, 1] {
            let current = if slot == 0 { &w.partner } else { &w.context };
            let Some(p) = current.clone() else { continue };
            for rule in p.rules().clone() {
                let mut trial = w.clone();
                let smaller = Some(without_rule(&p, &rule));
                if slot == 0 {
                    trial.partner = smaller;
                } else {
                    trial.context = smaller;
                }
                if still_fails(&trial) {
                    w = trial;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut trial = w.clone();
    trial.program = w.program.clone().without_signature();
    if still_fails(&trial) {
        w = trial;
    }
    w
}

/// Witness directories directly below `dir`, in name order.
pub fn witness_dirs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("witness.json").is_file())
        .collect();
    dirs.sort();
    Ok(dirs)
}

/// The instances of every witness below `dir`, partners included.
pub fn load_corpus(dir: &Path) -> Result<Vec<Instance>> {
    witness_dirs(dir)?
        .iter()
        .map(|d| read_witness(d).map(|w| w.instance()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::check_property;

    #[test]
    fn write_read_replay() {
        let program = parse_program("a :- p. b :- not p. p :- not not p.").unwrap();
        let corpus = [Instance::new(program, ["p".to_string()].into())];
        let dir = tempfile::tempdir().unwrap();
        for (prop, kind) in [(Property::SC, OperatorKind::Sp), (Property::WSP, OperatorKind::R)] {
            let report = check_property(prop, kind, &corpus, 2).unwrap();
            let name = format!("{prop}-{kind}");
            let path = write_witness(dir.path(), &name, prop, kind, &report.violations[0]).unwrap();
            let w = read_witness(&path).unwrap();
            assert_eq!(w.property, prop);
            assert_eq!(w.kind, kind);
            assert_eq!(w.program.rules(), corpus[0].program.rules());
            assert!(replay(&w).unwrap());
        }
        assert_eq!(load_corpus(dir.path()).unwrap().len(), 2);
    }

    #[test]
    fn malformed_witness() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("witness.json"), "{\"property\": \"nope\"}").unwrap();
        assert!(read_witness(dir.path()).is_err());
    }
}
