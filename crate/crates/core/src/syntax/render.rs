use std::fmt::Write;

use super::{Program, Rule, Signature};

fn indices(sig: &Signature, atoms: &super::AtomSet) -> Vec<usize> {
    let mut idx: Vec<usize> = atoms
        .iter()
        .map(|a| sig.index_of(a).expect("atom in effective signature"))
        .collect();
    idx.sort_unstable();
    idx
}

type SortKey = (bool, Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>);

fn sort_key(sig: &Signature, rule: &Rule) -> SortKey {
    (
        rule.head.is_empty(),
        indices(sig, &rule.head),
        indices(sig, &rule.pos),
        indices(sig, &rule.neg),
        indices(sig, &rule.nneg),
    )
}

fn render_rule(out: &mut String, sig: &Signature, rule: &Rule) {
    let atoms = |set| {
        indices(sig, set)
            .into_iter()
            .map(|i| sig.atoms()[i].as_str())
            .collect::<Vec<_>>()
    };
    let head = atoms(&rule.head);
    let mut body: Vec<String> = atoms(&rule.pos).into_iter().map(String::from).collect();
    body.extend(atoms(&rule.neg).into_iter().map(|a| format!("not {a}")));
    body.extend(atoms(&rule.nneg).into_iter().map(|a| format!("not not {a}")));

    match (head.is_empty(), body.is_empty()) {
        (true, true) => out.push_str("bot."),
        (true, false) => {
            let _ = write!(out, ":- {}.", body.join(", "));
        }
        (false, true) => {
            let _ = write!(out, "{}.", head.join(" | "));
        }
        (false, false) => {
            let _ = write!(out, "{} :- {}.", head.join(" | "), body.join(", "));
        }
    }
}

/// Deterministic textual form: the `#atoms` directive when a signature is
/// declared, then one rule per line sorted by signature index.
pub fn render_program(program: &Program) -> String {
    let sig = program.signature();
    let mut out = String::new();
    if let Some(declared) = program.declared_signature() {
        if declared.is_empty() {
            out.push_str("#atoms.\n");
        } else {
            let _ = writeln!(out, "#atoms {}.", declared.atoms().join(", "));
        }
    }
    let mut rules: Vec<&Rule> = program.rules().iter().collect();
    rules.sort_by_cached_key(|r| sort_key(&sig, r));
    for rule in rules {
        render_rule(&mut out, &sig, rule);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn empty_program() {
        assert_eq!(render_program(&Program::empty()), "");
        let p = Program::empty()
            .with_signature(Signature::new(["a"]).unwrap())
            .unwrap();
        assert_eq!(render_program(&p), "#atoms a.\n");
    }

    #[test]
    fn double_negation() {
        let p = Program::new([Rule::new(&["a"], &[], &[], &["a"])]);
        assert_eq!(render_program(&p), "a :- not not a.\n");
    }

    #[test]
    fn canonical_order() {
        let p = parse_program("#atoms b, a.\n:- not a. a :- b. b | a :- not not a, not b, a. b.").unwrap();
        assert_eq!(
            render_program(&p),
            "#atoms b, a.\nb.\nb | a :- a, not b, not not a.\na :- b.\n:- not a.\n"
        );
    }

    #[test]
    fn empty_rule_round_trips() {
        let p = Program::new([Rule::default()]);
        assert_eq!(render_program(&p), "bot.\n");
        assert_eq!(parse_program(&render_program(&p)).unwrap(), p);
    }
}
