//! Command-line front end.
//!
//! Exit codes: 0 success (or "equivalent", or Ω not satisfied), 1 not
//! equivalent or matrix mismatch, 2 usage, parse or input errors, 3 Ω
//! satisfied, 4 closure enumeration cap exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forgetting::{self, families, least_element, minimize, omega, omega_to_json, synthesize};
use crate::properties::{
    check_matrix, default_corpus, load_corpus, matrix_to_json, random_corpus, shrink, write_witness,
    GeneratorConfig, Property, Witness,
};
use crate::relativized::{v_ht_models, VhtAlgorithm};
use crate::semantics::{common_signature, ht_models, HtModelSet};
use crate::syntax::{parse_program, render_program, AtomSet, Program, Signature};
use crate::{ForgettingInstance, OperatorKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_OMEGA: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "htforget", version, about = "Forget atoms from answer-set programs under HT semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Ht,
    Vht,
    As,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Sp,
    R,
    M,
    Closure,
}

impl From<Op> for OperatorKind {
    fn from(op: Op) -> Self {
        match op {
            Op::Sp => OperatorKind::Sp,
            Op::R => OperatorKind::R,
            Op::M => OperatorKind::M,
            Op::Closure => OperatorKind::Closure,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Strong,
    Relativized,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print HT-models, V-HT-models or answer sets.
    Models {
        /// Program file, or `-` for standard input.
        file: PathBuf,
        #[arg(long, value_enum, default_value = "ht")]
        kind: ModelKind,
        /// Comma-separated atoms to forget (required for `vht`).
        #[arg(long)]
        forget: Option<String>,
        /// Extra atoms to include in the signature.
        #[arg(long)]
        sig: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Forget atoms and print a result program.
    Forget {
        file: PathBuf,
        #[arg(long)]
        forget: String,
        #[arg(long, value_enum, default_value = "m")]
        op: Op,
        /// Reduce the result to a small strongly equivalent program.
        #[arg(long)]
        minimize: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Same as `forget --op closure`.
    Closure {
        file: PathBuf,
        #[arg(long)]
        forget: String,
        #[arg(long)]
        minimize: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decide whether forgetting must give up strong persistence.
    Omega {
        file: PathBuf,
        #[arg(long, default_value = "")]
        forget: String,
        /// Also print every non-empty family.
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare two programs for strong or relativized equivalence.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "strong")]
        mode: Mode,
        #[arg(long)]
        forget: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check the property matrix on a corpus and print it as JSON.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random instances.
        #[arg(long, default_value_t = 200)]
        size: usize,
        /// Atoms available to the generator.
        #[arg(long, default_value_t = 4)]
        atoms: usize,
        /// Comma-separated property names (default: all).
        #[arg(long)]
        props: Option<String>,
        /// Comma-separated operators (default: sp,r,m).
        #[arg(long)]
        ops: Option<String>,
        /// Maximum number of rules in added programs.
        #[arg(long, default_value_t = 2)]
        bound: usize,
        /// Write one shrunk witness per violated cell below this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use the witness directories below this path as the corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Leave the built-in golden instances out of the random corpus.
        #[arg(long)]
        no_golden: bool,
    },
    /// Turn an HT-model set given as JSON into a program.
    Synth {
        file: PathBuf,
        #[arg(long)]
        minimize: bool,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let closure = matches!(
        cli.command,
        Command::Closure { .. } | Command::Forget { op: Op::Closure, .. }
    );
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::SignatureTooLarge { .. } if closure => EXIT_CAP,
                _ => EXIT_ERROR,
            }
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Models {
            file,
            kind,
            forget,
            sig,
            format,
        } => cmd_models(&file, kind, forget.as_deref(), sig.as_deref(), format, out),
        Command::Forget {
            file,
            forget,
            op,
            minimize,
            format,
        } => cmd_forget(&file, &forget, op.into(), minimize, format, out, err),
        Command::Closure {
            file,
            forget,
            minimize,
            format,
        } => cmd_forget(&file, &forget, OperatorKind::Closure, minimize, format, out, err),
        Command::Omega {
            file,
            forget,
            explain,
            format,
        } => cmd_omega(&file, &forget, explain, format, out, err),
        Command::Equiv {
            first,
            second,
            mode,
            forget,
            format,
        } => cmd_equiv(&first, &second, mode, forget.as_deref(), format, out),
        Command::Check {
            seed,
            size,
            atoms,
            props,
            ops,
            bound,
            out: dir,
            corpus,
            no_golden,
        } => {
            let cfg = GeneratorConfig {
                atoms,
                seed,
                ..Default::default()
            };
            let options = CheckOptions {
                props: props.as_deref(),
                ops: ops.as_deref(),
                bound,
                out: dir.as_deref(),
                corpus: corpus.as_deref(),
                golden: !no_golden,
            };
            cmd_check(&cfg, size, &options, out, err)
        }
        Command::Synth { file, minimize: min } => {
            let value: Value = serde_json::from_str(&read_input(&file)?)
                .map_err(|e| Error::Witness(format!("invalid JSON: {e}")))?;
            let target = HtModelSet::from_json(&value)?;
            let sig = target.signature().clone();
            let mut program = synthesize(&target, &sig)?;
            if min {
                program = minimize(&program, &sig)?;
            }
            write!(out, "{}", render_program(&program))?;
            Ok(EXIT_OK)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn read_program(path: &Path) -> Result<Program> {
    parse_program(&read_input(path)?)
}

/// Splits a comma-separated list of atom names, checking each name.
fn atom_list(text: &str) -> Result<AtomSet> {
    let atoms: Vec<&str> = text.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    Signature::new(atoms.iter().copied())?;
    Ok(atoms.into_iter().map(String::from).collect())
}

/// Keeps the atoms of `forget` that occur in `sig`, warning about the rest.
fn known_atoms(forget: AtomSet, sig: &Signature, err: &mut dyn Write) -> Result<AtomSet> {
    let (known, unknown): (AtomSet, AtomSet) = forget.into_iter().partition(|a| sig.contains(a));
    if !unknown.is_empty() {
        let names: Vec<&str> = unknown.iter().map(String::as_str).collect();
        writeln!(err, "warning: ignoring atoms not in the program: {}", names.join(","))?;
    }
    Ok(known)
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn cmd_models(
    file: &Path,
    kind: ModelKind,
    forget: Option<&str>,
    extra: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    let forget = forget.map(atom_list).transpose()?;
    let extra = extra.map(atom_list).transpose()?.unwrap_or_default();
    if kind == ModelKind::Vht && forget.is_none() {
        return Err(Error::InvalidConfig("--kind vht requires --forget".into()));
    }
    let program = read_program(file)?;
    let mut sig = program.signature().union(&Signature::new(extra.iter())?);
    if let Some(v) = &forget {
        sig = sig.union(&Signature::new(v.iter())?);
    }
    let models = ht_models(&program, &sig)?;
    let (text, value) = match kind {
        ModelKind::Ht => (models.to_string(), models.to_json()),
        ModelKind::As => {
            let answer_sets = models.answer_sets();
            let value = json!({"signature": sig.atoms(), "answer_sets": answer_sets.to_json_list()});
            (answer_sets.to_string(), value)
        }
        ModelKind::Vht => {
            let v = sig.mask(forget.as_ref().expect("checked above"))?;
            let vht = v_ht_models(&program, v, &sig, VhtAlgorithm::ViaHt)?;
            (vht.to_string(), vht.to_json())
        }
    };
    match format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Json => print_json(out, &value)?,
    }
    Ok(EXIT_OK)
}

fn instance(file: &Path, forget: &str, err: &mut dyn Write) -> Result<ForgettingInstance> {
    let forget = atom_list(forget)?;
    let program = read_program(file)?;
    let forget = known_atoms(forget, &program.signature(), err)?;
    ForgettingInstance::new(program, &forget, None)
}

fn cmd_forget(
    file: &Path,
    forget: &str,
    kind: OperatorKind,
    min: bool,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    if atom_list(forget)?.is_empty() {
        return Err(Error::InvalidConfig("--forget needs at least one atom".into()));
    }
    let inst = instance(file, forget, err)?;
    let remaining = inst.remaining();
    let mut result = forgetting::forget(&inst, kind)?;
    if min {
        result = minimize(&result, &remaining)?;
    }
    let text = render_program(&result);
    match format {
        Format::Text => write!(out, "{text}")?,
        Format::Json => {
            let models = ht_models(&result, &remaining)?;
            print_json(
                out,
                &json!({
                    "operator": kind.name(),
                    "forget": inst.forget_atoms(),
                    "program": text,
                    "models": models.to_json(),
                }),
            )?
        }
    }
    Ok(EXIT_OK)
}

fn cmd_omega(
    file: &Path,
    forget: &str,
    explain: bool,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let inst = instance(file, forget, err)?;
    let verdict = omega(&inst);
    let sig = inst.ambient();
    match format {
        Format::Json => print_json(out, &omega_to_json(&inst, &verdict, explain))?,
        Format::Text => {
            match verdict.witness {
                Some(y) => writeln!(out, "omega: true, witness Y={}", sig.show(y))?,
                None => writeln!(out, "omega: false")?,
            }
            if explain {
                for family in families(&inst) {
                    let sets: Vec<String> = family
                        .sets()
                        .iter()
                        .map(|set| {
                            let members: Vec<String> = set.iter().map(|x| sig.show(*x)).collect();
                            format!("{{{}}}", members.join(","))
                        })
                        .collect();
                    let least = if least_element(&family).is_some() { "" } else { " (no least element)" };
                    writeln!(out, "  Y={}: {}{least}", sig.show(family.base()), sets.join(" "))?;
                }
            }
        }
    }
    Ok(if verdict.satisfied { EXIT_OMEGA } else { EXIT_OK })
}

fn cmd_equiv(
    first: &Path,
    second: &Path,
    mode: Mode,
    forget: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    let forget = forget.map(atom_list).transpose()?;
    if mode == Mode::Relativized && forget.is_none() {
        return Err(Error::InvalidConfig("--mode relativized requires --forget".into()));
    }
    let p = read_program(first)?;
    let q = read_program(second)?;
    let mut sig = common_signature(&p, &q);
    if let Some(v) = &forget {
        sig = sig.union(&Signature::new(v.iter())?);
    }
    let (mp, mq) = (ht_models(&p, &sig)?, ht_models(&q, &sig)?);
    let (left, right) = match mode {
        Mode::Strong => (mp.pairs().clone(), mq.pairs().clone()),
        Mode::Relativized => {
            let v = sig.mask(forget.as_ref().expect("checked above"))?;
            let a = crate::relativized::v_ht_models_of(&mp, v);
            let b = crate::relativized::v_ht_models_of(&mq, v);
            (a.pairs().clone(), b.pairs().clone())
        }
    };
    let witness = left.symmetric_difference(&right).next().copied();
    let mode_name = match mode {
        Mode::Strong => "strong",
        Mode::Relativized => "relativized",
    };
    match format {
        Format::Json => print_json(
            out,
            &json!({
                "mode": mode_name,
                "signature": sig.atoms(),
                "equivalent": witness.is_none(),
                "witness": witness.map(|w| json!({
                    "pair": [sig.names(w.here), sig.names(w.there)],
                    "model_of": if left.contains(&w) { first.display().to_string() } else { second.display().to_string() },
                })),
            }),
        )?,
        Format::Text => match witness {
            None => writeln!(out, "equivalent")?,
            Some(w) => {
                let owner = if left.contains(&w) { first } else { second };
                writeln!(
                    out,
                    "not equivalent: {} is a model of {} only",
                    w.show(&sig),
                    owner.display()
                )?
            }
        },
    }
    Ok(if witness.is_none() { EXIT_OK } else { EXIT_NEGATIVE })
}

struct CheckOptions<'a> {
    props: Option<&'a str>,
    ops: Option<&'a str>,
    bound: usize,
    out: Option<&'a Path>,
    corpus: Option<&'a Path>,
    golden: bool,
}

fn name_list<T: std::str::FromStr<Err = Error>>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

fn cmd_check(
    cfg: &GeneratorConfig,
    size: usize,
    options: &CheckOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let props: Vec<Property> = match options.props {
        Some(list) => name_list(list)?,
        None => Property::ALL.to_vec(),
    };
    let kinds: Vec<OperatorKind> = match options.ops {
        Some(list) => name_list(list)?,
        None => OperatorKind::MODEL_BASED.to_vec(),
    };
    if props.is_empty() || kinds.is_empty() {
        return Err(Error::InvalidConfig("empty property or operator list".into()));
    }
    if let Some(kind) = kinds.iter().find(|k| **k == OperatorKind::Closure) {
        return Err(Error::UnsupportedOperator(kind.name().into()));
    }
    cfg.validate()?;
    let corpus = match options.corpus {
        Some(dir) => load_corpus(dir)?,
        None if options.golden => default_corpus(cfg, size)?,
        None => random_corpus(cfg, size)?,
    };
    let reports = check_matrix(&props, &kinds, &corpus, options.bound)?;
    if let Some(dir) = options.out {
        for report in &reports {
            let Some(violation) = report.violations.first() else { continue };
            let small = shrink(&Witness::from_violation(report.property, report.kind, violation));
            let shrunk = crate::properties::Violation {
                program: small.program,
                forget: small.forget,
                partner: small.partner,
                context: small.context,
                ..violation.clone()
            };
            let name = format!("{}-{}", report.property.name().to_lowercase(), report.kind.name());
            let path = write_witness(dir, &name, report.property, report.kind, &shrunk)?;
            writeln!(err, "wrote {}", path.display())?;
        }
    }
    let value = matrix_to_json(&reports, corpus.len(), options.bound);
    print_json(out, &value)?;
    Ok(if value["matches_expected"] == Value::Bool(true) { EXIT_OK } else { EXIT_NEGATIVE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["htforget"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let path = dir.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }

    #[test]
    fn atom_lists() {
        assert!(atom_list("").unwrap().is_empty());
        assert_eq!(atom_list(" a, b ,").unwrap().len(), 2);
        assert!(atom_list("A").is_err());
    }

    #[test]
    fn flag_errors_exit_two() {
        assert_eq!(run_str(&["models"]).0, EXIT_ERROR);
        assert_eq!(run_str(&["models", "x.lp", "--kind", "nope"]).0, EXIT_ERROR);
        assert_eq!(run_str(&["models", "/nonexistent.lp"]).0, EXIT_ERROR);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn vht_needs_forget() {
        let dir = tempfile::tempdir().unwrap();
        let p = file(&dir, "p.lp", "a :- p. p :- not not p.");
        assert_eq!(run_str(&["models", &p, "--kind", "vht"]).0, EXIT_ERROR);
        let (code, out, _) = run_str(&["models", &p, "--kind", "vht", "--forget", "p"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("<{},{}>"));
    }

    #[test]
    fn unknown_forget_atoms_warn() {
        let dir = tempfile::tempdir().unwrap();
        let p = file(&dir, "p.lp", "a :- p. p :- not not p.");
        let (code, out, err) = run_str(&["forget", &p, "--forget", "p,zz", "--op", "sp", "--minimize"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "a :- not not a.\n");
        assert!(err.contains("zz"));
        assert_eq!(run_str(&["forget", &p, "--forget", ""]).0, EXIT_ERROR);
    }

    #[test]
    fn synth_from_json() {
        let dir = tempfile::tempdir().unwrap();
        let models = r#"{"signature": ["a"], "ht_models": [[[], []], [["a"], ["a"]]]}"#;
        let f = file(&dir, "m.json", models);
        let (code, out, _) = run_str(&["synth", &f, "--minimize"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "a :- not not a.\n");
        let f = file(&dir, "bad.json", r#"{"signature": ["a"], "ht_models": [[[], ["a"]]]}"#);
        assert_eq!(run_str(&["synth", &f]).0, EXIT_ERROR);
    }
}
