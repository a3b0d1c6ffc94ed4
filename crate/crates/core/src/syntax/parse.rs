use std::collections::BTreeSet;

use super::{is_atom_name, AtomSet, Program, Rule, Signature};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Atoms,
    If,
    Bar,
    Comma,
    Dot,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<(Vec<Token>, (usize, usize))> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);

    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        match c {
            c if c.is_whitespace() => bump(&mut chars),
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
            }
            '|' | ',' | '.' => {
                bump(&mut chars);
                let tok = match c {
                    '|' => Tok::Bar,
                    ',' => Tok::Comma,
                    _ => Tok::Dot,
                };
                tokens.push(Token {
                    tok,
                    line: l,
                    column: col,
                });
            }
            ':' => {
                bump(&mut chars);
                if chars.peek() != Some(&'-') {
                    return Err(syntax(l, col, "expected `:-`"));
                }
                bump(&mut chars);
                tokens.push(Token {
                    tok: Tok::If,
                    line: l,
                    column: col,
                });
            }
            '#' => {
                bump(&mut chars);
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_ascii_alphanumeric() && c != '_' {
                        break;
                    }
                    word.push(c);
                    bump(&mut chars);
                }
                if word != "atoms" {
                    return Err(syntax(l, col, format!("unknown directive `#{word}`")));
                }
                tokens.push(Token {
                    tok: Tok::Atoms,
                    line: l,
                    column: col,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_ascii_alphanumeric() && c != '_' {
                        break;
                    }
                    word.push(c);
                    bump(&mut chars);
                }
                if !word.starts_with(|c: char| c.is_ascii_lowercase()) {
                    return Err(syntax(
                        l,
                        col,
                        format!("`{word}` is not a propositional atom (variables are not supported)"),
                    ));
                }
                tokens.push(Token {
                    tok: Tok::Ident(word),
                    line: l,
                    column: col,
                });
            }
            other => return Err(syntax(l, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok((tokens, (line, column)))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.eof)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.here();
        syntax(line, column, message)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn atom(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(name)) if is_atom_name(name) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            Some(Tok::Ident(name)) => Err(self.error(format!("`{name}` is a keyword, expected an atom"))),
            _ => Err(self.error("expected an atom")),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == kw)
    }

    fn directive(&mut self, declared: &mut Vec<String>) -> Result<()> {
        if self.eat(&Tok::Dot) {
            return Ok(());
        }
        loop {
            let atom = self.atom()?;
            if declared.contains(&atom) {
                return Err(self.error(format!("atom `{atom}` declared twice")));
            }
            declared.push(atom);
            if self.eat(&Tok::Dot) {
                return Ok(());
            }
            self.expect(&Tok::Comma, "`,` or `.`")?;
        }
    }

    fn rule(&mut self) -> Result<Rule> {
        let mut rule = Rule::default();
        if self.is_keyword("bot") {
            self.pos += 1;
        } else if matches!(self.peek(), Some(Tok::Ident(_))) {
            rule.head.insert(self.atom()?);
            while self.eat(&Tok::Bar) {
                rule.head.insert(self.atom()?);
            }
        }
        if self.eat(&Tok::If) {
            loop {
                self.literal(&mut rule)?;
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::Dot, "`.` at end of rule")?;
        Ok(rule)
    }

    fn literal(&mut self, rule: &mut Rule) -> Result<()> {
        let target: &mut AtomSet = if self.is_keyword("not") {
            self.pos += 1;
            if self.is_keyword("not") {
                self.pos += 1;
                &mut rule.nneg
            } else {
                &mut rule.neg
            }
        } else {
            &mut rule.pos
        };
        let atom = self.atom()?;
        target.insert(atom);
        Ok(())
    }
}

/// Parses the textual program format.
///
/// Comments start with `%`. An optional `#atoms a, b.` directive fixes the
/// signature; without it the signature is the set of atoms in the rules.
pub fn parse_program(text: &str) -> Result<Program> {
    let (tokens, eof) = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        eof,
    };
    let mut rules = BTreeSet::new();
    let mut declared: Option<Vec<String>> = None;
    while parser.peek().is_some() {
        if parser.eat(&Tok::Atoms) {
            parser.directive(declared.get_or_insert_with(Vec::new))?;
        } else {
            rules.insert(parser.rule()?);
        }
    }
    let program = Program {
        rules,
        signature: None,
    };
    match declared {
        Some(atoms) => program.with_signature(Signature::new(atoms)?),
        None => Ok(program),
    }
}
