//! Clause text format.
//!
//! ```text
//! % comment
//! 1 : P(0,0,0,0).
//! -P(x1,x2,x3,0) | P(x1,x2,x3,1).
//! ```
//!
//! `-`, `~` or `¬` negate; `|` or `∨` separate literals; `.` ends a clause.
//! An optional `<number> :` prefix sets the clause id, otherwise ids are
//! assigned sequentially. Identifiers starting with `x y z u v w` are
//! variables, everything else is a constant. `⊥` is the empty clause.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::term::{Atom, Clause, ClauseId, Literal, Term};
use crate::parse_error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Not,
    Or,
    Dot,
    Colon,
    Bottom,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let simple = match c {
                '%' | '#' => break,
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                '-' | '~' | '¬' => Some(Tok::Not),
                '|' | '∨' => Some(Tok::Or),
                '.' => Some(Tok::Dot),
                ':' => Some(Tok::Colon),
                '⊥' => Some(Tok::Bottom),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Spanned {
                    tok,
                    line: li + 1,
                    column,
                });
                i += 1;
                continue;
            }
            if is_ident_char(c) && c != '\'' {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: li + 1,
                    column,
                });
                continue;
            }
            return Err(ParseError::new(
                li + 1,
                column,
                format!("unexpected character '{c}'"),
            ));
        }
    }
    Ok(out)
}

type Pos = (usize, usize);

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: Pos,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        let toks = lex(text)?;
        let lines = text.lines().count().max(1);
        let last_len = text.lines().last().map_or(0, |l| l.chars().count());
        Ok(Parser {
            toks,
            pos: 0,
            end: (lines, last_len + 1),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn here(&self) -> Pos {
        self.toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.column))
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let pred = self.ident("predicate symbol")?;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            loop {
                let name = self.ident("term")?;
                args.push(Term::from_ident(&name));
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
        }
        Ok(Atom::new(&pred, args))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let mut positive = true;
        while self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            positive = !positive;
        }
        let atom = self.atom()?;
        Ok(Literal { positive, atom })
    }

    fn literals(&mut self) -> Result<Vec<Literal>, ParseError> {
        if self.peek() == Some(&Tok::Bottom) {
            self.pos += 1;
            return Ok(Vec::new());
        }
        let mut lits = vec![self.literal()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    /// Optional `<digits> :` prefix, with its line and column.
    fn clause_id(&mut self) -> Result<Option<(ClauseId, Pos)>, ParseError> {
        if let (Some(Tok::Ident(s)), Some(Tok::Colon)) = (self.peek(), self.peek_at(1)) {
            let at = self.here();
            let id = s
                .parse::<ClauseId>()
                .map_err(|_| self.error(format!("invalid clause id '{s}'")))?;
            self.pos += 2;
            return Ok(Some((id, at)));
        }
        Ok(None)
    }
}

/// Parses a whole problem. Rejects duplicate clause ids and predicates
/// used with inconsistent arities.
pub fn parse_problem(text: &str) -> Result<Vec<Clause>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut ids = BTreeSet::new();
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    let mut next_id: ClauseId = 1;
    while p.peek().is_some() {
        let start = p.here();
        let explicit = p.clause_id()?;
        let lit_start = p.pos;
        let literals = p.literals()?;
        p.expect(Tok::Dot, "'.' or '|'")?;
        for (k, l) in literals.iter().enumerate() {
            let known = arities
                .entry(l.atom.predicate.to_string())
                .or_insert(l.atom.arity());
            if *known != l.atom.arity() {
                // point at the offending literal's first token
                let tok = p.toks[lit_start..]
                    .iter()
                    .filter(|s| matches!(s.tok, Tok::Ident(_)))
                    .find(|s| matches!(&s.tok, Tok::Ident(n) if *n == *l.atom.predicate))
                    .map_or(start, |s| (s.line, s.column));
                return Err(ParseError::new(
                    tok.0,
                    tok.1,
                    format!(
                        "predicate {} used with arity {} (literal {}), expected {}",
                        l.atom.predicate,
                        l.atom.arity(),
                        k + 1,
                        known
                    ),
                ));
            }
        }
        let (id, at) = match explicit {
            Some((id, at)) => (id, at),
            None => (next_id, start),
        };
        if !ids.insert(id) {
            return Err(ParseError::new(
                at.0,
                at.1,
                format!("duplicate clause id {id}"),
            ));
        }
        next_id = next_id.max(id + 1);
        clauses.push(Clause::new(id, literals));
    }
    Ok(clauses)
}

/// Parses a single clause body (no id, optional trailing `.`), id 0.
pub fn parse_clause(text: &str) -> Result<Clause, ParseError> {
    let mut p = Parser::new(text)?;
    let literals = p.literals()?;
    if p.peek() == Some(&Tok::Dot) {
        p.pos += 1;
    }
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(Clause::new(0, literals))
}

pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let mut p = Parser::new(text)?;
    let a = p.atom()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(a)
}

/// Prints one clause in the text format, `<id>: <literals>.`
pub fn print_clause(c: &Clause) -> String {
    let mut s = format!("{}: ", c.id);
    if c.literals.is_empty() {
        s.push('⊥');
    }
    for (i, l) in c.literals.iter().enumerate() {
        if i > 0 {
            s.push_str(" | ");
        }
        if !l.positive {
            s.push('-');
        }
        write!(s, "{}", l.atom).unwrap();
    }
    s.push('.');
    s
}

pub fn print_problem(clauses: &[Clause]) -> String {
    clauses.iter().map(|c| print_clause(c) + "\n").collect()
}
