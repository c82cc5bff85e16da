//! Text format: one inequation per line, `lhs REL rhs` with linear
//! expressions on both sides, e.g. `1 - 1*x - 1*y <= 0` or `2x < y + 3`.
//! `%` and `#` start comments.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::scalar::Scalar;
use super::system::{Bound, LiaSystem, LinIneq, Rel};
use super::LiaError;
use crate::parse_error::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Rel(Rel),
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '%' || c == '#' {
            break;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('<', Some('=')) => (Tok::Rel(Rel::Le), 2),
            ('>', Some('=')) => (Tok::Rel(Rel::Ge), 2),
            ('<', _) => (Tok::Rel(Rel::Lt), 1),
            ('>', _) => (Tok::Rel(Rel::Gt), 1),
            ('≤', _) => (Tok::Rel(Rel::Le), 1),
            ('≥', _) => (Tok::Rel(Rel::Ge), 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) | ('−', _) => (Tok::Minus, 1),
            ('*', _) | ('·', _) => (Tok::Star, 1),
            _ => {
                return Err(ParseError::new(
                    lineno,
                    col,
                    format!("unexpected character '{c}'"),
                ))
            }
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

/// A side of a relation: variable coefficients and a constant.
type Linear = (Vec<(String, BigInt)>, BigInt);

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn linear(&mut self) -> Result<Linear, ParseError> {
        let mut vars = Vec::new();
        let mut constant = BigInt::zero();
        let mut first = true;
        loop {
            let mut sign = BigInt::one();
            match self.peek() {
                Some(Tok::Plus) if !first => self.pos += 1,
                Some(Tok::Minus) => {
                    sign = -sign;
                    self.pos += 1;
                }
                _ if first => {}
                _ => break,
            }
            first = false;
            match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    self.pos += 1;
                    if self.peek() == Some(&Tok::Star) {
                        self.pos += 1;
                    }
                    if let Some(Tok::Ident(v)) = self.peek().cloned() {
                        self.pos += 1;
                        vars.push((v, sign * k));
                    } else if self.toks.get(self.pos - 1).map(|(t, _)| t) == Some(&Tok::Star) {
                        return Err(self.err("expected a variable after '*'"));
                    } else {
                        constant += sign * k;
                    }
                }
                Some(Tok::Ident(v)) => {
                    self.pos += 1;
                    vars.push((v, sign));
                }
                _ => return Err(self.err("expected a number or a variable")),
            }
        }
        Ok((vars, constant))
    }
}

fn convert<T: Scalar>(b: &BigInt, line: usize, col: usize) -> Result<T, ParseError> {
    T::from_big(b).ok_or_else(|| ParseError::new(line, col, format!("{b} is out of range")))
}

/// Parses one relation and normalizes it to `Σ aᵢxᵢ + c ≤ 0`.
pub fn parse_ineq_line<T: Scalar>(line: &str, lineno: usize) -> Result<LinIneq<T>, ParseError> {
    let toks = lex(line, lineno)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        line: lineno,
        end_col: line.chars().count() + 1,
    };
    let lhs = p.linear()?;
    let Some(Tok::Rel(rel)) = p.peek().cloned() else {
        return Err(p.err("expected one of <=, <, >=, >"));
    };
    p.pos += 1;
    let rhs = p.linear()?;
    if p.pos < toks.len() {
        return Err(p.err("unexpected input after the inequation"));
    }
    // e = lhs − rhs
    let mut vars = lhs.0;
    vars.extend(rhs.0.into_iter().map(|(v, a)| (v, -a)));
    let mut constant = lhs.1 - rhs.1;
    let flip = matches!(rel, Rel::Ge | Rel::Gt);
    if flip {
        vars.iter_mut().for_each(|(_, a)| *a = -a.clone());
        constant = -constant;
    }
    if matches!(rel, Rel::Lt | Rel::Gt) {
        constant += 1;
    }
    let coeffs = vars
        .iter()
        .map(|(v, a)| Ok((v.clone(), convert(a, lineno, 1)?)))
        .collect::<Result<Vec<_>, ParseError>>()?;
    LinIneq::new(coeffs, convert(&constant, lineno, 1)?).map_err(|e| match e {
        LiaError::NoVariables => ParseError::new(lineno, 1, "inequation has no variables"),
        e => ParseError::new(lineno, 1, e.to_string()),
    })
}

pub fn parse_lia<T: Scalar>(text: &str) -> Result<LiaSystem<T>, ParseError> {
    let mut ineqs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split(['%', '#']).next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        ineqs.push(parse_ineq_line(line, i + 1)?);
    }
    Ok(LiaSystem::new(ineqs))
}

pub fn print_lia<T: Scalar>(sys: &LiaSystem<T>) -> String {
    sys.to_string()
}

/// Parses a simple bound `x >= 5`; strict relations are normalized.
pub fn parse_bound<T: Scalar>(text: &str) -> Result<Bound<T>, ParseError> {
    let toks = lex(text, 1)?;
    let err = |col: usize, m: &str| ParseError::new(1, col, m);
    let (var, rel, neg, value, col) = match toks.as_slice() {
        [(Tok::Ident(v), _), (Tok::Rel(r), _), (Tok::Int(k), c)] => (v, *r, false, k, *c),
        [(Tok::Ident(v), _), (Tok::Rel(r), _), (Tok::Minus, c), (Tok::Int(k), _)] => {
            (v, *r, true, k, *c)
        }
        _ => return Err(err(1, "expected '<variable> <relation> <integer>'")),
    };
    let value = if neg { -value.clone() } else { value.clone() };
    let value: T = convert(&value, 1, col)?;
    Bound::new(var, rel, value).map_err(|e| err(col, &e.to_string()))
}
