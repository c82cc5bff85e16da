//! Scripted derivations: one `L.i Res R.j` step per line, clause ids and
//! 1-based literal positions. `%` and `#` start comments.

use thiserror::Error;

use super::rules::{resolve_at, DerivedClause, Rule};
use crate::logic::{Clause, ClauseId};
use crate::parse_error::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplayStep {
    /// Source line of the step in the script.
    pub line: usize,
    pub left: ClauseId,
    /// 0-based.
    pub left_pos: usize,
    pub right: ClauseId,
    /// 0-based.
    pub right_pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("script line {line}: {message}")]
pub struct ReplayError {
    pub line: usize,
    pub message: String,
}

fn parse_ref(word: &str, line: usize, column: usize) -> Result<(ClauseId, usize), ParseError> {
    let bad = || {
        ParseError::new(
            line,
            column,
            format!("expected <id>.<position>, found '{word}'"),
        )
    };
    let (id, pos) = word.split_once('.').ok_or_else(bad)?;
    let id: ClauseId = id.parse().map_err(|_| bad())?;
    let pos: usize = pos.parse().map_err(|_| bad())?;
    if pos == 0 {
        return Err(ParseError::new(
            line,
            column,
            "literal positions start at 1",
        ));
    }
    Ok((id, pos - 1))
}

pub fn parse_script(text: &str) -> Result<Vec<ReplayStep>, ParseError> {
    let mut steps = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let body = raw.split(['%', '#']).next().unwrap_or("");
        let mut words = Vec::new();
        let mut col = 0;
        for w in body.split(' ') {
            if !w.trim().is_empty() {
                words.push((w.trim(), col + 1));
            }
            col += w.chars().count() + 1;
        }
        if words.is_empty() {
            continue;
        }
        if words.len() != 3 || words[1].0 != "Res" {
            return Err(ParseError::new(line, words[0].1, "expected 'L.i Res R.j'"));
        }
        let (left, left_pos) = parse_ref(words[0].0, line, words[0].1)?;
        let (right, right_pos) = parse_ref(words[2].0, line, words[2].1)?;
        steps.push(ReplayStep {
            line,
            left,
            left_pos,
            right,
            right_pos,
        });
    }
    Ok(steps)
}

/// Prints a script back in its text form.
pub fn print_script(steps: &[ReplayStep]) -> String {
    steps
        .iter()
        .map(|s| {
            format!(
                "{}.{} Res {}.{}\n",
                s.left,
                s.left_pos + 1,
                s.right,
                s.right_pos + 1
            )
        })
        .collect()
}

/// Runs exactly the scripted resolutions, ignoring ordering and selection.
/// Conclusions are numbered after the largest id of `input`.
pub fn replay(input: &[Clause], script: &[ReplayStep]) -> Result<Vec<DerivedClause>, ReplayError> {
    let mut known: Vec<Clause> = input.to_vec();
    let first = input.iter().map(|c| c.id).max().unwrap_or(0) + 1;
    let mut out = Vec::new();
    for (next, step) in (first..).zip(script) {
        let err = |message: String| ReplayError {
            line: step.line,
            message,
        };
        let find = |id: ClauseId| {
            known
                .iter()
                .find(|c| c.id == id)
                .ok_or_else(|| err(format!("unknown clause {id}")))
        };
        let (l, r) = (find(step.left)?, find(step.right)?);
        for (c, pos) in [(l, step.left_pos), (r, step.right_pos)] {
            if pos >= c.len() {
                return Err(err(format!("clause {} has no literal {}", c.id, pos + 1)));
            }
        }
        let (lit_l, lit_r) = (&l.literals[step.left_pos], &r.literals[step.right_pos]);
        if lit_l.positive == lit_r.positive {
            return Err(err(format!(
                "literals {lit_l} and {lit_r} are not complementary"
            )));
        }
        let Some((mut clause, unifier)) = resolve_at(l, step.left_pos, r, step.right_pos) else {
            return Err(err(format!("{lit_l} and {lit_r} do not unify")));
        };
        clause.id = next;
        let d = DerivedClause {
            clause,
            rule: Rule::Resolution {
                left: step.left,
                left_pos: step.left_pos,
                right: step.right,
                right_pos: step.right_pos,
                unifier,
            },
        };
        known.push(d.clause.clone());
        out.push(d);
    }
    Ok(out)
}
