//! DIMACS CNF reading and writing.
//!
//! Variable names may be attached with comment lines `c var <n> <name>`;
//! unnamed variables print as `x<n>`.

use super::types::{Lit, PropProblem};
use crate::parse_error::ParseError;

pub fn parse_dimacs(text: &str) -> Result<PropProblem, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut names: Vec<(usize, String, usize)> = Vec::new();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut last_pos = (1, 1);
    for (li, line) in text.lines().enumerate() {
        let lineno = li + 1;
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let words: Vec<&str> = rest.split_whitespace().collect();
                if words.len() == 3 && words[0] == "var" {
                    let n = words[1].parse::<usize>().map_err(|_| {
                        ParseError::new(
                            lineno,
                            indent + 1,
                            format!("invalid variable number '{}'", words[1]),
                        )
                    })?;
                    names.push((n, words[2].to_string(), lineno));
                }
                continue;
            }
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::new(
                    lineno,
                    indent + 1,
                    "duplicate problem line",
                ));
            }
            let words: Vec<&str> = trimmed.split_whitespace().collect();
            if words.len() != 4 || words[0] != "p" || words[1] != "cnf" {
                return Err(ParseError::new(
                    lineno,
                    indent + 1,
                    "expected 'p cnf <vars> <clauses>'",
                ));
            }
            let vars = words[2]
                .parse()
                .map_err(|_| ParseError::new(lineno, indent + 1, "invalid variable count"))?;
            let count = words[3]
                .parse()
                .map_err(|_| ParseError::new(lineno, indent + 1, "invalid clause count"))?;
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(ParseError::new(
                lineno,
                indent + 1,
                "clause before problem line",
            ));
        };
        let mut col = 0;
        for word in line.split(char::is_whitespace) {
            let column = col + 1;
            col += word.chars().count() + 1;
            if word.is_empty() {
                continue;
            }
            last_pos = (lineno, column);
            let x: i64 = word.parse().map_err(|_| {
                ParseError::new(lineno, column, format!("invalid literal '{word}'"))
            })?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if x.unsigned_abs() as usize > vars {
                return Err(ParseError::new(
                    lineno,
                    column,
                    format!("variable {} exceeds declared count {vars}", x.abs()),
                ));
            }
            current.push(Lit::from_dimacs(x));
        }
    }
    let Some((vars, count)) = header else {
        return Err(ParseError::new(1, 1, "missing problem line"));
    };
    if !current.is_empty() {
        return Err(ParseError::new(
            last_pos.0,
            last_pos.1,
            "last clause is not terminated by 0",
        ));
    }
    if clauses.len() != count {
        return Err(ParseError::new(
            last_pos.0,
            last_pos.1,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    let mut problem = PropProblem::with_vars(vars);
    for (n, name, lineno) in names {
        if n == 0 || n > vars {
            return Err(ParseError::new(
                lineno,
                1,
                format!("named variable {n} out of range"),
            ));
        }
        problem.names[n - 1] = name;
    }
    for c in clauses {
        problem.add_clause(c);
    }
    Ok(problem)
}

/// Writes the problem in DIMACS, with `c var` lines for names that differ
/// from the default `x<n>`.
pub fn print_dimacs(problem: &PropProblem) -> String {
    let mut out = String::new();
    for (i, name) in problem.names.iter().enumerate() {
        if *name != format!("x{}", i + 1) {
            out.push_str(&format!("c var {} {name}\n", i + 1));
        }
    }
    out.push_str(&format!(
        "p cnf {} {}\n",
        problem.num_vars(),
        problem.clauses.len()
    ));
    for c in &problem.clauses {
        for l in &c.lits {
            out.push_str(&format!("{} ", l.to_dimacs()));
        }
        out.push_str("0\n");
    }
    out
}

/// The `v` line of a model, DIMACS solver style.
pub fn model_line(model: &[bool]) -> String {
    let mut s = String::from("v");
    for (i, &b) in model.iter().enumerate() {
        let v = i as i64 + 1;
        s.push_str(&format!(" {}", if b { v } else { -v }));
    }
    s.push_str(" 0");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PQRS: &str =
        "c var 1 P\nc var 2 Q\nc var 3 R\nc var 4 S\np cnf 4 3\n1 2 3 0\n-3 4 0\n-4 1 2 0\n";

    #[test]
    fn parses_named_problem() {
        let p = parse_dimacs(PQRS).unwrap();
        assert_eq!(p.num_vars(), 4);
        assert_eq!(p.clauses.len(), 3);
        assert_eq!(p.lit_name(p.clauses[2].lits[0]), "¬S");
        assert_eq!(print_dimacs(&p), PQRS);
    }

    #[test]
    fn clauses_may_span_lines() {
        let p = parse_dimacs("p cnf 3 2\n1 -2\n 3 0 -1 0\n").unwrap();
        assert_eq!(p.clauses[0].lits.len(), 3);
        assert_eq!(p.clauses[1].lits, vec![Lit::neg(0)]);
        assert_eq!(p.names, vec!["x1", "x2", "x3"]);
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_dimacs("p cnf 2 1\n1 5 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_dimacs("p cnf 2 1\n1 a 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_dimacs("1 2 0\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_dimacs("p cnf 2 2\n1 2 0\n").unwrap_err();
        assert!(e.message.contains("declares 2"));
        let e = parse_dimacs("p cnf 2 1\n1 2\n").unwrap_err();
        assert!(e.message.contains("terminated"));
        assert!(parse_dimacs("p dnf 2 1\n").is_err());
        assert!(parse_dimacs("").is_err());
    }

    #[test]
    fn model_line_format() {
        assert_eq!(model_line(&[false, true]), "v -1 2 0");
        assert_eq!(model_line(&[]), "v 0");
    }

    proptest! {
        #[test]
        fn round_trip(clauses in proptest::collection::vec(
            proptest::collection::vec((0u32..5, any::<bool>()), 0..4), 0..6)
        ) {
            let mut p = PropProblem::with_vars(5);
            p.names[2] = "R".into();
            for c in clauses {
                p.add_clause(c.into_iter().map(|(v, s)| if s { Lit::pos(v) } else { Lit::neg(v) }).collect());
            }
            prop_assert_eq!(parse_dimacs(&print_dimacs(&p)).unwrap(), p);
        }
    }
}
