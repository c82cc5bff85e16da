use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::scalar::{add, mul, Scalar};
use super::LiaError;

/// `Σ aᵢ·xᵢ + c ≤ 0` with at least one nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinIneq<T> {
    coeffs: BTreeMap<String, T>,
    constant: T,
}

impl<T: Scalar> LinIneq<T> {
    /// Sums repeated variables and drops zero coefficients.
    pub fn new(
        coeffs: impl IntoIterator<Item = (String, T)>,
        constant: T,
    ) -> Result<LinIneq<T>, LiaError> {
        let mut map: BTreeMap<String, T> = BTreeMap::new();
        for (v, a) in coeffs {
            let e = map.entry(v).or_insert_with(T::zero);
            *e = add(e, &a)?;
        }
        map.retain(|_, a| !a.is_zero());
        if map.is_empty() {
            return Err(LiaError::NoVariables);
        }
        Ok(LinIneq {
            coeffs: map,
            constant,
        })
    }

    pub fn coeffs(&self) -> &BTreeMap<String, T> {
        &self.coeffs
    }

    pub fn constant(&self) -> &T {
        &self.constant
    }

    pub fn coeff(&self, var: &str) -> Option<&T> {
        self.coeffs.get(var)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    /// Left-hand side at a point; `None` if a variable is unassigned.
    pub fn lhs(&self, point: &BTreeMap<String, T>) -> Result<Option<T>, LiaError> {
        let mut s = self.constant.clone();
        for (v, a) in &self.coeffs {
            let Some(x) = point.get(v) else {
                return Ok(None);
            };
            s = add(&s, &mul(a, x)?)?;
        }
        Ok(Some(s))
    }

    pub fn holds_at(&self, point: &BTreeMap<String, T>) -> Result<bool, LiaError> {
        Ok(self.lhs(point)?.is_some_and(|s| !s.is_positive()))
    }
}

/// Normal form text, e.g. `1 - 1*x - 1*y <= 0`.
impl<T: Scalar> fmt::Display for LinIneq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, a: &T, body: String| -> fmt::Result {
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                first = false;
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            f.write_str(&body)
        };
        if !self.constant.is_zero() {
            term(f, &self.constant, self.constant.abs().to_string())?;
        }
        for (v, a) in &self.coeffs {
            term(f, a, format!("{}*{v}", a.abs()))?;
        }
        f.write_str(" <= 0")
    }
}

/// Relation symbols accepted in input; strict ones are normalized away.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum BoundKind {
    #[serde(rename = "<=")]
    Upper,
    #[serde(rename = ">=")]
    Lower,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Upper => "<=",
            BoundKind::Lower => ">=",
        })
    }
}

/// A simple bound `x ≤ c` or `x ≥ c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bound<T> {
    pub var: String,
    pub kind: BoundKind,
    pub value: T,
}

impl<T: Scalar> Bound<T> {
    /// `x < c` becomes `x ≤ c−1` and `x > c` becomes `x ≥ c+1`.
    pub fn new(var: &str, rel: Rel, value: T) -> Result<Bound<T>, LiaError> {
        let (kind, value) = match rel {
            Rel::Le => (BoundKind::Upper, value),
            Rel::Ge => (BoundKind::Lower, value),
            Rel::Lt => (BoundKind::Upper, super::scalar::sub(&value, &T::one())?),
            Rel::Gt => (BoundKind::Lower, add(&value, &T::one())?),
        };
        Ok(Bound {
            var: var.to_string(),
            kind,
            value,
        })
    }

    pub fn upper(var: &str, value: T) -> Bound<T> {
        Bound {
            var: var.to_string(),
            kind: BoundKind::Upper,
            value,
        }
    }

    pub fn lower(var: &str, value: T) -> Bound<T> {
        Bound {
            var: var.to_string(),
            kind: BoundKind::Lower,
            value,
        }
    }

    pub fn holds(&self, x: &T) -> bool {
        match self.kind {
            BoundKind::Upper => *x <= self.value,
            BoundKind::Lower => *x >= self.value,
        }
    }
}

impl<T: Scalar> fmt::Display for Bound<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.var, self.kind, self.value)
    }
}

/// Current lower and upper bounds per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds<T> {
    pub lower: BTreeMap<String, T>,
    pub upper: BTreeMap<String, T>,
}

impl<T> Default for Bounds<T> {
    fn default() -> Self {
        Bounds {
            lower: BTreeMap::new(),
            upper: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> Bounds<T> {
    pub fn from_bounds<'a>(bounds: impl IntoIterator<Item = &'a Bound<T>>) -> Bounds<T> {
        let mut b = Bounds::default();
        for x in bounds {
            b.tighten(x);
        }
        b
    }

    pub fn get(&self, var: &str, kind: BoundKind) -> Option<&T> {
        match kind {
            BoundKind::Upper => self.upper.get(var),
            BoundKind::Lower => self.lower.get(var),
        }
    }

    /// True if `b` is strictly tighter than the current bound.
    pub fn is_tighter(&self, b: &Bound<T>) -> bool {
        match (self.get(&b.var, b.kind), b.kind) {
            (None, _) => true,
            (Some(cur), BoundKind::Upper) => b.value < *cur,
            (Some(cur), BoundKind::Lower) => b.value > *cur,
        }
    }

    /// Applies `b` if it is tighter; reports whether it was.
    pub fn tighten(&mut self, b: &Bound<T>) -> bool {
        if !self.is_tighter(b) {
            return false;
        }
        let map = match b.kind {
            BoundKind::Upper => &mut self.upper,
            BoundKind::Lower => &mut self.lower,
        };
        map.insert(b.var.clone(), b.value.clone());
        true
    }

    /// True if some variable has its lower bound above its upper bound.
    pub fn is_empty(&self) -> bool {
        self.lower
            .iter()
            .any(|(v, lo)| self.upper.get(v).is_some_and(|hi| lo > hi))
    }
}

/// A system of inequations with its size statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiaSystem<T> {
    ineqs: Vec<LinIneq<T>>,
}

impl<T: Scalar> LiaSystem<T> {
    pub fn new(ineqs: Vec<LinIneq<T>>) -> LiaSystem<T> {
        LiaSystem { ineqs }
    }

    /// Inequations; the id of `ineqs()[i]` is `i + 1`.
    pub fn ineqs(&self) -> &[LinIneq<T>] {
        &self.ineqs
    }

    /// Number of inequations.
    pub fn m(&self) -> usize {
        self.ineqs.len()
    }

    /// Number of distinct variables.
    pub fn n(&self) -> usize {
        self.variables().len()
    }

    /// Largest absolute coefficient or constant, at least 1.
    pub fn a(&self) -> T {
        self.ineqs
            .iter()
            .flat_map(|q| q.coeffs.values().chain(std::iter::once(&q.constant)))
            .map(|x| x.abs())
            .fold(T::one(), |m, x| if x > m { x } else { m })
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.ineqs.iter().flat_map(LinIneq::variables).collect()
    }

    /// True if the point satisfies every inequation.
    pub fn satisfied_by(&self, point: &BTreeMap<String, T>) -> Result<bool, LiaError> {
        for q in &self.ineqs {
            if !q.holds_at(point)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<T: Scalar> fmt::Display for LiaSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.ineqs {
            writeln!(f, "{q}")?;
        }
        Ok(())
    }
}
