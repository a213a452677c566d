//! Structured pass/fail evidence for one named inequality.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::padic::{format_rational, Valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantity {
    Valuation(Valuation),
    Rational(BigRational),
    /// A certified real enclosure `[lo, hi]`.
    Interval(BigRational, BigRational),
    Bool(bool),
}

impl Quantity {
    pub fn int(v: i64) -> Self {
        Quantity::Valuation(Valuation::Finite(v))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Valuation(v) => write!(f, "{v}"),
            Quantity::Rational(q) => write!(f, "{}", format_rational(q)),
            Quantity::Interval(lo, hi) => {
                write!(f, "[{}, {}]", format_rational(lo), format_rational(hi))
            }
            Quantity::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::Valuation(Valuation::Finite(v)) => s.serialize_i64(*v),
            Quantity::Valuation(v) => s.serialize_str(&v.to_string()),
            Quantity::Rational(q) => s.serialize_str(&format_rational(q)),
            Quantity::Interval(lo, hi) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&format_rational(lo))?;
                seq.serialize_element(&format_rational(hi))?;
                seq.end()
            }
            Quantity::Bool(b) => s.serialize_bool(*b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
        };
        f.write_str(s)
    }
}

impl Relation {
    pub fn holds<T: PartialOrd>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    /// Decides `lhs REL rhs` for a possibly uncertified valuation.
    pub fn decide_valuation(self, lhs: Valuation, rhs: i64) -> Option<bool> {
        match (self, lhs) {
            (_, Valuation::Finite(v)) => Some(self.holds(&v, &rhs)),
            (Relation::Ge | Relation::Gt, Valuation::Infinite) => Some(true),
            (_, Valuation::Infinite) => Some(false),
            (Relation::Ge, v) => v.at_least(rhs),
            (Relation::Gt, v) => v.at_least(rhs + 1),
            (Relation::Le | Relation::Eq, Valuation::AtLeast(b)) => (b > rhs).then_some(false),
            (Relation::Lt, Valuation::AtLeast(b)) => (b >= rhs).then_some(false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub n: i64,
    pub label: String,
    pub lhs: Quantity,
    pub relation: Relation,
    pub rhs: Quantity,
    pub satisfied: bool,
    /// Equality holds (the bound is attained).
    pub tight: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundRow {
    pub fn new(n: i64, label: &str, lhs: Quantity, relation: Relation, rhs: Quantity, satisfied: bool) -> Self {
        let tight = lhs == rhs;
        BoundRow {
            n,
            label: label.to_string(),
            lhs,
            relation,
            rhs,
            satisfied,
            tight,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// A valuation row; `None` when the comparison is not decidable.
    pub fn valuation(n: i64, label: &str, lhs: Valuation, relation: Relation, rhs: i64) -> Option<Self> {
        let ok = relation.decide_valuation(lhs, rhs)?;
        Some(Self::new(
            n,
            label,
            Quantity::Valuation(lhs),
            relation,
            Quantity::int(rhs),
            ok,
        ))
    }

    pub fn rational(n: i64, label: &str, lhs: BigRational, relation: Relation, rhs: BigRational) -> Self {
        let ok = relation.holds(&lhs, &rhs);
        Self::new(n, label, Quantity::Rational(lhs), relation, Quantity::Rational(rhs), ok)
    }

    pub fn boolean(n: i64, label: &str, value: bool) -> Self {
        Self::new(
            n,
            label,
            Quantity::Bool(value),
            Relation::Eq,
            Quantity::Bool(true),
            value,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summary {
    AllHold,
    FirstViolation(i64),
}

impl Serialize for Summary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        match self {
            Summary::AllHold => m.serialize_entry("all_hold", &true)?,
            Summary::FirstViolation(n) => m.serialize_entry("first_violation", n)?,
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub bound_name: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn new(bound_name: impl Into<String>) -> Self {
        BoundReport {
            bound_name: bound_name.into(),
            params: BTreeMap::new(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, row: BoundRow) {
        self.rows.push(row);
    }

    pub fn summary(&self) -> Summary {
        match self.rows.iter().find(|r| !r.satisfied) {
            None => Summary::AllHold,
            Some(r) => Summary::FirstViolation(r.n),
        }
    }

    pub fn all_hold(&self) -> bool {
        self.summary() == Summary::AllHold
    }

    pub fn rows_labelled<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a BoundRow> + 'a {
        self.rows.iter().filter(move |r| r.label == label)
    }

    /// Appends the rows of `other`, prefixing their labels.
    pub fn absorb(&mut self, prefix: &str, other: BoundReport) {
        for mut r in other.rows {
            r.label = format!("{prefix}{}", r.label);
            self.rows.push(r);
        }
        for (k, v) in other.params {
            self.params.insert(format!("{prefix}{k}"), v);
        }
    }
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("bound_name", &self.bound_name)?;
        m.serialize_entry("params", &self.params)?;
        m.serialize_entry("summary", &self.summary())?;
        m.serialize_entry("rows", &self.rows)?;
        m.end()
    }
}
