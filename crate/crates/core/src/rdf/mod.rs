//! RDF terms, triples and an indexed in-memory graph.
//!
//! Only the term kinds the rule engine needs are supported: IRIs, blank
//! nodes, and literals typed as `xsd:string`, `xsd:boolean` or
//! `xsd:integer`.

mod graph;
mod path;
mod serialize;
mod turtle;

pub use graph::Graph;
pub use path::{evaluate_path, PathError, PropertyPath};
pub use serialize::serialize_turtle;
pub use turtle::{parse_turtle, parse_turtle_into, TurtleError};

use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::vocab::{rdf, xsd};

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(iri: impl Into<String>) -> Self {
        Iri(iri.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl From<&str> for Iri {
    fn from(s: &str) -> Self {
        Iri::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Datatype {
    String,
    Boolean,
    Integer,
}

impl Datatype {
    pub fn iri(self) -> Iri {
        Iri::new(match self {
            Datatype::String => xsd::STRING,
            Datatype::Boolean => xsd::BOOLEAN,
            Datatype::Integer => xsd::INTEGER,
        })
    }

    pub fn from_iri(iri: &str) -> Option<Self> {
        match iri {
            xsd::STRING => Some(Datatype::String),
            xsd::BOOLEAN => Some(Datatype::Boolean),
            xsd::INTEGER => Some(Datatype::Integer),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiteralError {
    #[error("malformed {datatype:?} literal {lexical:?}")]
    Malformed { lexical: String, datatype: Datatype },
    #[error("unsupported literal datatype <{0}>")]
    UnsupportedDatatype(String),
}

/// A typed literal. Integer lexical forms are kept canonical (no sign on
/// non-negative values, no leading zeros), so term equality coincides with
/// value equality for every supported datatype.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Datatype,
}

impl Literal {
    pub fn string(value: impl Into<String>) -> Self {
        Literal { lexical: value.into(), datatype: Datatype::String }
    }

    pub fn boolean(value: bool) -> Self {
        Literal { lexical: value.to_string(), datatype: Datatype::Boolean }
    }

    pub fn integer(value: i64) -> Self {
        Literal { lexical: value.to_string(), datatype: Datatype::Integer }
    }

    /// Builds a literal from a lexical form, validating it against the
    /// datatype.
    pub fn typed(lexical: &str, datatype: Datatype) -> Result<Self, LiteralError> {
        let malformed =
            || LiteralError::Malformed { lexical: lexical.to_string(), datatype };
        match datatype {
            Datatype::String => Ok(Literal::string(lexical)),
            Datatype::Boolean => match lexical {
                "true" => Ok(Literal::boolean(true)),
                "false" => Ok(Literal::boolean(false)),
                _ => Err(malformed()),
            },
            Datatype::Integer => {
                let digits = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(malformed());
                }
                lexical.parse::<i64>().map(Literal::integer).map_err(|_| malformed())
            }
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self.datatype {
            Datatype::Integer => self.lexical.parse().ok(),
            _ => None,
        }
    }

    pub fn as_boolean(&self) -> Option<bool> {
        match self.datatype {
            Datatype::Boolean => Some(self.lexical == "true"),
            _ => None,
        }
    }
}

/// An RDF term. Terms sort IRIs first, then blank nodes, then literals.
/// Blank labels of the form `b<n>` sort by `n`, which is allocation
/// order, so blank nodes list in the order they were written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Iri),
    BlankNode(String),
    Literal(Literal),
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(t: &Term) -> u8 {
            match t {
                Term::Iri(_) => 0,
                Term::BlankNode(_) => 1,
                Term::Literal(_) => 2,
            }
        }
        fn numbered(label: &str) -> Option<u64> {
            label.strip_prefix('b')?.parse().ok()
        }
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => a.cmp(b),
            (Term::Literal(a), Term::Literal(b)) => a.cmp(b),
            (Term::BlankNode(a), Term::BlankNode(b)) => {
                let key = |l: &str| (numbered(l).is_none(), numbered(l).unwrap_or(0));
                key(a).cmp(&key(b)).then_with(|| a.cmp(b))
            }
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Self {
        Term::Iri(Iri::new(iri))
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::BlankNode(label.into())
    }

    pub fn integer(value: i64) -> Self {
        Term::Literal(Literal::integer(value))
    }

    pub fn boolean(value: bool) -> Self {
        Term::Literal(Literal::boolean(value))
    }

    pub fn string(value: impl Into<String>) -> Self {
        Term::Literal(Literal::string(value))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

/// N-Triples style rendering with full IRIs.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "{iri}"),
            Term::BlankNode(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => match lit.datatype {
                Datatype::String => write!(f, "\"{}\"", escape_string(&lit.lexical)),
                Datatype::Boolean | Datatype::Integer => f.write_str(&lit.lexical),
            },
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripleError {
    #[error("a literal cannot be the subject of a triple: {0}")]
    LiteralSubject(Term),
    #[error("predicate must be an IRI, got {0}")]
    NonIriPredicate(Term),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, TripleError> {
        if subject.is_literal() {
            return Err(TripleError::LiteralSubject(subject));
        }
        Ok(Triple { subject, predicate, object })
    }

    /// Like [`Triple::new`] but accepts the predicate as a term.
    pub fn from_terms(subject: Term, predicate: Term, object: Term) -> Result<Self, TripleError> {
        match predicate {
            Term::Iri(p) => Triple::new(subject, p, object),
            other => Err(TripleError::NonIriPredicate(other)),
        }
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Prefix table mapping prefix labels to namespace IRIs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.entries.insert(prefix.into(), namespace.into());
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.entries.get(prefix).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, ns)| (p.as_str(), ns.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds every prefix of `other` that is not already bound here.
    pub fn merge(&mut self, other: &PrefixMap) {
        for (p, ns) in other.iter() {
            self.entries.entry(p.to_string()).or_insert_with(|| ns.to_string());
        }
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Option<Iri> {
        self.get(prefix).map(|ns| Iri::new(format!("{ns}{local}")))
    }

    /// Shortest `prefix:local` form of `iri`, if some namespace matches and
    /// the remainder is a local name the Turtle reader accepts.
    pub fn compact_iri(&self, iri: &Iri) -> Option<String> {
        self.entries
            .iter()
            .filter_map(|(p, ns)| {
                let local = iri.as_str().strip_prefix(ns.as_str())?;
                is_valid_local_name(local).then(|| format!("{p}:{local}"))
            })
            .min_by_key(|s| s.len())
    }

    /// Turtle rendering of a term, compacting IRIs where possible.
    pub fn render(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.render_iri(iri),
            other => other.to_string(),
        }
    }

    pub fn render_iri(&self, iri: &Iri) -> String {
        self.compact_iri(iri).unwrap_or_else(|| iri.to_string())
    }
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

pub(crate) fn is_valid_local_name(local: &str) -> bool {
    !local.is_empty()
        && !local.starts_with(['-', '.'])
        && !local.ends_with('.')
        && local.chars().all(|c| is_name_char(c) || c == '.')
}

pub(crate) fn rdf_type() -> Iri {
    Iri::new(rdf::TYPE)
}
