//! Deontic norms: obligations, permissions and constitutive rules with
//! path-anchored antecedents, plus their compilation to SHACL.
//!
//! Obligations and permissions become node shapes; constitutive rules
//! become triple rules. A norm's `target` class is the anchor: every atom
//! is evaluated from an instance of that class, and intermediate nodes
//! are existentially quantified by path reachability.

mod compile;
mod parse;

pub use compile::{compile, norm_shape_iri, CompileError};
pub use parse::{parse_norms, NormError};

use crate::rdf::{Iri, PrefixMap, PropertyPath, Term};
use crate::shacl::NodeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    Obligation,
    Permission,
    Constitutive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareKind {
    LessThan,
    Equals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CardinalityKind {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    /// Every node reached by `path` is an instance of `class`.
    Class { path: PropertyPath, class: Iri },
    Compare { kind: CompareKind, path: PropertyPath, other: Iri },
    Cardinality { kind: CardinalityKind, path: PropertyPath, n: usize },
}

/// Negation as failure: holds when the inner atom does not hold, including
/// when nothing is known about it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NafAtom {
    pub inner: Atom,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Antecedent {
    Atom(Atom),
    Naf(NafAtom),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consequent {
    /// Obligations and permissions: the value required at `path`.
    Require { path: PropertyPath, value: Term },
    /// Constitutive rules: the triple that holds.
    Assert { subject: NodeSpec, predicate: Iri, object: NodeSpec },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormRule {
    pub id: String,
    pub kind: NormKind,
    pub target: Iri,
    pub order: i64,
    pub antecedent: Vec<Antecedent>,
    pub consequent: Consequent,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormSet {
    pub norms: Vec<NormRule>,
    pub prefixes: PrefixMap,
}

impl NormSet {
    pub fn of_kind(&self, kind: NormKind) -> impl Iterator<Item = &NormRule> {
        self.norms.iter().filter(move |n| n.kind == kind)
    }

    pub fn obligations(&self) -> impl Iterator<Item = &NormRule> {
        self.of_kind(NormKind::Obligation)
    }

    pub fn permissions(&self) -> impl Iterator<Item = &NormRule> {
        self.of_kind(NormKind::Permission)
    }

    pub fn constitutive(&self) -> impl Iterator<Item = &NormRule> {
        self.of_kind(NormKind::Constitutive)
    }

    pub fn get(&self, id: &str) -> Option<&NormRule> {
        self.norms.iter().find(|n| n.id == id)
    }
}
