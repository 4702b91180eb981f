//! The SHACL subset: node shapes with constraint components and ordered
//! triple rules.

mod check;
mod parse;
mod write;

pub use check::{check_constraint, value_set, ConstraintError};
pub use parse::{parse_shapes, ShapeError};
pub use write::shapes_to_graph;

use std::fmt;

use crate::rdf::{Iri, PrefixMap, PropertyPath, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Violation,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Violation => "Violation",
            Severity::Info => "Info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    HasValue { path: PropertyPath, value: Term },
    MinCount { path: PropertyPath, min: usize },
    MaxCount { path: PropertyPath, max: usize },
    ClassMember { path: PropertyPath, class: Iri },
    /// Every value at `path` is numerically below every value of
    /// `other` on the focus node.
    LessThan { path: PropertyPath, other: Iri },
    /// The value set at `path` equals the value set of `other` on the
    /// focus node.
    Equals { path: PropertyPath, other: Iri },
    Datatype { path: PropertyPath, datatype: Iri },
    Not(Box<Constraint>),
    And(Vec<Constraint>),
}

impl Constraint {
    pub fn not(inner: Constraint) -> Self {
        Constraint::Not(Box::new(inner))
    }

    /// The path of a component that constrains a value set, if any.
    pub fn path(&self) -> Option<&PropertyPath> {
        match self {
            Constraint::HasValue { path, .. }
            | Constraint::MinCount { path, .. }
            | Constraint::MaxCount { path, .. }
            | Constraint::ClassMember { path, .. }
            | Constraint::LessThan { path, .. }
            | Constraint::Equals { path, .. }
            | Constraint::Datatype { path, .. } => Some(path),
            Constraint::Not(_) | Constraint::And(_) => None,
        }
    }

    /// Every predicate this constraint reads, including the comparison
    /// predicates of `LessThan` / `Equals`.
    pub fn predicates(&self) -> Vec<&Iri> {
        let mut out = Vec::new();
        self.visit(&mut |c| {
            if let Some(path) = c.path() {
                out.extend(path.steps());
            }
            if let Constraint::LessThan { other, .. } | Constraint::Equals { other, .. } = c {
                out.push(other);
            }
        });
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Constraint)) {
        f(self);
        match self {
            Constraint::Not(inner) => inner.visit(f),
            Constraint::And(items) => items.iter().for_each(|c| c.visit(f)),
            _ => {}
        }
    }

    pub fn render(&self, prefixes: &PrefixMap) -> String {
        match self {
            Constraint::HasValue { path, value } => {
                format!("{} hasValue {}", path.render(prefixes), prefixes.render(value))
            }
            Constraint::MinCount { path, min } => format!("{} minCount {min}", path.render(prefixes)),
            Constraint::MaxCount { path, max } => format!("{} maxCount {max}", path.render(prefixes)),
            Constraint::ClassMember { path, class } => {
                format!("{} class {}", path.render(prefixes), prefixes.render_iri(class))
            }
            Constraint::LessThan { path, other } => {
                format!("{} lessThan {}", path.render(prefixes), prefixes.render_iri(other))
            }
            Constraint::Equals { path, other } => {
                format!("{} equals {}", path.render(prefixes), prefixes.render_iri(other))
            }
            Constraint::Datatype { path, datatype } => {
                format!("{} datatype {}", path.render(prefixes), prefixes.render_iri(datatype))
            }
            Constraint::Not(inner) => format!("not [{}]", inner.render(prefixes)),
            Constraint::And(items) => {
                let parts: Vec<String> = items.iter().map(|c| c.render(prefixes)).collect();
                format!("and [{}]", parts.join("; "))
            }
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&PrefixMap::new()))
    }
}

/// How a triple rule picks its subject or object from the focus node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeSpec {
    This,
    PathFrom(PropertyPath),
    Constant(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleRule {
    pub id: String,
    pub order: i64,
    pub condition: Option<Constraint>,
    pub subject: NodeSpec,
    pub predicate: Iri,
    pub object: NodeSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeShape {
    pub id: Iri,
    pub target_class: Iri,
    pub constraints: Vec<Constraint>,
    pub rules: Vec<TripleRule>,
    pub severity: Severity,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShapesDocument {
    pub shapes: Vec<NodeShape>,
}

impl ShapesDocument {
    pub fn new(shapes: Vec<NodeShape>) -> Self {
        ShapesDocument { shapes }
    }

    pub fn shape(&self, id: &Iri) -> Option<&NodeShape> {
        self.shapes.iter().find(|s| &s.id == id)
    }

    /// All `(shape, rule)` pairs in document order.
    pub fn rules(&self) -> impl Iterator<Item = (&NodeShape, &TripleRule)> {
        self.shapes.iter().flat_map(|s| s.rules.iter().map(move |r| (s, r)))
    }

    pub fn rule_count(&self) -> usize {
        self.shapes.iter().map(|s| s.rules.len()).sum()
    }

    /// Concatenates two documents.
    pub fn union(mut self, other: ShapesDocument) -> ShapesDocument {
        self.shapes.extend(other.shapes);
        self
    }
}
