use std::collections::BTreeSet;

use thiserror::Error;

use super::{Constraint, NodeShape, NodeSpec, Severity, ShapesDocument, TripleRule};
use crate::rdf::{Graph, Iri, PathError, PropertyPath, Term};
use crate::vocab::{rdf, rdfs, sh};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("unknown constraint component <{}> on {node}", predicate.as_str())]
    UnknownComponent { node: Term, predicate: Iri },
    #[error("sh:path on {node} is an empty list")]
    EmptyPath { node: Term },
    #[error("unsupported sh:path value {value} on {node}; only predicates and sequences are supported")]
    UnsupportedPath { node: Term, value: Term },
    #[error("property shape {node} has no sh:path")]
    MissingPath { node: Term },
    #[error("malformed RDF list starting at {node}")]
    MalformedList { node: Term },
    #[error("rule {rule} has no sh:predicate")]
    MissingPredicate { rule: String },
    #[error("rule {rule} has no sh:{which}")]
    MissingNodeSpec { rule: String, which: &'static str },
    #[error("rule {rule} uses a blank node constant, which cannot be copied into data graphs")]
    BlankConstant { rule: String },
    #[error("rule node {node} is not a sh:TripleRule")]
    UnsupportedRule { node: Term },
    #[error("invalid value {value} for <{}> on {node}: expected {expected}", predicate.as_str())]
    InvalidValue { node: Term, predicate: Iri, value: Term, expected: &'static str },
    #[error("<{}> on {node} must have exactly one value", predicate.as_str())]
    MultipleValues { node: Term, predicate: Iri },
    #[error("node shape {0} must be an IRI")]
    ShapeNotIri(Term),
}

/// Builds the shapes declared in `g`. Every `sh:NodeShape` with a
/// `sh:targetClass` becomes a [`NodeShape`]; shapes are returned sorted by
/// IRI.
pub fn parse_shapes(g: &Graph) -> Result<ShapesDocument, ShapeError> {
    let reader = Reader { g };
    let mut shapes = Vec::new();
    for node in g.instances_of(&Iri::new(sh::NODE_SHAPE)) {
        if let Some(shape) = reader.node_shape(&node)? {
            shapes.push(shape);
        }
    }
    Ok(ShapesDocument { shapes })
}

const PROPERTY_COMPONENTS: &[&str] =
    &[sh::HAS_VALUE, sh::MIN_COUNT, sh::MAX_COUNT, sh::CLASS, sh::LESS_THAN, sh::EQUALS, sh::DATATYPE];

const ANNOTATIONS: &[&str] = &[rdfs::LABEL, rdfs::COMMENT, sh::NAME, sh::DESCRIPTION, sh::MESSAGE];

struct Reader<'g> {
    g: &'g Graph,
}

impl Reader<'_> {
    fn objects(&self, node: &Term, p: &str) -> Vec<Term> {
        self.g.objects(node, &Iri::new(p)).cloned().collect()
    }

    fn single(&self, node: &Term, p: &str) -> Result<Option<Term>, ShapeError> {
        let mut values = self.objects(node, p);
        match values.len() {
            0 => Ok(None),
            1 => Ok(values.pop()),
            _ => Err(ShapeError::MultipleValues { node: node.clone(), predicate: Iri::new(p) }),
        }
    }

    /// Rejects SHACL vocabulary on `node` outside `allowed`; predicates from
    /// other namespaces are left alone.
    fn check_vocabulary(&self, node: &Term, allowed: &[&[&str]]) -> Result<(), ShapeError> {
        for p in self.g.predicates_of(node) {
            let known = p.as_str() == rdf::TYPE
                || ANNOTATIONS.contains(&p.as_str())
                || allowed.iter().any(|set| set.contains(&p.as_str()));
            if !known && p.as_str().starts_with(sh::NS) {
                return Err(ShapeError::UnknownComponent { node: node.clone(), predicate: p.clone() });
            }
        }
        Ok(())
    }

    fn iri_value(&self, node: &Term, p: &str, value: Term) -> Result<Iri, ShapeError> {
        match value {
            Term::Iri(iri) => Ok(iri),
            value => Err(ShapeError::InvalidValue { node: node.clone(), predicate: Iri::new(p), value, expected: "an IRI" }),
        }
    }

    fn count_value(&self, node: &Term, p: &str, value: Term) -> Result<usize, ShapeError> {
        value
            .as_literal()
            .and_then(|l| l.as_integer())
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| ShapeError::InvalidValue {
                node: node.clone(),
                predicate: Iri::new(p),
                value,
                expected: "a non-negative integer",
            })
    }

    fn node_shape(&self, node: &Term) -> Result<Option<NodeShape>, ShapeError> {
        let Term::Iri(id) = node else {
            return Err(ShapeError::ShapeNotIri(node.clone()));
        };
        let Some(target) = self.single(node, sh::TARGET_CLASS)? else {
            return Ok(None);
        };
        self.check_vocabulary(
            node,
            &[&[sh::TARGET_CLASS, sh::PROPERTY, sh::NOT, sh::AND, sh::RULE, sh::SEVERITY]],
        )?;
        let target_class = self.iri_value(node, sh::TARGET_CLASS, target)?;
        let severity = match self.single(node, sh::SEVERITY)? {
            None => Severity::Violation,
            Some(Term::Iri(s)) if s.as_str() == sh::VIOLATION => Severity::Violation,
            Some(Term::Iri(s)) if s.as_str() == sh::INFO => Severity::Info,
            Some(value) => {
                return Err(ShapeError::InvalidValue {
                    node: node.clone(),
                    predicate: Iri::new(sh::SEVERITY),
                    value,
                    expected: "sh:Violation or sh:Info",
                })
            }
        };
        let constraints = self.node_constraints(node)?;
        let rules = self
            .objects(node, sh::RULE)
            .iter()
            .enumerate()
            .map(|(i, r)| self.rule(id, i, r))
            .collect::<Result<_, _>>()?;
        Ok(Some(NodeShape { id: id.clone(), target_class, constraints, rules, severity }))
    }

    /// Constraints carried by `node` through `sh:property`, `sh:not` and
    /// `sh:and`, in document order.
    fn node_constraints(&self, node: &Term) -> Result<Vec<Constraint>, ShapeError> {
        let mut carriers: Vec<(&str, Term)> = Vec::new();
        for p in [sh::PROPERTY, sh::NOT, sh::AND] {
            carriers.extend(self.objects(node, p).into_iter().map(|v| (p, v)));
        }
        // blank nodes sort in the order they were written
        carriers.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out = Vec::new();
        for (p, value) in carriers {
            match p {
                sh::PROPERTY => out.extend(self.property_shape(&value)?),
                sh::NOT => out.push(Constraint::not(self.node_expression(&value)?)),
                _ => {
                    let members = self.list(&value)?;
                    let items = members.iter().map(|m| self.node_expression(m)).collect::<Result<_, _>>()?;
                    out.push(Constraint::And(items));
                }
            }
        }
        Ok(out)
    }

    /// A nested shape (under `sh:condition`, `sh:not` or `sh:and`) as a
    /// single constraint.
    fn node_expression(&self, node: &Term) -> Result<Constraint, ShapeError> {
        self.check_vocabulary(node, &[&[sh::PROPERTY, sh::NOT, sh::AND]])?;
        let mut items = self.node_constraints(node)?;
        Ok(if items.len() == 1 { items.pop().expect("one item") } else { Constraint::And(items) })
    }

    fn property_shape(&self, node: &Term) -> Result<Vec<Constraint>, ShapeError> {
        self.check_vocabulary(node, &[&[sh::PATH], PROPERTY_COMPONENTS])?;
        let path_value = self.single(node, sh::PATH)?.ok_or_else(|| ShapeError::MissingPath { node: node.clone() })?;
        let path = self.path(node, path_value)?;
        let mut out = Vec::new();
        for &component in PROPERTY_COMPONENTS {
            for value in self.objects(node, component) {
                let path = path.clone();
                out.push(match component {
                    sh::HAS_VALUE => Constraint::HasValue { path, value },
                    sh::MIN_COUNT => Constraint::MinCount { path, min: self.count_value(node, component, value)? },
                    sh::MAX_COUNT => Constraint::MaxCount { path, max: self.count_value(node, component, value)? },
                    sh::CLASS => Constraint::ClassMember { path, class: self.iri_value(node, component, value)? },
                    sh::LESS_THAN => Constraint::LessThan { path, other: self.iri_value(node, component, value)? },
                    sh::EQUALS => Constraint::Equals { path, other: self.iri_value(node, component, value)? },
                    sh::DATATYPE => Constraint::Datatype { path, datatype: self.iri_value(node, component, value)? },
                    _ => unreachable!("component list is closed"),
                });
            }
        }
        Ok(out)
    }

    fn path(&self, node: &Term, value: Term) -> Result<PropertyPath, ShapeError> {
        match &value {
            Term::Iri(iri) if iri.as_str() == rdf::NIL => Err(ShapeError::EmptyPath { node: node.clone() }),
            Term::Iri(iri) => Ok(PropertyPath::Predicate(iri.clone())),
            Term::BlankNode(_) if self.single(&value, rdf::FIRST)?.is_some() => {
                let steps = self
                    .list(&value)?
                    .into_iter()
                    .map(|step| match step {
                        Term::Iri(iri) => Ok(iri),
                        other => Err(ShapeError::UnsupportedPath { node: node.clone(), value: other }),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PropertyPath::from_steps(steps).map_err(|PathError::Empty| ShapeError::EmptyPath { node: node.clone() })
            }
            _ => Err(ShapeError::UnsupportedPath { node: node.clone(), value }),
        }
    }

    fn list(&self, head: &Term) -> Result<Vec<Term>, ShapeError> {
        let mut items = Vec::new();
        let mut seen = BTreeSet::new();
        let mut cell = head.clone();
        while cell != Term::iri(rdf::NIL) {
            let malformed = || ShapeError::MalformedList { node: head.clone() };
            if !seen.insert(cell.clone()) {
                return Err(malformed());
            }
            let first = self.single(&cell, rdf::FIRST).map_err(|_| malformed())?.ok_or_else(malformed)?;
            let rest = self.single(&cell, rdf::REST).map_err(|_| malformed())?.ok_or_else(malformed)?;
            items.push(first);
            cell = rest;
        }
        Ok(items)
    }

    fn rule(&self, shape: &Iri, index: usize, node: &Term) -> Result<TripleRule, ShapeError> {
        let is_triple_rule = self.g.has_type(node, &Iri::new(sh::TRIPLE_RULE));
        if !is_triple_rule {
            return Err(ShapeError::UnsupportedRule { node: node.clone() });
        }
        self.check_vocabulary(node, &[&[sh::ORDER, sh::CONDITION, sh::SUBJECT, sh::PREDICATE, sh::OBJECT]])?;
        let id = match (self.single(node, rdfs::LABEL)?, node) {
            (Some(Term::Literal(label)), _) => label.lexical().to_string(),
            (_, Term::Iri(iri)) => iri.as_str().to_string(),
            _ => format!("{}#rule-{index}", shape.as_str()),
        };
        let order = match self.single(node, sh::ORDER)? {
            None => 0,
            Some(value) => value.as_literal().and_then(|l| l.as_integer()).ok_or_else(|| ShapeError::InvalidValue {
                node: node.clone(),
                predicate: Iri::new(sh::ORDER),
                value,
                expected: "an integer",
            })?,
        };
        let conditions = self
            .objects(node, sh::CONDITION)
            .iter()
            .map(|c| self.node_expression(c))
            .collect::<Result<Vec<_>, _>>()?;
        let condition = match conditions.len() {
            0 => None,
            1 => conditions.into_iter().next(),
            _ => Some(Constraint::And(conditions)),
        };
        let predicate = match self.single(node, sh::PREDICATE)? {
            None => return Err(ShapeError::MissingPredicate { rule: id }),
            Some(value) => self.iri_value(node, sh::PREDICATE, value)?,
        };
        let subject = self.node_spec(&id, node, sh::SUBJECT, "subject")?;
        let object = self.node_spec(&id, node, sh::OBJECT, "object")?;
        if let NodeSpec::Constant(Term::Literal(_)) = subject {
            return Err(ShapeError::InvalidValue {
                node: node.clone(),
                predicate: Iri::new(sh::SUBJECT),
                value: self.single(node, sh::SUBJECT)?.expect("subject present"),
                expected: "sh:this, a path node or an IRI",
            });
        }
        Ok(TripleRule { id, order, condition, subject, predicate, object })
    }

    fn node_spec(&self, rule: &str, node: &Term, p: &str, which: &'static str) -> Result<NodeSpec, ShapeError> {
        let value = self
            .single(node, p)?
            .ok_or_else(|| ShapeError::MissingNodeSpec { rule: rule.to_string(), which })?;
        match &value {
            Term::Iri(iri) if iri.as_str() == sh::THIS => Ok(NodeSpec::This),
            Term::BlankNode(_) => {
                let Some(path) = self.single(&value, sh::PATH)? else {
                    return Err(ShapeError::BlankConstant { rule: rule.to_string() });
                };
                self.check_vocabulary(&value, &[&[sh::PATH]])?;
                Ok(NodeSpec::PathFrom(self.path(&value, path)?))
            }
            _ => Ok(NodeSpec::Constant(value)),
        }
    }
}
