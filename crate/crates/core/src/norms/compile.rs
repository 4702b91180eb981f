use thiserror::Error;

use super::{Antecedent, Atom, CardinalityKind, CompareKind, Consequent, NormKind, NormRule, NormSet};
use crate::inference::{stratify, StratificationError};
use crate::rdf::{Iri, PrefixMap};
use crate::shacl::{Constraint, NodeShape, Severity, ShapesDocument, TripleRule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("constitutive norms {reading:?} and {emitting:?} cannot be stratified: {source}")]
    Unstratifiable {
        reading: String,
        emitting: String,
        #[source]
        source: StratificationError,
    },
}

/// IRI of the shape compiled from a norm: the id itself if it is a prefixed
/// name with a known prefix, otherwise a `urn:norm:` IRI.
pub fn norm_shape_iri(id: &str, prefixes: &PrefixMap) -> Iri {
    id.split_once(':')
        .and_then(|(prefix, local)| prefixes.expand(prefix, local))
        .unwrap_or_else(|| Iri::new(format!("urn:norm:{id}")))
}

/// Obligations and permissions become node shapes (Violation and Info
/// severity respectively); each constitutive norm becomes a shape carrying
/// one triple rule.
pub fn compile(ns: &NormSet) -> Result<ShapesDocument, CompileError> {
    let shapes = ns.norms.iter().map(|n| compile_norm(n, &ns.prefixes)).collect();
    let doc = ShapesDocument::new(shapes);
    if let Err(source) = stratify(&doc) {
        return Err(CompileError::Unstratifiable {
            reading: source.reading_rule.clone(),
            emitting: source.emitting_rule.clone(),
            source,
        });
    }
    Ok(doc)
}

fn compile_norm(norm: &NormRule, prefixes: &PrefixMap) -> NodeShape {
    let mut shape = NodeShape {
        id: norm_shape_iri(&norm.id, prefixes),
        target_class: norm.target.clone(),
        constraints: Vec::new(),
        rules: Vec::new(),
        severity: match norm.kind {
            NormKind::Permission => Severity::Info,
            NormKind::Obligation | NormKind::Constitutive => Severity::Violation,
        },
    };
    let mut antecedent: Vec<Constraint> = norm.antecedent.iter().map(antecedent_constraint).collect();
    match &norm.consequent {
        Consequent::Require { path, value } => {
            let required = Constraint::HasValue { path: path.clone(), value: value.clone() };
            shape.constraints.push(if antecedent.is_empty() {
                required
            } else {
                // "if a then required" as "not (a and not required)"
                antecedent.push(Constraint::not(required));
                Constraint::not(Constraint::And(antecedent))
            });
        }
        Consequent::Assert { subject, predicate, object } => {
            let condition = match antecedent.len() {
                0 => None,
                1 => antecedent.pop(),
                _ => Some(Constraint::And(antecedent)),
            };
            shape.rules.push(TripleRule {
                id: norm.id.clone(),
                order: norm.order,
                condition,
                subject: subject.clone(),
                predicate: predicate.clone(),
                object: object.clone(),
            });
        }
    }
    shape
}

fn antecedent_constraint(a: &Antecedent) -> Constraint {
    match a {
        Antecedent::Atom(atom) => atom_constraint(atom),
        Antecedent::Naf(naf) => Constraint::not(atom_constraint(&naf.inner)),
    }
}

fn atom_constraint(atom: &Atom) -> Constraint {
    match atom.clone() {
        Atom::Class { path, class } => Constraint::ClassMember { path, class },
        Atom::Compare { kind: CompareKind::LessThan, path, other } => Constraint::LessThan { path, other },
        Atom::Compare { kind: CompareKind::Equals, path, other } => Constraint::Equals { path, other },
        Atom::Cardinality { kind: CardinalityKind::Min, path, n } => Constraint::MinCount { path, min: n },
        Atom::Cardinality { kind: CardinalityKind::Max, path, n } => Constraint::MaxCount { path, max: n },
    }
}
