use std::collections::BTreeSet;

use thiserror::Error;

use super::Constraint;
use crate::rdf::{evaluate_path, Graph, PropertyPath, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("lessThan at focus node {focus} compares non-integer value {value}")]
    NonNumericComparison { focus: Term, value: Term },
}

pub fn value_set(g: &Graph, focus: &Term, path: &PropertyPath) -> BTreeSet<Term> {
    evaluate_path(g, focus, path)
}

/// Whether `focus` conforms to `c` in `g`.
pub fn check_constraint(g: &Graph, focus: &Term, c: &Constraint) -> Result<bool, ConstraintError> {
    Ok(match c {
        Constraint::HasValue { path, value } => value_set(g, focus, path).contains(value),
        Constraint::MinCount { path, min } => value_set(g, focus, path).len() >= *min,
        Constraint::MaxCount { path, max } => value_set(g, focus, path).len() <= *max,
        Constraint::ClassMember { path, class } => {
            value_set(g, focus, path).iter().all(|v| g.has_type(v, class))
        }
        Constraint::LessThan { path, other } => {
            let left = value_set(g, focus, path);
            let right = value_set(g, focus, &PropertyPath::Predicate(other.clone()));
            if left.is_empty() || right.is_empty() {
                return Ok(true);
            }
            let left = integers(focus, &left)?;
            let right = integers(focus, &right)?;
            // every v < every w  <=>  max(v) < min(w)
            left.iter().max() < right.iter().min()
        }
        Constraint::Equals { path, other } => {
            value_set(g, focus, path) == value_set(g, focus, &PropertyPath::Predicate(other.clone()))
        }
        Constraint::Datatype { path, datatype } => value_set(g, focus, path)
            .iter()
            .all(|v| v.as_literal().is_some_and(|l| &l.datatype().iri() == datatype)),
        Constraint::Not(inner) => !check_constraint(g, focus, inner)?,
        Constraint::And(items) => {
            for item in items {
                if !check_constraint(g, focus, item)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

fn integers(focus: &Term, values: &BTreeSet<Term>) -> Result<Vec<i64>, ConstraintError> {
    values
        .iter()
        .map(|v| {
            v.as_literal().and_then(|l| l.as_integer()).ok_or_else(|| {
                ConstraintError::NonNumericComparison { focus: focus.clone(), value: v.clone() }
            })
        })
        .collect()
}
