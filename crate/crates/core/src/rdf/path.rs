use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Graph, Iri, PrefixMap, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("a property path needs at least one predicate")]
    Empty,
}

/// A single predicate, or a sequence of at least two predicates traversed
/// in order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyPath {
    Predicate(Iri),
    Sequence(Vec<Iri>),
}

impl PropertyPath {
    /// Builds a path from its steps; a one-element list collapses to a
    /// plain predicate.
    pub fn from_steps(mut steps: Vec<Iri>) -> Result<Self, PathError> {
        match steps.len() {
            0 => Err(PathError::Empty),
            1 => Ok(PropertyPath::Predicate(steps.remove(0))),
            _ => Ok(PropertyPath::Sequence(steps)),
        }
    }

    pub fn steps(&self) -> &[Iri] {
        match self {
            PropertyPath::Predicate(p) => std::slice::from_ref(p),
            PropertyPath::Sequence(steps) => steps,
        }
    }

    pub fn render(&self, prefixes: &PrefixMap) -> String {
        match self {
            PropertyPath::Predicate(p) => prefixes.render_iri(p),
            PropertyPath::Sequence(steps) => {
                let parts: Vec<String> = steps.iter().map(|p| prefixes.render_iri(p)).collect();
                format!("({})", parts.join(" "))
            }
        }
    }
}

impl From<Iri> for PropertyPath {
    fn from(p: Iri) -> Self {
        PropertyPath::Predicate(p)
    }
}

impl fmt::Display for PropertyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&PrefixMap::new()))
    }
}

/// Nodes reachable from `start` by following the steps of `path` in order.
pub fn evaluate_path(g: &Graph, start: &Term, path: &PropertyPath) -> BTreeSet<Term> {
    let mut frontier = BTreeSet::from([start.clone()]);
    for step in path.steps() {
        frontier = frontier.iter().flat_map(|node| g.objects(node, step).cloned()).collect();
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}
