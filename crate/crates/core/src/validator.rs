//! Validation of a data graph against the constraint side of a shapes
//! document.

use std::collections::BTreeSet;

use crate::rdf::{Graph, Iri, PrefixMap, PropertyPath, Term};
use crate::shacl::{check_constraint, value_set, Constraint, ConstraintError, ShapesDocument, Severity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationResult {
    pub focus: Term,
    pub shape: Iri,
    pub constraint: Constraint,
    /// The first offending value, for components that quantify over values.
    pub value: Option<Term>,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub conforms: bool,
    pub results: Vec<ValidationResult>,
}

impl ValidationReport {
    pub fn violations(&self) -> impl Iterator<Item = &ValidationResult> {
        self.results.iter().filter(|r| r.severity == Severity::Violation)
    }

    pub fn infos(&self) -> impl Iterator<Item = &ValidationResult> {
        self.results.iter().filter(|r| r.severity == Severity::Info)
    }
}

/// Checks every focus node of every shape. Rules in `doc` are ignored.
/// Results are sorted by shape then focus node; messages render IRIs with
/// the data graph's prefixes.
pub fn validate(g: &Graph, doc: &ShapesDocument) -> Result<ValidationReport, ConstraintError> {
    let mut results = Vec::new();
    for shape in &doc.shapes {
        for focus in g.instances_of(&shape.target_class) {
            for c in &shape.constraints {
                if check_constraint(g, &focus, c)? {
                    continue;
                }
                let value = offending_value(g, &focus, c);
                results.push(ValidationResult {
                    message: message(g, &focus, c, g.prefixes()),
                    focus: focus.clone(),
                    shape: shape.id.clone(),
                    constraint: c.clone(),
                    value,
                    severity: shape.severity,
                });
            }
        }
    }
    results.sort_by(|a, b| (&a.shape, &a.focus).cmp(&(&b.shape, &b.focus)));
    let conforms = !results.iter().any(|r| r.severity == Severity::Violation);
    Ok(ValidationReport { conforms, results })
}

/// Identical to [`validate`]; kept as a named entry point for the
/// ontology cardinality restrictions (`has-data-controller exactly 1`).
pub fn validate_cardinality_restrictions(g: &Graph, doc: &ShapesDocument) -> Result<ValidationReport, ConstraintError> {
    validate(g, doc)
}

fn offending_value(g: &Graph, focus: &Term, c: &Constraint) -> Option<Term> {
    match c {
        Constraint::ClassMember { path, class } => value_set(g, focus, path).into_iter().find(|v| !g.has_type(v, class)),
        Constraint::Datatype { path, datatype } => value_set(g, focus, path)
            .into_iter()
            .find(|v| !v.as_literal().is_some_and(|l| &l.datatype().iri() == datatype)),
        Constraint::LessThan { path, other } => {
            let bound = value_set(g, focus, &PropertyPath::Predicate(other.clone()));
            let min = bound.iter().filter_map(|t| t.as_literal()?.as_integer()).min()?;
            value_set(g, focus, path)
                .into_iter()
                .find(|v| v.as_literal().and_then(|l| l.as_integer()).is_some_and(|n| n >= min))
        }
        _ => None,
    }
}

fn render_set(prefixes: &PrefixMap, values: &BTreeSet<Term>) -> String {
    if values.is_empty() {
        return "none".to_string();
    }
    let parts: Vec<String> = values.iter().map(|v| prefixes.render(v)).collect();
    parts.join(", ")
}

fn message(g: &Graph, focus: &Term, c: &Constraint, pm: &PrefixMap) -> String {
    match c {
        Constraint::HasValue { path, value } => format!(
            "{}: expected value {}, found {}",
            path.render(pm),
            pm.render(value),
            render_set(pm, &value_set(g, focus, path))
        ),
        Constraint::MinCount { path, min } => format!(
            "{}: expected at least {min} value(s), found {}",
            path.render(pm),
            value_set(g, focus, path).len()
        ),
        Constraint::MaxCount { path, max } => format!(
            "{}: expected at most {max} value(s), found {}",
            path.render(pm),
            value_set(g, focus, path).len()
        ),
        Constraint::ClassMember { path, class } => format!(
            "{}: every value must be an instance of {}, found {}",
            path.render(pm),
            pm.render_iri(class),
            render_set(pm, &value_set(g, focus, path))
        ),
        Constraint::LessThan { path, other } => format!(
            "{}: values {} must be less than {} values {}",
            path.render(pm),
            render_set(pm, &value_set(g, focus, path)),
            pm.render_iri(other),
            render_set(pm, &value_set(g, focus, &PropertyPath::Predicate(other.clone())))
        ),
        Constraint::Equals { path, other } => format!(
            "{}: values {} must equal {} values {}",
            path.render(pm),
            render_set(pm, &value_set(g, focus, path)),
            pm.render_iri(other),
            render_set(pm, &value_set(g, focus, &PropertyPath::Predicate(other.clone())))
        ),
        Constraint::Datatype { path, datatype } => format!(
            "{}: every value must have datatype {}, found {}",
            path.render(pm),
            pm.render_iri(datatype),
            render_set(pm, &value_set(g, focus, path))
        ),
        Constraint::Not(_) | Constraint::And(_) => format!("does not satisfy {}", c.render(pm)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;
    use crate::shacl::NodeShape;

    const NS: &str = "http://example.org/shRIOL#";

    fn iri(local: &str) -> Iri {
        Iri::new(format!("{NS}{local}"))
    }

    fn graph(body: &str) -> Graph {
        parse_turtle(&format!("@prefix shRIOL: <{NS}> .\n{body}")).unwrap()
    }

    fn shape(id: &str, constraints: Vec<Constraint>, severity: Severity) -> NodeShape {
        NodeShape { id: iri(id), target_class: iri("PersonalDataProcessing"), constraints, rules: vec![], severity }
    }

    fn controller_shape() -> ShapesDocument {
        let path = PropertyPath::Predicate(iri("has-data-controller"));
        ShapesDocument::new(vec![shape(
            "CheckDataController",
            vec![
                Constraint::MinCount { path: path.clone(), min: 1 },
                Constraint::MaxCount { path: path.clone(), max: 1 },
                Constraint::ClassMember { path, class: iri("DataController") },
            ],
            Severity::Violation,
        )])
    }

    #[test]
    fn empty_graph_conforms() {
        let report = validate(&Graph::new(), &controller_shape()).unwrap();
        assert!(report.conforms);
        assert!(report.results.is_empty());
    }

    #[test]
    fn controller_cardinality() {
        let doc = controller_shape();
        let one = graph("shRIOL:P a shRIOL:PersonalDataProcessing ; shRIOL:has-data-controller shRIOL:X .\nshRIOL:X a shRIOL:DataController .");
        assert!(validate_cardinality_restrictions(&one, &doc).unwrap().conforms);

        let zero = graph("shRIOL:P a shRIOL:PersonalDataProcessing .");
        let report = validate_cardinality_restrictions(&zero, &doc).unwrap();
        assert_eq!(report.results.len(), 1);
        assert!(matches!(report.results[0].constraint, Constraint::MinCount { min: 1, .. }));

        let two = graph(
            "shRIOL:P a shRIOL:PersonalDataProcessing ; shRIOL:has-data-controller shRIOL:X , shRIOL:Y .\n\
             shRIOL:X a shRIOL:DataController . shRIOL:Y a shRIOL:DataController .",
        );
        let report = validate_cardinality_restrictions(&two, &doc).unwrap();
        assert_eq!(report.results.len(), 1);
        assert!(matches!(report.results[0].constraint, Constraint::MaxCount { max: 1, .. }));
        assert_eq!(report.results[0].message, "shRIOL:has-data-controller: expected at most 1 value(s), found 2");
    }

    #[test]
    fn info_results_do_not_break_conformance() {
        let g = graph("shRIOL:P a shRIOL:PersonalDataProcessing .");
        let c = Constraint::HasValue { path: PropertyPath::Predicate(iri("is-lawful")), value: Term::boolean(true) };
        let doc = ShapesDocument::new(vec![shape("MayProcess", vec![c.clone()], Severity::Info)]);
        let report = validate(&g, &doc).unwrap();
        assert!(report.conforms);
        assert_eq!(report.infos().count(), 1);
        let doc = ShapesDocument::new(vec![shape("MustProcess", vec![c], Severity::Violation)]);
        let report = validate(&g, &doc).unwrap();
        assert!(!report.conforms);
        assert_eq!(report.results[0].message, "shRIOL:is-lawful: expected value true, found none");
    }

    #[test]
    fn offending_values_for_quantified_components() {
        let g = graph(
            "shRIOL:P a shRIOL:PersonalDataProcessing ; shRIOL:has-data-controller shRIOL:X ; shRIOL:age 20 ; shRIOL:limit 16 .",
        );
        let doc = ShapesDocument::new(vec![shape(
            "S",
            vec![
                Constraint::ClassMember { path: PropertyPath::Predicate(iri("has-data-controller")), class: iri("DataController") },
                Constraint::LessThan { path: PropertyPath::Predicate(iri("age")), other: iri("limit") },
            ],
            Severity::Violation,
        )]);
        let report = validate(&g, &doc).unwrap();
        let values: Vec<_> = report.results.iter().map(|r| r.value.clone()).collect();
        assert_eq!(values, vec![Some(Term::Iri(iri("X"))), Some(Term::integer(20))]);
    }
}
