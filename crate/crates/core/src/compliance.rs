//! End-to-end compliance checking: inference, validation and the
//! authority-based explanation of transparency failures.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use thiserror::Error;

use crate::inference::{execute_rules, stratify, InferenceError, Provenance, StratificationError};
use crate::norms::{compile, parse_norms, CompileError, NormError};
use crate::rdf::{parse_turtle, Graph, Iri, PrefixMap, Term, Triple, TurtleError};
use crate::shacl::{parse_shapes, ConstraintError, ShapeError, ShapesDocument};
use crate::validator::{validate, ValidationReport, ValidationResult};
use crate::vocab::shriol;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("turtle: {0}")]
    Turtle(#[from] TurtleError),
    #[error("shapes: {0}")]
    Shapes(#[from] ShapeError),
    #[error("norms: {0}")]
    Norms(#[from] NormError),
    #[error("norms: {0}")]
    Compile(#[from] CompileError),
    #[error("rules: {0}")]
    Stratification(#[from] StratificationError),
    #[error("inference: {0}")]
    Inference(#[from] InferenceError),
    #[error("validation: {0}")]
    Constraint(#[from] ConstraintError),
}

/// Vocabulary the explanation step walks: from a processing through
/// `theme_of` to communications, and from each communication to the
/// authorities that rejected or supported it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplainVocabulary {
    pub theme_of: Iri,
    pub communication: Iri,
    pub rejected_by: Iri,
    pub supported_by: Iri,
    /// Violations on constraints reading this predicate get explanations.
    pub explained_predicate: Iri,
}

impl Default for ExplainVocabulary {
    fn default() -> Self {
        ExplainVocabulary {
            theme_of: Iri::new(shriol::IS_THEME_OF),
            communication: Iri::new(shriol::COMMUNICATE),
            rejected_by: Iri::new(shriol::IS_REJECTED_BY),
            supported_by: Iri::new(shriol::IS_SUPPORTED_BY),
            explained_predicate: Iri::new(shriol::IS_TRANSPARENT),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub communication: Term,
    pub rejected_by: Vec<Term>,
    pub supported_by: Vec<Term>,
}

/// Communications about `focus` with the authorities ruling on each.
pub fn explain(g: &Graph, focus: &Term, vocab: &ExplainVocabulary) -> Vec<Explanation> {
    g.objects(focus, &vocab.theme_of)
        .filter(|c| g.has_type(c, &vocab.communication))
        .map(|c| Explanation {
            communication: c.clone(),
            rejected_by: g.objects(c, &vocab.rejected_by).cloned().collect(),
            supported_by: g.objects(c, &vocab.supported_by).cloned().collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub shape: String,
    pub focus: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportExplanation {
    pub communication: String,
    pub rejected_by: Vec<String>,
    pub supported_by: Vec<String>,
}

/// The machine-readable verdict. Serializes with sorted keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplianceReport {
    pub conforms: bool,
    pub violations: Vec<ReportEntry>,
    pub info: Vec<ReportEntry>,
    pub explanations: BTreeMap<String, Vec<ReportExplanation>>,
    pub inferred: usize,
}

impl ComplianceReport {
    pub fn to_json(&self) -> String {
        // Going through Value sorts object keys.
        let value = serde_json::to_value(self).expect("report is plain data");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn exit_code(&self) -> i32 {
        if self.conforms {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self, prefixes: &PrefixMap) -> String {
        let compact = |s: &str| prefixes.compact_iri(&Iri::new(s)).unwrap_or_else(|| s.to_string());
        let mut out = String::new();
        let verdict = if self.conforms { "conforms" } else { "does not conform" };
        let _ = writeln!(out, "{verdict}: {} violation(s), {} info, {} inferred triple(s)", self.violations.len(), self.info.len(), self.inferred);
        for (label, entries) in [("violation", &self.violations), ("info", &self.info)] {
            for e in entries {
                let _ = writeln!(out, "  [{label}] {} on {}: {}", compact(&e.shape), compact(&e.focus), e.message);
            }
        }
        for (focus, entries) in &self.explanations {
            let _ = writeln!(out, "  why {} is flagged:", compact(focus));
            for e in entries {
                let list = |v: &[String]| {
                    if v.is_empty() {
                        "nobody".to_string()
                    } else {
                        v.iter().map(|s| compact(s)).collect::<Vec<_>>().join(", ")
                    }
                };
                let _ = writeln!(
                    out,
                    "    {}: rejected by {}; supported by {}",
                    compact(&e.communication),
                    list(&e.rejected_by),
                    list(&e.supported_by)
                );
            }
        }
        out
    }
}

/// Report identifier of a term: the bare IRI, `_:label`, or the literal.
pub fn term_key(t: &Term) -> String {
    match t {
        Term::Iri(iri) => iri.as_str().to_string(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub infer: bool,
    pub explain: bool,
    pub vocabulary: ExplainVocabulary,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { infer: true, explain: false, vocabulary: ExplainVocabulary::default() }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub report: ComplianceReport,
    pub validation: ValidationReport,
    /// The data graph after inference (the input graph when inference is
    /// off).
    pub graph: Graph,
    pub provenance: BTreeMap<Triple, Provenance>,
}

pub fn shapes_from_norms(text: &str) -> Result<ShapesDocument, CheckError> {
    Ok(compile(&parse_norms(text)?)?)
}

pub fn shapes_from_turtle(text: &str) -> Result<ShapesDocument, CheckError> {
    Ok(parse_shapes(&parse_turtle(text)?)?)
}

/// Loads several Turtle documents into one graph, renaming blank nodes
/// apart.
pub fn load_data<'a>(documents: impl IntoIterator<Item = &'a str>) -> Result<Graph, CheckError> {
    let mut g = Graph::new();
    for text in documents {
        crate::rdf::parse_turtle_into(&mut g, text)?;
    }
    Ok(g)
}

/// stratify, execute rules, validate, explain, report.
pub fn check(data: &Graph, shapes: &ShapesDocument, options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
    stratify(shapes)?;
    let (graph, provenance) = if options.infer {
        let result = execute_rules(data, shapes)?;
        (result.graph, result.provenance)
    } else {
        (data.clone(), BTreeMap::new())
    };
    let validation = validate(&graph, shapes)?;

    let entry = |r: &ValidationResult| ReportEntry {
        shape: r.shape.as_str().to_string(),
        focus: term_key(&r.focus),
        message: r.message.clone(),
    };
    let mut violations: Vec<ReportEntry> = validation.violations().map(entry).collect();
    let mut info: Vec<ReportEntry> = validation.infos().map(entry).collect();
    violations.sort_by(|a, b| (&a.shape, &a.focus).cmp(&(&b.shape, &b.focus)));
    info.sort_by(|a, b| (&a.shape, &a.focus).cmp(&(&b.shape, &b.focus)));

    let mut explanations = BTreeMap::new();
    if options.explain {
        let vocab = &options.vocabulary;
        for r in validation.violations() {
            if !r.constraint.predicates().contains(&&vocab.explained_predicate) {
                continue;
            }
            let entries = explain(&graph, &r.focus, vocab)
                .into_iter()
                .map(|e| ReportExplanation {
                    communication: term_key(&e.communication),
                    rejected_by: e.rejected_by.iter().map(term_key).collect(),
                    supported_by: e.supported_by.iter().map(term_key).collect(),
                })
                .collect();
            explanations.insert(term_key(&r.focus), entries);
        }
    }

    let report = ComplianceReport {
        conforms: validation.conforms,
        violations,
        info,
        explanations,
        inferred: provenance.len(),
    };
    Ok(CheckOutcome { report, validation, graph, provenance })
}
