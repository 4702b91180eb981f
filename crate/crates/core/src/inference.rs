//! Ordered, stratified forward chaining of triple rules.
//!
//! Rules run in ascending `sh:order` groups; each group is iterated to a
//! fixpoint before the next one starts. Negative conditions are sound only
//! when the predicates they read are settled by lower groups, which
//! [`stratify`] checks up front.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::rdf::{evaluate_path, rdf_type, Graph, Iri, Term, Triple};
use crate::shacl::{check_constraint, Constraint, ConstraintError, NodeShape, NodeSpec, ShapesDocument, TripleRule};

/// Something a condition reads non-monotonically: adding triples can turn
/// it from satisfied to unsatisfied.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dependency {
    Predicate(Iri),
    Class(Iri),
}

impl fmt::Display for Dependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dependency::Predicate(p) => write!(f, "predicate {p}"),
            Dependency::Class(c) => write!(f, "class {c}"),
        }
    }
}

/// `reading_rule` depends on something `emitting_rule` may still add when
/// the reader runs: either a negative read at the same or a later order, or
/// any read of a fact only a later order produces.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct StratificationError {
    pub reading_rule: String,
    pub reading_order: i64,
    pub emitting_rule: String,
    pub emitting_order: i64,
    pub dependency: Dependency,
    pub negative: bool,
}

impl fmt::Display for StratificationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = if self.negative { "negatively" } else { "before it is settled" };
        write!(
            f,
            "rule `{}` (order {}) reads {} {how}, but rule `{}` emits it at order {}",
            self.reading_rule, self.reading_order, self.dependency, self.emitting_rule, self.emitting_order
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InferenceError {
    #[error(transparent)]
    Stratification(#[from] StratificationError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
}

/// A rule together with the shape whose target class supplies its focus
/// nodes.
#[derive(Debug, Clone, Copy)]
pub struct ScheduledRule<'a> {
    pub shape: &'a NodeShape,
    pub rule: &'a TripleRule,
}

#[derive(Debug, Clone)]
pub struct Stratum<'a> {
    pub order: i64,
    pub rules: Vec<ScheduledRule<'a>>,
}

/// Groups rules by `sh:order` (ascending, document order within a group)
/// and rejects rule sets whose negative conditions read something emitted
/// at the same or a later order, or whose rules read (target class,
/// condition, subject or object paths) anything emitted at a later order.
///
/// A rule may negate its own emitted predicate when it writes a constant
/// on the focus node itself and reads that predicate only as a single
/// step from the focus (the "set a default unless already set" pattern).
pub fn stratify(doc: &ShapesDocument) -> Result<Vec<Stratum<'_>>, StratificationError> {
    let scheduled: Vec<ScheduledRule<'_>> =
        doc.rules().map(|(shape, rule)| ScheduledRule { shape, rule }).collect();

    for (ri, r) in scheduled.iter().enumerate() {
        let Some(condition) = &r.rule.condition else { continue };
        let deps = negative_dependencies(condition);
        for (si, s) in scheduled.iter().enumerate() {
            if s.rule.order < r.rule.order {
                continue;
            }
            for dep in &deps {
                if !emits(s.rule, dep) {
                    continue;
                }
                if ri == si && is_self_default(r.rule, dep) {
                    continue;
                }
                return Err(StratificationError {
                    reading_rule: r.rule.id.clone(),
                    reading_order: r.rule.order,
                    emitting_rule: s.rule.id.clone(),
                    emitting_order: s.rule.order,
                    dependency: dep.clone(),
                    negative: true,
                });
            }
        }
    }

    for r in &scheduled {
        let reads = reads(r);
        for s in scheduled.iter().filter(|s| s.rule.order > r.rule.order) {
            if let Some(dep) = reads.iter().find(|d| emits(s.rule, d)) {
                return Err(StratificationError {
                    reading_rule: r.rule.id.clone(),
                    reading_order: r.rule.order,
                    emitting_rule: s.rule.id.clone(),
                    emitting_order: s.rule.order,
                    dependency: dep.clone(),
                    negative: false,
                });
            }
        }
    }

    let mut groups: BTreeMap<i64, Vec<ScheduledRule<'_>>> = BTreeMap::new();
    for s in scheduled {
        groups.entry(s.rule.order).or_default().push(s);
    }
    Ok(groups.into_iter().map(|(order, rules)| Stratum { order, rules }).collect())
}

/// Non-monotone reads of `c`: everything under `sh:not`, plus every
/// component other than `hasValue` / `minCount` at positive polarity.
pub fn negative_dependencies(c: &Constraint) -> BTreeSet<Dependency> {
    let mut out = BTreeSet::new();
    collect_negative(c, true, &mut out);
    out
}

fn collect_negative(c: &Constraint, positive: bool, out: &mut BTreeSet<Dependency>) {
    match c {
        Constraint::HasValue { .. } | Constraint::MinCount { .. } if positive => {}
        Constraint::Not(inner) => collect_negative(inner, false, out),
        Constraint::And(items) => items.iter().for_each(|i| collect_negative(i, positive, out)),
        leaf => {
            out.extend(leaf.predicates().into_iter().cloned().map(Dependency::Predicate));
            if let Constraint::ClassMember { class, .. } = leaf {
                out.insert(Dependency::Class(class.clone()));
            }
        }
    }
}

/// Everything a scheduled rule looks at, positively or not.
fn reads(r: &ScheduledRule<'_>) -> BTreeSet<Dependency> {
    let mut out = BTreeSet::new();
    out.insert(Dependency::Class(r.shape.target_class.clone()));
    if let Some(condition) = &r.rule.condition {
        visit_leaves(condition, &mut |leaf| {
            out.extend(leaf.predicates().into_iter().cloned().map(Dependency::Predicate));
            if let Constraint::ClassMember { class, .. } = leaf {
                out.insert(Dependency::Class(class.clone()));
            }
        });
    }
    for spec in [&r.rule.subject, &r.rule.object] {
        if let NodeSpec::PathFrom(path) = spec {
            out.extend(path.steps().iter().cloned().map(Dependency::Predicate));
        }
    }
    out
}

fn emits(rule: &TripleRule, dep: &Dependency) -> bool {
    match dep {
        Dependency::Predicate(p) => &rule.predicate == p,
        Dependency::Class(c) => {
            rule.predicate == rdf_type()
                && match &rule.object {
                    NodeSpec::Constant(Term::Iri(o)) => o == c,
                    NodeSpec::Constant(_) => false,
                    NodeSpec::This | NodeSpec::PathFrom(_) => true,
                }
        }
    }
}

fn is_self_default(rule: &TripleRule, dep: &Dependency) -> bool {
    let Dependency::Predicate(p) = dep else { return false };
    if &rule.predicate != p
        || rule.subject != NodeSpec::This
        || matches!(rule.object, NodeSpec::PathFrom(_))
    {
        return false;
    }
    let Some(condition) = &rule.condition else { return true };
    let mut single_step_only = true;
    visit_leaves(condition, &mut |leaf| {
        if let Some(path) = leaf.path() {
            if path.steps().contains(p) && path.steps().len() > 1 {
                single_step_only = false;
            }
        }
    });
    single_step_only
}

fn visit_leaves(c: &Constraint, f: &mut impl FnMut(&Constraint)) {
    match c {
        Constraint::Not(inner) => visit_leaves(inner, f),
        Constraint::And(items) => items.iter().for_each(|i| visit_leaves(i, f)),
        leaf => f(leaf),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub rule: String,
    pub order: i64,
    pub focus: Term,
}

#[derive(Debug, Clone)]
pub struct InferenceResult {
    /// Input data plus every inferred triple.
    pub graph: Graph,
    /// First derivation of each inferred triple.
    pub provenance: BTreeMap<Triple, Provenance>,
}

impl InferenceResult {
    pub fn inferred_count(&self) -> usize {
        self.provenance.len()
    }

    pub fn inferred(&self) -> impl Iterator<Item = &Triple> {
        self.provenance.keys()
    }
}

/// Runs every rule of `doc` over `data` to a fixpoint, stratum by stratum.
pub fn execute_rules(data: &Graph, doc: &ShapesDocument) -> Result<InferenceResult, InferenceError> {
    let strata = stratify(doc)?;
    let mut graph = data.clone();
    let mut provenance = BTreeMap::new();
    for stratum in &strata {
        loop {
            let mut changed = false;
            for scheduled in &stratum.rules {
                // Each rule sees the graph as it stood before the rule ran;
                // its emissions are committed together afterwards.
                let emitted = fire(&graph, scheduled)?;
                for (triple, focus) in emitted {
                    if graph.insert(triple.clone()) {
                        changed = true;
                        provenance.entry(triple).or_insert_with(|| Provenance {
                            rule: scheduled.rule.id.clone(),
                            order: scheduled.rule.order,
                            focus,
                        });
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
    Ok(InferenceResult { graph, provenance })
}

fn fire(g: &Graph, scheduled: &ScheduledRule<'_>) -> Result<Vec<(Triple, Term)>, ConstraintError> {
    let rule = scheduled.rule;
    let mut out = Vec::new();
    for focus in g.instances_of(&scheduled.shape.target_class) {
        if let Some(condition) = &rule.condition {
            if !check_constraint(g, &focus, condition)? {
                continue;
            }
        }
        let objects = resolve(g, &focus, &rule.object);
        for subject in resolve(g, &focus, &rule.subject) {
            if subject.is_literal() {
                continue;
            }
            for object in &objects {
                let triple = Triple::new(subject.clone(), rule.predicate.clone(), object.clone())
                    .expect("literal subjects are skipped");
                if !g.contains(&triple) {
                    out.push((triple, focus.clone()));
                }
            }
        }
    }
    Ok(out)
}

fn resolve(g: &Graph, focus: &Term, spec: &NodeSpec) -> BTreeSet<Term> {
    match spec {
        NodeSpec::This => BTreeSet::from([focus.clone()]),
        NodeSpec::Constant(t) => BTreeSet::from([t.clone()]),
        NodeSpec::PathFrom(path) => evaluate_path(g, focus, path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{parse_turtle, PropertyPath};
    use crate::shacl::Severity;

    const NS: &str = "http://x/";

    fn iri(local: &str) -> Iri {
        Iri::new(format!("{NS}{local}"))
    }

    fn rule(id: &str, order: i64, condition: Option<Constraint>, predicate: &str, object: NodeSpec) -> TripleRule {
        TripleRule { id: id.into(), order, condition, subject: NodeSpec::This, predicate: iri(predicate), object }
    }

    fn doc(rules: Vec<TripleRule>) -> ShapesDocument {
        ShapesDocument::new(vec![NodeShape {
            id: iri("S"),
            target_class: iri("C"),
            constraints: vec![],
            rules,
            severity: Severity::Violation,
        }])
    }

    fn absent(p: &str) -> Constraint {
        Constraint::MaxCount { path: PropertyPath::Predicate(iri(p)), max: 0 }
    }

    #[test]
    fn groups_are_sorted_by_order() {
        let d = doc(vec![
            rule("late", 2, None, "q", NodeSpec::Constant(Term::integer(1))),
            rule("early", 0, None, "p", NodeSpec::Constant(Term::integer(1))),
            rule("late2", 2, None, "r", NodeSpec::Constant(Term::integer(1))),
        ]);
        let strata = stratify(&d).unwrap();
        let layout: Vec<(i64, Vec<&str>)> = strata
            .iter()
            .map(|s| (s.order, s.rules.iter().map(|r| r.rule.id.as_str()).collect()))
            .collect();
        assert_eq!(layout, vec![(0, vec!["early"]), (2, vec!["late", "late2"])]);
        assert!(stratify(&ShapesDocument::default()).unwrap().is_empty());
    }

    #[test]
    fn negation_over_a_later_emission_is_rejected() {
        let d = doc(vec![
            rule("negates", 0, Some(absent("p")), "q", NodeSpec::Constant(Term::boolean(true))),
            rule("emits", 1, None, "p", NodeSpec::Constant(Term::boolean(true))),
        ]);
        let err = stratify(&d).unwrap_err();
        assert_eq!(err.reading_rule, "negates");
        assert_eq!(err.emitting_rule, "emits");
        assert_eq!(err.dependency, Dependency::Predicate(iri("p")));
    }

    #[test]
    fn reading_a_later_emission_is_rejected() {
        let present = Constraint::MinCount { path: PropertyPath::Predicate(iri("p")), min: 1 };
        let d = doc(vec![
            rule("reads", 0, Some(present.clone()), "q", NodeSpec::Constant(Term::boolean(true))),
            rule("emits", 1, None, "p", NodeSpec::Constant(Term::boolean(true))),
        ]);
        let err = stratify(&d).unwrap_err();
        assert_eq!((err.reading_rule.as_str(), err.emitting_rule.as_str(), err.negative), ("reads", "emits", false));
        // the same read within one order is fine: the group runs to a fixpoint
        let same = doc(vec![
            rule("reads", 1, Some(present), "q", NodeSpec::Constant(Term::boolean(true))),
            rule("emits", 1, None, "p", NodeSpec::Constant(Term::boolean(true))),
        ]);
        assert!(stratify(&same).is_ok());
        // a later rule adding members of the target class is a read too
        let typing = TripleRule {
            id: "typing".into(),
            order: 1,
            condition: None,
            subject: NodeSpec::PathFrom(PropertyPath::Predicate(iri("next"))),
            predicate: rdf_type(),
            object: NodeSpec::Constant(Term::Iri(iri("C"))),
        };
        let d = doc(vec![rule("early", 0, None, "q", NodeSpec::Constant(Term::integer(1))), typing]);
        assert_eq!(stratify(&d).unwrap_err().dependency, Dependency::Class(iri("C")));
    }

    #[test]
    fn negated_class_needs_the_class_settled_first() {
        let not_member = Constraint::not(Constraint::ClassMember { path: PropertyPath::Predicate(iri("t")), class: iri("Ex") });
        let typing = |order| TripleRule {
            id: "typing".into(),
            order,
            condition: None,
            subject: NodeSpec::PathFrom(PropertyPath::Predicate(iri("t"))),
            predicate: rdf_type(),
            object: NodeSpec::Constant(Term::Iri(iri("Ex"))),
        };
        let ok = doc(vec![typing(1), rule("blocked", 2, Some(not_member.clone()), "lawful", NodeSpec::Constant(Term::boolean(true)))]);
        assert!(stratify(&ok).is_ok());
        let bad = doc(vec![typing(2), rule("blocked", 2, Some(not_member), "lawful", NodeSpec::Constant(Term::boolean(true)))]);
        assert!(stratify(&bad).is_err());
    }

    #[test]
    fn default_value_pattern_may_negate_itself() {
        let d = doc(vec![rule("default", 1, Some(absent("t")), "t", NodeSpec::Constant(Term::boolean(true)))]);
        assert!(stratify(&d).is_ok());
        let from_path = doc(vec![rule(
            "default",
            1,
            Some(absent("t")),
            "t",
            NodeSpec::PathFrom(PropertyPath::Predicate(iri("u"))),
        )]);
        assert!(stratify(&from_path).is_err());
    }

    #[test]
    fn default_fires_only_where_unset() {
        let data = parse_turtle("@prefix : <http://x/> . :a a :C . :b a :C ; :t false .").unwrap();
        let d = doc(vec![rule("default", 1, Some(absent("t")), "t", NodeSpec::Constant(Term::boolean(true)))]);
        let result = execute_rules(&data, &d).unwrap();
        assert_eq!(result.inferred_count(), 1);
        assert!(result.graph.contains_parts(&Term::Iri(iri("a")), &iri("t"), &Term::boolean(true)));
        assert!(!result.graph.contains_parts(&Term::Iri(iri("b")), &iri("t"), &Term::boolean(true)));
        let prov = result.provenance.values().next().unwrap();
        assert_eq!((prov.rule.as_str(), prov.order, &prov.focus), ("default", 1, &Term::Iri(iri("a"))));
    }

    #[test]
    fn empty_rule_set_leaves_data_alone() {
        let data = parse_turtle("@prefix : <http://x/> . :a a :C .").unwrap();
        let result = execute_rules(&data, &ShapesDocument::default()).unwrap();
        assert_eq!(result.graph, data);
        assert!(result.provenance.is_empty());
    }

    #[test]
    fn fixpoint_within_a_group_and_empty_paths() {
        // :a -next-> :b -next-> :c ; a rule copies `next` targets into the class
        let data = parse_turtle("@prefix : <http://x/> . :a a :C ; :next :b . :b :next :c . :c :next :d .").unwrap();
        let d = doc(vec![TripleRule {
            id: "spread".into(),
            order: 0,
            condition: None,
            subject: NodeSpec::PathFrom(PropertyPath::Predicate(iri("next"))),
            predicate: rdf_type(),
            object: NodeSpec::Constant(Term::Iri(iri("C"))),
        }]);
        let result = execute_rules(&data, &d).unwrap();
        assert_eq!(result.graph.instances_of(&iri("C")).len(), 4);
        // :d has no `next`, so the last pass emits nothing for it
        assert_eq!(result.inferred_count(), 3);
    }
}
