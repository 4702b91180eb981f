//! Generators and brute-force oracles shared by the integration tests.
//!
//! The oracles work on a plain `Vec<Triple>` and re-derive every answer
//! from the definitions, never touching the graph indexes.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use normcheck::rdf::{Graph, Iri, PropertyPath, Term, Triple};
use normcheck::shacl::{Constraint, NodeShape, NodeSpec, Severity, ShapesDocument, TripleRule};
use normcheck::vocab::{rdf, xsd};
use proptest::prelude::*;

pub const SHRIOL: &str = "http://example.org/shRIOL#";
pub const T: &str = "http://t/";

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn s(local: &str) -> Term {
    Term::iri(format!("{SHRIOL}{local}"))
}

pub fn si(local: &str) -> Iri {
    Iri::new(format!("{SHRIOL}{local}"))
}

pub fn t(local: &str) -> Term {
    Term::iri(format!("{T}{local}"))
}

pub fn ti(local: &str) -> Iri {
    Iri::new(format!("{T}{local}"))
}

pub fn rdf_type() -> Iri {
    Iri::new(rdf::TYPE)
}

// ---- generators -------------------------------------------------------

/// Nodes usable as subjects. `n4` and `n5` double as classes.
pub fn subjects() -> Vec<Term> {
    let mut v: Vec<Term> = (0..6).map(|i| t(&format!("n{i}"))).collect();
    v.push(Term::blank("b0"));
    v.push(Term::blank("b1"));
    v
}

pub fn classes() -> Vec<Iri> {
    vec![ti("n4"), ti("n5")]
}

pub fn predicates() -> Vec<Iri> {
    vec![ti("p0"), ti("p1"), ti("p2"), rdf_type()]
}

pub fn literals() -> Vec<Term> {
    let mut v: Vec<Term> = (-1..5).map(Term::integer).collect();
    v.extend([Term::boolean(true), Term::boolean(false), Term::string("a"), Term::string("b")]);
    v
}

pub fn arb_subject() -> impl Strategy<Value = Term> {
    prop::sample::select(subjects())
}

pub fn arb_object() -> impl Strategy<Value = Term> {
    let mut all = subjects();
    all.extend(literals());
    prop::sample::select(all)
}

pub fn arb_predicate() -> impl Strategy<Value = Iri> {
    prop::sample::select(predicates())
}

pub fn arb_triple() -> impl Strategy<Value = Triple> {
    (arb_subject(), arb_predicate(), arb_object(), 0..3usize).prop_map(|(s, p, o, k)| {
        // type triples mostly point at the two classes so shapes have targets
        let o = match (p == rdf_type(), &o) {
            (false, _) => o,
            (true, Term::Iri(_)) if k == 2 => o,
            (true, _) => Term::Iri(classes()[k % 2].clone()),
        };
        Triple::new(s, p, o).unwrap()
    })
}

/// Up to `max` triples; duplicates collapse, so graphs are often smaller.
pub fn arb_triples(max: usize) -> impl Strategy<Value = Vec<Triple>> {
    prop::collection::vec(arb_triple(), 0..=max).prop_map(|mut v| {
        v.sort();
        v.dedup();
        v
    })
}

pub fn graph_of(triples: &[Triple]) -> Graph {
    let mut g: Graph = triples.iter().cloned().collect();
    g.prefixes_mut().insert("t", T);
    g
}

pub fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    arb_triples(max).prop_map(|v| graph_of(&v))
}

pub fn arb_path() -> impl Strategy<Value = PropertyPath> {
    prop::collection::vec(arb_predicate(), 1..=3).prop_map(|steps| PropertyPath::from_steps(steps).unwrap())
}

/// Paths of one or two steps, which reach something far more often.
pub fn arb_short_path() -> impl Strategy<Value = PropertyPath> {
    prop::collection::vec(arb_predicate(), 1..=2).prop_map(|steps| PropertyPath::from_steps(steps).unwrap())
}

fn datatype_iris() -> Vec<Iri> {
    vec![Iri::new(xsd::INTEGER), Iri::new(xsd::BOOLEAN), Iri::new(xsd::STRING), ti("n4")]
}

/// Leaf constraints; `comparisons` controls whether `lessThan` (which can
/// fail with a type error) is generated.
pub fn arb_leaf(comparisons: bool) -> BoxedStrategy<Constraint> {
    let other = || prop::sample::select(predicates());
    let mut options: Vec<BoxedStrategy<Constraint>> = vec![
        (arb_path(), arb_object()).prop_map(|(path, value)| Constraint::HasValue { path, value }).boxed(),
        (arb_path(), 0..4usize).prop_map(|(path, min)| Constraint::MinCount { path, min }).boxed(),
        (arb_path(), 0..4usize).prop_map(|(path, max)| Constraint::MaxCount { path, max }).boxed(),
        (arb_path(), prop::sample::select(classes()))
            .prop_map(|(path, class)| Constraint::ClassMember { path, class })
            .boxed(),
        (arb_path(), other()).prop_map(|(path, other)| Constraint::Equals { path, other }).boxed(),
        (arb_path(), prop::sample::select(datatype_iris()))
            .prop_map(|(path, datatype)| Constraint::Datatype { path, datatype })
            .boxed(),
    ];
    if comparisons {
        options.push((arb_path(), other()).prop_map(|(path, other)| Constraint::LessThan { path, other }).boxed());
    }
    prop::strategy::Union::new(options).boxed()
}

pub fn arb_constraint_with(comparisons: bool) -> BoxedStrategy<Constraint> {
    arb_leaf(comparisons)
        .prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Constraint::not),
                prop::collection::vec(inner, 0..=3).prop_map(Constraint::And),
            ]
        })
        .boxed()
}

pub fn arb_constraint() -> BoxedStrategy<Constraint> {
    arb_constraint_with(true)
}

pub fn arb_severity() -> impl Strategy<Value = Severity> {
    prop_oneof![3 => Just(Severity::Violation), 1 => Just(Severity::Info)]
}

pub fn arb_shapes() -> impl Strategy<Value = ShapesDocument> {
    prop::collection::vec(
        (prop::sample::select(classes()), prop::collection::vec(arb_constraint(), 0..=3), arb_severity()),
        1..=3,
    )
    .prop_map(|specs| {
        ShapesDocument::new(
            specs
                .into_iter()
                .enumerate()
                .map(|(i, (target_class, constraints, severity))| NodeShape {
                    id: ti(&format!("shape{i}")),
                    target_class,
                    constraints,
                    rules: vec![],
                    severity,
                })
                .collect(),
        )
    })
}

fn arb_node_spec(constants: bool) -> BoxedStrategy<NodeSpec> {
    let constant = prop::sample::select({
        let mut v: Vec<Term> = (0..6).map(|i| t(&format!("n{i}"))).collect();
        v.extend(literals());
        v
    })
    .prop_map(NodeSpec::Constant);
    if constants {
        prop_oneof![Just(NodeSpec::This), arb_short_path().prop_map(NodeSpec::PathFrom), constant].boxed()
    } else {
        prop_oneof![Just(NodeSpec::This), arb_short_path().prop_map(NodeSpec::PathFrom)].boxed()
    }
}

/// A raw rule: (order, target, condition, subject, predicate, object).
pub fn arb_rule() -> impl Strategy<Value = (i64, Iri, Option<Constraint>, NodeSpec, Iri, NodeSpec)> {
    (
        0..3i64,
        prop::sample::select(classes()),
        prop::option::weighted(0.5, arb_constraint_with(false)),
        arb_node_spec(false),
        arb_predicate(),
        arb_node_spec(true),
    )
}

/// One shape per rule, so reordering shapes reorders rules within their
/// order groups. Conflicting rules are dropped until the set stratifies.
pub fn rule_document(raw: Vec<(i64, Iri, Option<Constraint>, NodeSpec, Iri, NodeSpec)>) -> ShapesDocument {
    let mut shapes: Vec<NodeShape> = raw
        .into_iter()
        .enumerate()
        .map(|(i, (order, target_class, condition, subject, predicate, object))| NodeShape {
            id: ti(&format!("rules{i}")),
            target_class,
            constraints: vec![],
            rules: vec![TripleRule { id: format!("r{i}"), order, condition, subject, predicate, object }],
            severity: Severity::Violation,
        })
        .collect();
    loop {
        let doc = ShapesDocument::new(shapes.clone());
        match normcheck::inference::stratify(&doc) {
            Ok(_) => return doc,
            Err(e) => shapes.retain(|s| s.rules[0].id != e.reading_rule),
        }
    }
}

pub fn arb_rule_document() -> impl Strategy<Value = ShapesDocument> {
    prop::collection::vec(arb_rule(), 1..=8).prop_map(rule_document)
}

// ---- oracles ----------------------------------------------------------

pub fn oracle_match(triples: &[Triple], s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
    let mut out: Vec<Triple> = triples
        .iter()
        .filter(|t| s.map_or(true, |s| t.subject() == s))
        .filter(|t| p.map_or(true, |p| t.predicate() == p))
        .filter(|t| o.map_or(true, |o| t.object() == o))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn oracle_path(triples: &[Triple], start: &Term, path: &PropertyPath) -> BTreeSet<Term> {
    let mut frontier = BTreeSet::from([start.clone()]);
    for step in path.steps() {
        frontier = triples
            .iter()
            .filter(|t| t.predicate() == step && frontier.contains(t.subject()))
            .map(|t| t.object().clone())
            .collect();
    }
    frontier
}

fn as_int(t: &Term) -> Option<i64> {
    t.as_literal().and_then(|l| l.as_integer())
}

/// Direct reading of the component definitions. `None` is a type error.
pub fn oracle_check(triples: &[Triple], focus: &Term, c: &Constraint) -> Option<bool> {
    let vals = |p: &PropertyPath| oracle_path(triples, focus, p);
    let single = |p: &Iri| oracle_path(triples, focus, &PropertyPath::Predicate(p.clone()));
    let typed = |v: &Term, class: &Iri| triples.iter().any(|t| t.subject() == v && t.predicate() == &rdf_type() && t.object() == &Term::Iri(class.clone()));
    Some(match c {
        Constraint::HasValue { path, value } => vals(path).contains(value),
        Constraint::MinCount { path, min } => vals(path).len() >= *min,
        Constraint::MaxCount { path, max } => vals(path).len() <= *max,
        Constraint::ClassMember { path, class } => vals(path).iter().all(|v| typed(v, class)),
        Constraint::LessThan { path, other } => {
            let left = vals(path);
            let right = single(other);
            if left.is_empty() || right.is_empty() {
                true
            } else {
                let mut all = true;
                for v in &left {
                    for w in &right {
                        match (as_int(v), as_int(w)) {
                            (Some(a), Some(b)) => all &= a < b,
                            _ => return None,
                        }
                    }
                }
                all
            }
        }
        Constraint::Equals { path, other } => vals(path) == single(other),
        Constraint::Datatype { path, datatype } => vals(path)
            .iter()
            .all(|v| matches!(v, Term::Literal(l) if l.datatype().iri() == *datatype)),
        Constraint::Not(inner) => !oracle_check(triples, focus, inner)?,
        Constraint::And(items) => {
            for item in items {
                if !oracle_check(triples, focus, item)? {
                    return Some(false);
                }
            }
            true
        }
    })
}

/// (shape, focus, constraint position, severity) for every failure, in
/// shape then focus order. `None` if any check is a type error.
pub fn oracle_validate(triples: &[Triple], doc: &ShapesDocument) -> Option<Vec<(Iri, Term, Constraint, Severity)>> {
    let mut out = Vec::new();
    for shape in &doc.shapes {
        let mut foci: Vec<Term> = triples
            .iter()
            .filter(|t| t.predicate() == &rdf_type() && t.object() == &Term::Iri(shape.target_class.clone()))
            .map(|t| t.subject().clone())
            .collect();
        foci.sort();
        foci.dedup();
        for focus in foci {
            for c in &shape.constraints {
                if !oracle_check(triples, &focus, c)? {
                    out.push((shape.id.clone(), focus.clone(), c.clone(), shape.severity));
                }
            }
        }
    }
    out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Some(out)
}

/// Graph isomorphism up to blank-node renaming, by backtracking over
/// blank nodes with matching local signatures.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ta: Vec<Triple> = a.iter().collect();
    let tb: Vec<Triple> = b.iter().collect();
    let ground = |v: &[Triple]| -> BTreeSet<Triple> {
        v.iter().filter(|t| !t.subject().is_blank() && !t.object().is_blank()).cloned().collect()
    };
    if ground(&ta) != ground(&tb) {
        return false;
    }
    let blanks = |v: &[Triple]| -> BTreeSet<Term> {
        v.iter().flat_map(|t| [t.subject().clone(), t.object().clone()]).filter(Term::is_blank).collect()
    };
    let ba: Vec<Term> = blanks(&ta).into_iter().collect();
    let bb: Vec<Term> = blanks(&tb).into_iter().collect();
    if ba.len() != bb.len() {
        return false;
    }
    let signature = |v: &[Triple], n: &Term| -> Vec<(u8, Iri, Option<Term>)> {
        let mut sig: Vec<(u8, Iri, Option<Term>)> = Vec::new();
        for t in v {
            let hide = |x: &Term| if x.is_blank() { None } else { Some(x.clone()) };
            if t.subject() == n {
                sig.push((0, t.predicate().clone(), hide(t.object())));
            }
            if t.object() == n {
                sig.push((1, t.predicate().clone(), hide(t.subject())));
            }
        }
        sig.sort();
        sig
    };
    let sig_a: Vec<_> = ba.iter().map(|n| signature(&ta, n)).collect();
    let sig_b: Vec<_> = bb.iter().map(|n| signature(&tb, n)).collect();
    let set_b: BTreeSet<Triple> = tb.iter().cloned().collect();

    fn extend(
        i: usize,
        ba: &[Term],
        bb: &[Term],
        sig_a: &[Vec<(u8, Iri, Option<Term>)>],
        sig_b: &[Vec<(u8, Iri, Option<Term>)>],
        mapping: &mut BTreeMap<Term, Term>,
        used: &mut BTreeSet<usize>,
        ta: &[Triple],
        set_b: &BTreeSet<Triple>,
    ) -> bool {
        if i == ba.len() {
            return true;
        }
        for j in 0..bb.len() {
            if used.contains(&j) || sig_a[i] != sig_b[j] {
                continue;
            }
            mapping.insert(ba[i].clone(), bb[j].clone());
            used.insert(j);
            let consistent = ta.iter().all(|t| {
                let map = |x: &Term| if x.is_blank() { mapping.get(x).cloned() } else { Some(x.clone()) };
                match (map(t.subject()), map(t.object())) {
                    (Some(s), Some(o)) => set_b.contains(&Triple::new(s, t.predicate().clone(), o).unwrap()),
                    _ => true,
                }
            });
            if consistent && extend(i + 1, ba, bb, sig_a, sig_b, mapping, used, ta, set_b) {
                return true;
            }
            mapping.remove(&ba[i]);
            used.remove(&j);
        }
        false
    }
    extend(0, &ba, &bb, &sig_a, &sig_b, &mut BTreeMap::new(), &mut BTreeSet::new(), &ta, &set_b)
}

/// |nodes|² × |predicates| over the data plus the rules' constants and
/// predicates.
pub fn inference_bound(data: &Graph, doc: &ShapesDocument) -> usize {
    let mut nodes = data.nodes();
    let mut preds: BTreeSet<Iri> = data.iter().map(|t| t.predicate().clone()).collect();
    for (_, r) in doc.rules() {
        preds.insert(r.predicate.clone());
        for spec in [&r.subject, &r.object] {
            if let NodeSpec::Constant(c) = spec {
                nodes.insert(c.clone());
            }
        }
    }
    nodes.len() * nodes.len() * preds.len()
}

pub fn scenario() -> Graph {
    normcheck::rdf::parse_turtle(&fixture("scenario.ttl")).unwrap()
}
