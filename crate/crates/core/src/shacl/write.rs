use super::{Constraint, NodeShape, NodeSpec, Severity, ShapesDocument, TripleRule};
use crate::rdf::{Graph, Iri, PrefixMap, PropertyPath, Term, Triple};
use crate::vocab::{rdf, rdfs, sh, xsd};

/// Encodes a shapes document as a SHACL graph that [`super::parse_shapes`]
/// reads back to an equal document. `prefixes` are added to the standard
/// `rdf`, `rdfs`, `xsd` and `sh` bindings.
pub fn shapes_to_graph(doc: &ShapesDocument, prefixes: &PrefixMap) -> Graph {
    let mut w = Writer { g: Graph::new() };
    let pm = w.g.prefixes_mut();
    pm.insert("rdf", rdf::NS);
    pm.insert("rdfs", rdfs::NS);
    pm.insert("xsd", xsd::NS);
    pm.insert("sh", sh::NS);
    pm.merge(prefixes);
    for shape in &doc.shapes {
        w.shape(shape);
    }
    w.g
}

struct Writer {
    g: Graph,
}

impl Writer {
    fn add(&mut self, s: &Term, p: &str, o: Term) {
        self.g.insert(Triple::new(s.clone(), Iri::new(p), o).expect("writer never emits literal subjects"));
    }

    fn shape(&mut self, shape: &NodeShape) {
        let node = Term::Iri(shape.id.clone());
        self.add(&node, rdf::TYPE, Term::iri(sh::NODE_SHAPE));
        self.add(&node, sh::TARGET_CLASS, Term::Iri(shape.target_class.clone()));
        if shape.severity == Severity::Info {
            self.add(&node, sh::SEVERITY, Term::iri(sh::INFO));
        }
        for c in &shape.constraints {
            self.attach(&node, c);
        }
        for rule in &shape.rules {
            let r = self.rule(rule);
            self.add(&node, sh::RULE, r);
        }
    }

    /// Hangs `c` off `node` the way the reader expects at shape level.
    fn attach(&mut self, node: &Term, c: &Constraint) {
        match c {
            Constraint::Not(inner) => {
                let inner = self.expression(inner);
                self.add(node, sh::NOT, inner);
            }
            Constraint::And(items) => {
                let members: Vec<Term> = items.iter().map(|i| self.expression(i)).collect();
                let list = self.list(members);
                self.add(node, sh::AND, list);
            }
            leaf => {
                let prop = self.property(leaf);
                self.add(node, sh::PROPERTY, prop);
            }
        }
    }

    /// A fresh node whose single constraint is `c`.
    fn expression(&mut self, c: &Constraint) -> Term {
        let node = self.g.fresh_blank();
        self.attach(&node, c);
        node
    }

    fn property(&mut self, c: &Constraint) -> Term {
        let node = self.g.fresh_blank();
        let path = c.path().expect("leaf constraints carry a path");
        let path = self.path(path);
        self.add(&node, sh::PATH, path);
        let (p, value) = match c {
            Constraint::HasValue { value, .. } => (sh::HAS_VALUE, value.clone()),
            Constraint::MinCount { min, .. } => (sh::MIN_COUNT, Term::integer(*min as i64)),
            Constraint::MaxCount { max, .. } => (sh::MAX_COUNT, Term::integer(*max as i64)),
            Constraint::ClassMember { class, .. } => (sh::CLASS, Term::Iri(class.clone())),
            Constraint::LessThan { other, .. } => (sh::LESS_THAN, Term::Iri(other.clone())),
            Constraint::Equals { other, .. } => (sh::EQUALS, Term::Iri(other.clone())),
            Constraint::Datatype { datatype, .. } => (sh::DATATYPE, Term::Iri(datatype.clone())),
            Constraint::Not(_) | Constraint::And(_) => unreachable!("handled by attach"),
        };
        self.add(&node, p, value);
        node
    }

    fn path(&mut self, path: &PropertyPath) -> Term {
        match path {
            PropertyPath::Predicate(p) => Term::Iri(p.clone()),
            PropertyPath::Sequence(steps) => {
                let items = steps.iter().cloned().map(Term::Iri).collect();
                self.list(items)
            }
        }
    }

    fn list(&mut self, items: Vec<Term>) -> Term {
        let cells: Vec<Term> = items.iter().map(|_| self.g.fresh_blank()).collect();
        let mut head = Term::iri(rdf::NIL);
        for (cell, item) in cells.into_iter().zip(items).rev() {
            self.add(&cell, rdf::FIRST, item);
            self.add(&cell, rdf::REST, head);
            head = cell;
        }
        head
    }

    fn rule(&mut self, rule: &TripleRule) -> Term {
        let node = self.g.fresh_blank();
        self.add(&node, rdf::TYPE, Term::iri(sh::TRIPLE_RULE));
        self.add(&node, rdfs::LABEL, Term::string(rule.id.clone()));
        self.add(&node, sh::ORDER, Term::integer(rule.order));
        if let Some(c) = &rule.condition {
            // sh:and keeps conjunct order through a round trip.
            let cond = self.expression(c);
            self.add(&node, sh::CONDITION, cond);
        }
        let subject = self.spec(&rule.subject);
        self.add(&node, sh::SUBJECT, subject);
        self.add(&node, sh::PREDICATE, Term::Iri(rule.predicate.clone()));
        let object = self.spec(&rule.object);
        self.add(&node, sh::OBJECT, object);
        node
    }

    fn spec(&mut self, spec: &NodeSpec) -> Term {
        match spec {
            NodeSpec::This => Term::iri(sh::THIS),
            NodeSpec::Constant(t) => t.clone(),
            NodeSpec::PathFrom(path) => {
                let node = self.g.fresh_blank();
                let path = self.path(path);
                self.add(&node, sh::PATH, path);
                node
            }
        }
    }
}
