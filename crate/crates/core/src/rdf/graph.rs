use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{rdf_type, Iri, PrefixMap, Term, Triple};

type Index<A, B, C> = BTreeMap<A, BTreeMap<B, BTreeSet<C>>>;

/// A set of triples with SPO, POS and OSP indexes.
///
/// Every lookup with at least one bound position is answered from an index;
/// iteration order is always the sorted `(subject, predicate, object)` order.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    spo: Index<Term, Iri, Term>,
    pos: Index<Iri, Term, Term>,
    osp: Index<Term, Term, Iri>,
    len: usize,
    prefixes: PrefixMap,
    next_blank: u64,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.spo == other.spo
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    /// Inserts a triple; returns `false` if it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let (s, p, o) = triple.into_parts();
        let fresh = self
            .spo
            .entry(s.clone())
            .or_default()
            .entry(p.clone())
            .or_default()
            .insert(o.clone());
        if !fresh {
            return false;
        }
        self.pos.entry(p.clone()).or_default().entry(o.clone()).or_default().insert(s.clone());
        self.osp.entry(o).or_default().entry(s).or_default().insert(p);
        self.len += 1;
        true
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (s, p, o) = (triple.subject(), triple.predicate(), triple.object());
        if !remove_nested(&mut self.spo, s, p, o) {
            return false;
        }
        remove_nested(&mut self.pos, p, o, s);
        remove_nested(&mut self.osp, o, s, p);
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.contains_parts(triple.subject(), triple.predicate(), triple.object())
    }

    pub fn contains_parts(&self, s: &Term, p: &Iri, o: &Term) -> bool {
        self.spo.get(s).and_then(|m| m.get(p)).is_some_and(|set| set.contains(o))
    }

    /// All triples in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, by_p)| {
            by_p.iter().flat_map(move |(p, objs)| {
                objs.iter().map(move |o| triple(s.clone(), p.clone(), o.clone()))
            })
        })
    }

    /// The triples agreeing with every bound position, sorted.
    pub fn match_triples(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut out: Vec<Triple> = match (s, p, o) {
            (None, None, None) => return self.iter().collect(),
            (Some(s), Some(p), Some(o)) => {
                return if self.contains_parts(s, p, o) {
                    vec![triple(s.clone(), p.clone(), o.clone())]
                } else {
                    Vec::new()
                };
            }
            (Some(s), Some(p), None) => self
                .objects(s, p)
                .map(|o| triple(s.clone(), p.clone(), o.clone()))
                .collect(),
            (Some(s), None, o) => {
                let Some(by_p) = self.spo.get(s) else { return Vec::new() };
                by_p.iter()
                    .flat_map(|(p, objs)| objs.iter().map(move |obj| (p, obj)))
                    .filter(|(_, obj)| o.map_or(true, |o| *obj == o))
                    .map(|(p, obj)| triple(s.clone(), p.clone(), obj.clone()))
                    .collect()
            }
            (None, Some(p), Some(o)) => self
                .subjects(p, o)
                .map(|s| triple(s.clone(), p.clone(), o.clone()))
                .collect(),
            (None, Some(p), None) => {
                let Some(by_o) = self.pos.get(p) else { return Vec::new() };
                by_o.iter()
                    .flat_map(|(o, subs)| subs.iter().map(move |s| triple(s.clone(), p.clone(), o.clone())))
                    .collect()
            }
            (None, None, Some(o)) => {
                let Some(by_s) = self.osp.get(o) else { return Vec::new() };
                by_s.iter()
                    .flat_map(|(s, preds)| preds.iter().map(move |p| triple(s.clone(), p.clone(), o.clone())))
                    .collect()
            }
        };
        out.sort();
        out
    }

    pub fn objects<'a>(&'a self, s: &Term, p: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo.get(s).and_then(|m| m.get(p)).into_iter().flatten()
    }

    pub fn subjects<'a>(&'a self, p: &Iri, o: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.pos.get(p).and_then(|m| m.get(o)).into_iter().flatten()
    }

    /// The single object of `(s, p, _)`, or `None` if there are zero or
    /// several.
    pub fn object(&self, s: &Term, p: &Iri) -> Option<&Term> {
        let mut it = self.objects(s, p);
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    pub fn predicates_of<'a>(&'a self, s: &Term) -> impl Iterator<Item = &'a Iri> + 'a {
        self.spo.get(s).into_iter().flat_map(|m| m.keys())
    }

    /// Nodes with an explicit `rdf:type` triple to `class`, sorted.
    pub fn instances_of(&self, class: &Iri) -> Vec<Term> {
        self.subjects(&rdf_type(), &Term::Iri(class.clone())).cloned().collect()
    }

    pub fn has_type(&self, node: &Term, class: &Iri) -> bool {
        self.contains_parts(node, &rdf_type(), &Term::Iri(class.clone()))
    }

    /// Every term used in subject or object position, sorted.
    pub fn nodes(&self) -> BTreeSet<Term> {
        self.spo.keys().chain(self.osp.keys()).cloned().collect()
    }

    fn mentions(&self, term: &Term) -> bool {
        self.spo.contains_key(term) || self.osp.contains_key(term)
    }

    /// Allocates a blank node not yet used in this graph.
    pub fn fresh_blank(&mut self) -> Term {
        loop {
            let candidate = Term::BlankNode(format!("b{}", self.next_blank));
            self.next_blank += 1;
            if !self.mentions(&candidate) {
                return candidate;
            }
        }
    }

    /// Adds all triples of `other`, renaming its blank nodes apart from the
    /// ones in `self`. Prefixes already bound in `self` take precedence.
    pub fn merge(&mut self, other: &Graph) {
        let mut renaming: HashMap<String, Term> = HashMap::new();
        let mut rename = |g: &mut Graph, t: &Term| -> Term {
            match t {
                Term::BlankNode(label) => renaming
                    .entry(label.clone())
                    .or_insert_with(|| g.fresh_blank())
                    .clone(),
                other => other.clone(),
            }
        };
        for t in other.iter() {
            let (s, p, o) = t.into_parts();
            let s = rename(self, &s);
            let o = rename(self, &o);
            self.insert(triple(s, p, o));
        }
        self.prefixes.merge(&other.prefixes);
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

// Index entries are only built from validated triples.
fn triple(s: Term, p: Iri, o: Term) -> Triple {
    Triple::new(s, p, o).expect("indexed triples are well-formed")
}

fn remove_nested<A: Ord, B: Ord, C: Ord>(index: &mut Index<A, B, C>, a: &A, b: &B, c: &C) -> bool {
    let Some(by_b) = index.get_mut(a) else { return false };
    let Some(set) = by_b.get_mut(b) else { return false };
    if !set.remove(c) {
        return false;
    }
    if set.is_empty() {
        by_b.remove(b);
        if by_b.is_empty() {
            index.remove(a);
        }
    }
    true
}
