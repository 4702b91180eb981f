use std::fmt::Write;

use super::{Graph, PrefixMap, Term};
use crate::vocab::rdf;

/// Writes `g` as Turtle. Output is sorted by subject, predicate and object;
/// subjects with a single triple take one line.
pub fn serialize_turtle(g: &Graph) -> String {
    let prefixes = g.prefixes();
    let mut out = String::new();
    for (p, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {p}: <{ns}> .");
    }
    if !prefixes.is_empty() && !g.is_empty() {
        out.push('\n');
    }

    let triples: Vec<_> = g.iter().collect();
    for group in triples.chunk_by(|a, b| a.subject() == b.subject()) {
        let subject = prefixes.render(group[0].subject());
        if group.len() == 1 {
            let t = &group[0];
            let _ = writeln!(out, "{subject} {} {} .", predicate(prefixes, t.predicate()), prefixes.render(t.object()));
            continue;
        }
        out.push_str(&subject);
        let by_pred: Vec<_> = group.chunk_by(|a, b| a.predicate() == b.predicate()).collect();
        for (i, run) in by_pred.iter().enumerate() {
            let objects: Vec<String> = run.iter().map(|t| prefixes.render(t.object())).collect();
            let sep = if i + 1 == by_pred.len() { " ." } else { " ;" };
            let _ = write!(out, "\n    {} {}{sep}", predicate(prefixes, run[0].predicate()), objects.join(" , "));
        }
        out.push('\n');
    }
    out
}

fn predicate(prefixes: &PrefixMap, p: &super::Iri) -> String {
    if p.as_str() == rdf::TYPE {
        "a".to_string()
    } else {
        prefixes.render(&Term::Iri(p.clone()))
    }
}
