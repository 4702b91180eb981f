//! Reader for the s-expression norm format:
//!
//! ```text
//! (:prefix shRIOL "http://example.org/shRIOL#")
//! (norm :id "lawfulness" :kind obligation
//!       :target shRIOL:PersonalDataProcessing
//!       :require (shRIOL:is-lawful true))
//! ```

use std::collections::HashSet;

use thiserror::Error;

use super::{Antecedent, Atom, CardinalityKind, CompareKind, Consequent, NafAtom, NormKind, NormRule, NormSet};
use crate::rdf::{Iri, PrefixMap, PropertyPath, Term};
use crate::shacl::NodeSpec;
use crate::vocab::{rdf, rdfs, sh, xsd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unknown prefix `{prefix}:`")]
    UnknownPrefix { line: usize, column: usize, prefix: String },
    #[error("{line}:{column}: duplicate norm id {id:?}")]
    DuplicateId { line: usize, column: usize, id: String },
    #[error("{line}:{column}: naf is not allowed in the consequent of norm {id:?}")]
    NafInConsequent { line: usize, column: usize, id: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum SExpr {
    List(Vec<SExpr>, Pos),
    Symbol(String, Pos),
    Keyword(String, Pos),
    Str(String, Pos),
    Int(i64, Pos),
}

impl SExpr {
    fn pos(&self) -> Pos {
        match self {
            SExpr::List(_, p) | SExpr::Symbol(_, p) | SExpr::Keyword(_, p) | SExpr::Str(_, p) | SExpr::Int(_, p) => *p,
        }
    }

    fn head_symbol(&self) -> Option<&str> {
        match self {
            SExpr::List(items, _) => match items.first() {
                Some(SExpr::Symbol(s, _)) => Some(s),
                _ => None,
            },
            _ => None,
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> NormError {
    NormError::Syntax { line: pos.line, column: pos.column, message: message.into() }
}

struct Reader {
    chars: Vec<char>,
    i: usize,
    line: usize,
    column: usize,
}

impl Reader {
    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read_all(&mut self) -> Result<Vec<SExpr>, NormError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            match self.peek() {
                None => return Ok(out),
                Some(')') => return Err(syntax(self.pos(), "unbalanced `)`")),
                Some(_) => out.push(self.read()?),
            }
        }
    }

    fn read(&mut self) -> Result<SExpr, NormError> {
        self.skip_trivia();
        let pos = self.pos();
        match self.peek() {
            None => Err(syntax(pos, "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(syntax(pos, "unterminated list")),
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, pos));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None | Some('\n') => return Err(syntax(pos, "unterminated string")),
                        Some('"') => return Ok(SExpr::Str(s, pos)),
                        Some('\\') => match self.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            _ => return Err(syntax(self.pos(), "unsupported escape sequence")),
                        },
                        Some(c) => s.push(c),
                    }
                }
            }
            Some(_) => {
                let mut word = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    word.push(c);
                    self.bump();
                }
                if let Some(kw) = word.strip_prefix(':') {
                    return Ok(SExpr::Keyword(kw.to_string(), pos));
                }
                let digits = word.strip_prefix(['-', '+']).unwrap_or(&word);
                if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                    return word.parse().map(|n| SExpr::Int(n, pos)).map_err(|_| syntax(pos, "integer out of range"));
                }
                Ok(SExpr::Symbol(word, pos))
            }
        }
    }
}

/// Parses a norm file. `rdf`, `rdfs`, `xsd` and `sh` are predeclared;
/// other prefixes come from `(:prefix name "namespace")` forms.
pub fn parse_norms(text: &str) -> Result<NormSet, NormError> {
    let mut reader = Reader { chars: text.chars().collect(), i: 0, line: 1, column: 1 };
    let forms = reader.read_all()?;
    let mut prefixes = PrefixMap::new();
    prefixes.insert("rdf", rdf::NS);
    prefixes.insert("rdfs", rdfs::NS);
    prefixes.insert("xsd", xsd::NS);
    prefixes.insert("sh", sh::NS);
    let mut ctx = Context { prefixes, declared: PrefixMap::new() };
    let mut norms = Vec::new();
    let mut ids = HashSet::new();
    for form in &forms {
        let SExpr::List(items, pos) = form else {
            return Err(syntax(form.pos(), "expected a `(norm ...)` or `(:prefix ...)` form"));
        };
        match items.first() {
            Some(SExpr::Keyword(k, _)) if k == "prefix" => ctx.prefix(items, *pos)?,
            Some(SExpr::Symbol(s, _)) if s == "norm" => {
                let norm = ctx.norm(items, *pos)?;
                if !ids.insert(norm.id.clone()) {
                    return Err(NormError::DuplicateId { line: pos.line, column: pos.column, id: norm.id });
                }
                norms.push(norm);
            }
            _ => return Err(syntax(*pos, "expected a `(norm ...)` or `(:prefix ...)` form")),
        }
    }
    Ok(NormSet { norms, prefixes: ctx.declared })
}

struct Context {
    prefixes: PrefixMap,
    /// Prefixes declared in the file itself, kept for rendering.
    declared: PrefixMap,
}

impl Context {
    fn prefix(&mut self, items: &[SExpr], pos: Pos) -> Result<(), NormError> {
        match items {
            [_, SExpr::Symbol(name, _), SExpr::Str(ns, _)] => {
                let name = name.strip_suffix(':').unwrap_or(name);
                self.prefixes.insert(name, ns.clone());
                self.declared.insert(name, ns.clone());
                Ok(())
            }
            _ => Err(syntax(pos, "expected (:prefix name \"namespace\")")),
        }
    }

    fn curie(&self, e: &SExpr) -> Result<Iri, NormError> {
        let SExpr::Symbol(s, pos) = e else {
            return Err(syntax(e.pos(), "expected a prefixed name"));
        };
        let Some((prefix, local)) = s.split_once(':') else {
            return Err(syntax(*pos, format!("expected a prefixed name, found `{s}`")));
        };
        self.prefixes.expand(prefix, local).ok_or_else(|| NormError::UnknownPrefix {
            line: pos.line,
            column: pos.column,
            prefix: prefix.to_string(),
        })
    }

    fn path(&self, e: &SExpr) -> Result<PropertyPath, NormError> {
        match e {
            SExpr::Symbol(s, pos) if s == "self" => Err(syntax(*pos, "`self` is not a path here")),
            SExpr::Symbol(..) => Ok(PropertyPath::Predicate(self.curie(e)?)),
            SExpr::List(items, pos) => {
                if items.is_empty() {
                    return Err(syntax(*pos, "empty path"));
                }
                let steps = items.iter().map(|i| self.curie(i)).collect::<Result<Vec<_>, _>>()?;
                Ok(PropertyPath::from_steps(steps).expect("steps are non-empty"))
            }
            other => Err(syntax(other.pos(), "expected a predicate or a list of predicates")),
        }
    }

    fn literal(&self, e: &SExpr) -> Option<Term> {
        match e {
            SExpr::Symbol(s, _) if s == "true" => Some(Term::boolean(true)),
            SExpr::Symbol(s, _) if s == "false" => Some(Term::boolean(false)),
            SExpr::Int(n, _) => Some(Term::integer(*n)),
            SExpr::Str(s, _) => Some(Term::string(s.clone())),
            _ => None,
        }
    }

    fn value(&self, e: &SExpr) -> Result<Term, NormError> {
        match self.literal(e) {
            Some(t) => Ok(t),
            None => self.curie(e).map(Term::Iri),
        }
    }

    fn count(&self, e: &SExpr) -> Result<usize, NormError> {
        match e {
            SExpr::Int(n, pos) => usize::try_from(*n).map_err(|_| syntax(*pos, "count must be non-negative")),
            other => Err(syntax(other.pos(), "expected an integer")),
        }
    }

    fn atom(&self, e: &SExpr) -> Result<Atom, NormError> {
        let SExpr::List(items, pos) = e else {
            return Err(syntax(e.pos(), "expected an atom such as (class path Class)"));
        };
        let head = e.head_symbol().unwrap_or("");
        let args = &items[items.len().min(1)..];
        let [path, arg] = args else {
            return Err(syntax(*pos, format!("`{head}` takes a path and one argument")));
        };
        let path = self.path(path)?;
        Ok(match head {
            "class" => Atom::Class { path, class: self.curie(arg)? },
            "less-than" => Atom::Compare { kind: CompareKind::LessThan, path, other: self.curie(arg)? },
            "equals" => Atom::Compare { kind: CompareKind::Equals, path, other: self.curie(arg)? },
            "min" => Atom::Cardinality { kind: CardinalityKind::Min, path, n: self.count(arg)? },
            "max" => Atom::Cardinality { kind: CardinalityKind::Max, path, n: self.count(arg)? },
            other => return Err(syntax(*pos, format!("unknown atom `{other}`"))),
        })
    }

    fn antecedent(&self, e: &SExpr) -> Result<Antecedent, NormError> {
        if e.head_symbol() != Some("naf") {
            return self.atom(e).map(Antecedent::Atom);
        }
        let SExpr::List(items, pos) = e else { unreachable!("head_symbol implies a list") };
        let [_, inner] = items.as_slice() else {
            return Err(syntax(*pos, "naf takes exactly one atom"));
        };
        if inner.head_symbol() == Some("naf") {
            return Err(syntax(inner.pos(), "naf cannot be nested"));
        }
        Ok(Antecedent::Naf(NafAtom { inner: self.atom(inner)? }))
    }

    fn node_spec(&self, e: &SExpr, allow_constant: bool) -> Result<NodeSpec, NormError> {
        match e {
            SExpr::Symbol(s, _) if s == "self" => Ok(NodeSpec::This),
            SExpr::List(..) => Ok(NodeSpec::PathFrom(self.path(e)?)),
            _ if allow_constant => self.value(e).map(NodeSpec::Constant),
            other => Err(syntax(other.pos(), "expected `self` or a path list")),
        }
    }

    fn consequent(&self, id: &str, key: &str, e: &SExpr) -> Result<Consequent, NormError> {
        let SExpr::List(items, pos) = e else {
            return Err(syntax(e.pos(), format!(":{key} expects a list")));
        };
        if let Some(naf) = items.iter().find(|i| i.head_symbol() == Some("naf")) {
            let p = naf.pos();
            return Err(NormError::NafInConsequent { line: p.line, column: p.column, id: id.to_string() });
        }
        match (key, items.as_slice()) {
            ("require", [path, value]) => Ok(Consequent::Require { path: self.path(path)?, value: self.value(value)? }),
            ("require", _) => Err(syntax(*pos, ":require expects (path value)")),
            ("assert", [subject, predicate, object]) => Ok(Consequent::Assert {
                subject: self.node_spec(subject, false)?,
                predicate: self.curie(predicate)?,
                object: self.node_spec(object, true)?,
            }),
            _ => Err(syntax(*pos, ":assert expects (subject predicate object)")),
        }
    }

    fn norm(&self, items: &[SExpr], pos: Pos) -> Result<NormRule, NormError> {
        let mut id = None;
        let mut kind = None;
        let mut order = None;
        let mut target = None;
        let mut antecedent = Vec::new();
        let mut consequent = None;
        let mut seen = HashSet::new();

        let mut rest = items[1..].iter();
        while let Some(key) = rest.next() {
            let SExpr::Keyword(k, kpos) = key else {
                return Err(syntax(key.pos(), "expected a keyword such as :id"));
            };
            if !seen.insert(k.as_str()) {
                return Err(syntax(*kpos, format!("duplicate :{k}")));
            }
            let value = rest.next().ok_or_else(|| syntax(*kpos, format!(":{k} needs a value")))?;
            match k.as_str() {
                "id" => match value {
                    SExpr::Str(s, spos) => {
                        if s.is_empty() || s.chars().any(char::is_whitespace) {
                            return Err(syntax(*spos, "norm ids must be non-empty and contain no whitespace"));
                        }
                        id = Some(s.clone());
                    }
                    other => return Err(syntax(other.pos(), ":id expects a string")),
                },
                "kind" => {
                    kind = Some(match value {
                        SExpr::Symbol(s, _) if s == "obligation" => NormKind::Obligation,
                        SExpr::Symbol(s, _) if s == "permission" => NormKind::Permission,
                        SExpr::Symbol(s, _) if s == "constitutive" => NormKind::Constitutive,
                        other => return Err(syntax(other.pos(), "kind must be obligation, permission or constitutive")),
                    })
                }
                "order" => match value {
                    SExpr::Int(n, _) => order = Some((*n, *kpos)),
                    other => return Err(syntax(other.pos(), ":order expects an integer")),
                },
                "target" => target = Some(self.curie(value)?),
                "if" => {
                    let SExpr::List(atoms, _) = value else {
                        return Err(syntax(value.pos(), ":if expects a list of atoms"));
                    };
                    antecedent = atoms.iter().map(|a| self.antecedent(a)).collect::<Result<_, _>>()?;
                }
                "require" | "assert" => {
                    if consequent.is_some() {
                        return Err(syntax(*kpos, "a norm has exactly one consequent"));
                    }
                    let norm_id = id.as_deref().unwrap_or("?");
                    consequent = Some((self.consequent(norm_id, k, value)?, *kpos));
                }
                other => return Err(syntax(*kpos, format!("unknown keyword :{other}"))),
            }
        }

        let id = id.ok_or_else(|| syntax(pos, "norm is missing :id"))?;
        let kind = kind.ok_or_else(|| syntax(pos, "norm is missing :kind"))?;
        let target = target.ok_or_else(|| syntax(pos, "norm is missing :target"))?;
        let (consequent, cpos) = consequent.ok_or_else(|| syntax(pos, "norm is missing :require or :assert"))?;
        match (kind, &consequent) {
            (NormKind::Constitutive, Consequent::Assert { .. }) => {}
            (NormKind::Constitutive, _) => return Err(syntax(cpos, "constitutive norms use :assert")),
            (_, Consequent::Require { .. }) => {}
            (_, _) => return Err(syntax(cpos, "obligations and permissions use :require")),
        }
        if let (Some((_, opos)), false) = (order, kind == NormKind::Constitutive) {
            return Err(syntax(opos, ":order only applies to constitutive norms"));
        }
        Ok(NormRule { id, kind, target, order: order.map_or(0, |(n, _)| n), antecedent, consequent })
    }
}
