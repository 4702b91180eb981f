//! Reader for the Turtle subset used by shapes and scenario files:
//! `@prefix`, the `a` keyword, prefixed names, absolute IRIs, string /
//! boolean / integer literals, `;` and `,` abbreviations, blank node
//! property lists and collections.

use std::collections::HashMap;

use thiserror::Error;

use super::{is_name_char, Datatype, Graph, Iri, Literal, LiteralError, Term, Triple};
use crate::vocab::rdf;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TurtleError {
    #[error("{line}:{column}: syntax error at `{token}`: {message}")]
    Syntax { line: usize, column: usize, token: String, message: String },
    #[error("{line}:{column}: unknown prefix `{prefix}:`")]
    UnknownPrefix { line: usize, column: usize, prefix: String },
    #[error("{line}:{column}: {source}")]
    MalformedLiteral {
        line: usize,
        column: usize,
        #[source]
        source: LiteralError,
    },
}

/// Parses a document into a new graph.
pub fn parse_turtle(text: &str) -> Result<Graph, TurtleError> {
    let mut g = Graph::new();
    parse_turtle_into(&mut g, text)?;
    Ok(g)
}

/// Parses a document into an existing graph. Blank node labels are scoped
/// to this document and never capture nodes already in `g`.
pub fn parse_turtle_into(g: &mut Graph, text: &str) -> Result<(), TurtleError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser { tokens, pos: 0, graph: g, blanks: HashMap::new() };
    parser.document()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    Int(String),
    Word(String),
    PrefixDirective,
    Punct(char),
    DoubleCaret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Iri(i) => format!("<{i}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Blank(l) => format!("_:{l}"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Int(i) | Tok::Word(i) => i.clone(),
            Tok::PrefixDirective => "@prefix".into(),
            Tok::Punct(c) => c.to_string(),
            Tok::DoubleCaret => "^^".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer { chars: text.chars().collect(), i: 0, line: 1, column: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.i + n).copied()
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

    fn error(&self, line: usize, column: usize, token: impl Into<String>, message: &str) -> TurtleError {
        TurtleError::Syntax { line, column, token: token.into(), message: message.into() }
    }

    fn tokenize(mut self) -> Result<Vec<Token>, TurtleError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek() else {
                out.push(Token { tok: Tok::Eof, line, column });
                return Ok(out);
            };
            let tok = match c {
                '<' => self.iri_ref()?,
                '"' => self.string()?,
                '@' => {
                    self.bump();
                    let word = self.word();
                    if word != "prefix" {
                        return Err(self.error(line, column, format!("@{word}"), "only @prefix directives are supported"));
                    }
                    Tok::PrefixDirective
                }
                '^' => {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(self.error(line, column, "^", "expected `^^`"));
                    }
                    Tok::DoubleCaret
                }
                '.' | ';' | ',' | '[' | ']' | '(' | ')' => {
                    self.bump();
                    Tok::Punct(c)
                }
                '_' if self.peek_at(1) == Some(':') => {
                    self.bump();
                    self.bump();
                    let label = self.local_name();
                    if label.is_empty() {
                        return Err(self.error(line, column, "_:", "empty blank node label"));
                    }
                    Tok::Blank(label)
                }
                '+' | '-' | '0'..='9' => {
                    let mut lexical = String::new();
                    if matches!(c, '+' | '-') {
                        lexical.push(c);
                        self.bump();
                    }
                    while let Some(d) = self.peek().filter(char::is_ascii_digit) {
                        lexical.push(d);
                        self.bump();
                    }
                    if matches!(self.peek(), Some(c) if is_name_char(c) || c == ':') {
                        let rest = self.word();
                        return Err(self.error(line, column, format!("{lexical}{rest}"), "malformed number"));
                    }
                    Tok::Int(lexical)
                }
                ':' => {
                    self.bump();
                    Tok::PName { prefix: String::new(), local: self.local_name() }
                }
                c if c.is_ascii_alphabetic() => {
                    let word = self.word();
                    if self.peek() == Some(':') {
                        self.bump();
                        Tok::PName { prefix: word, local: self.local_name() }
                    } else if matches!(word.as_str(), "a" | "true" | "false") {
                        Tok::Word(word)
                    } else {
                        return Err(self.error(line, column, word, "unexpected bare word"));
                    }
                }
                other => {
                    return Err(self.error(line, column, other.to_string(), "unexpected character"));
                }
            };
            out.push(Token { tok, line, column });
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| is_name_char(c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    // Dots are allowed inside a local name but never at its end.
    fn local_name(&mut self) -> String {
        let mut s = String::new();
        loop {
            match self.peek() {
                Some(c) if is_name_char(c) => {
                    s.push(c);
                    self.bump();
                }
                Some('.') if self.peek_at(1).is_some_and(is_name_char) && !s.is_empty() => {
                    s.push('.');
                    self.bump();
                }
                _ => return s,
            }
        }
    }

    fn iri_ref(&mut self) -> Result<Tok, TurtleError> {
        let (line, column) = (self.line, self.column);
        self.bump();
        let mut iri = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() || "<\"{}|^`\\".contains(c) => {
                    return Err(self.error(line, column, format!("<{iri}{c}"), "invalid character in IRI"));
                }
                Some(c) => iri.push(c),
                None => return Err(self.error(line, column, format!("<{iri}"), "unterminated IRI")),
            }
        }
        if !is_absolute_iri(&iri) {
            return Err(self.error(line, column, format!("<{iri}>"), "relative IRIs are not supported"));
        }
        Ok(Tok::Iri(iri))
    }

    fn string(&mut self) -> Result<Tok, TurtleError> {
        let (line, column) = (self.line, self.column);
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(Tok::Str(s)),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    other => {
                        let esc = other.map(String::from).unwrap_or_default();
                        return Err(self.error(self.line, self.column - 1, format!("\\{esc}"), "unsupported escape sequence"));
                    }
                },
                Some('\n') | None => {
                    return Err(self.error(line, column, format!("\"{s}"), "unterminated string"));
                }
                Some(c) => s.push(c),
            }
        }
    }
}

fn is_absolute_iri(iri: &str) -> bool {
    let Some((scheme, _)) = iri.split_once(':') else { return false };
    let mut chars = scheme.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c))
}

struct Parser<'g> {
    tokens: Vec<Token>,
    pos: usize,
    graph: &'g mut Graph,
    blanks: HashMap<String, Term>,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, token: &Token, message: &str) -> TurtleError {
        TurtleError::Syntax {
            line: token.line,
            column: token.column,
            token: token.tok.describe(),
            message: message.into(),
        }
    }

    fn expect_punct(&mut self, c: char, message: &str) -> Result<(), TurtleError> {
        let t = self.next();
        if t.tok == Tok::Punct(c) {
            Ok(())
        } else {
            Err(self.unexpected(&t, message))
        }
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            match self.peek().tok {
                Tok::Eof => return Ok(()),
                Tok::PrefixDirective => self.prefix_directive()?,
                _ => {
                    self.triples()?;
                    self.expect_punct('.', "expected `.` after statement")?;
                }
            }
        }
    }

    fn prefix_directive(&mut self) -> Result<(), TurtleError> {
        self.next();
        let t = self.next();
        let Tok::PName { prefix, local } = &t.tok else {
            return Err(self.unexpected(&t, "expected a prefix label such as `ex:`"));
        };
        if !local.is_empty() {
            return Err(self.unexpected(&t, "expected a prefix label such as `ex:`"));
        }
        let t2 = self.next();
        let Tok::Iri(ns) = t2.tok else {
            return Err(self.unexpected(&t2, "expected a namespace IRI"));
        };
        self.graph.prefixes_mut().insert(prefix.clone(), ns);
        self.expect_punct('.', "expected `.` after @prefix")
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        if self.is_punct('[') {
            let subject = self.blank_property_list()?;
            if self.is_punct('.') {
                return Ok(());
            }
            return self.predicate_object_list(&subject);
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> Result<Term, TurtleError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Iri(_) | Tok::PName { .. } | Tok::Blank(_) => self.node(),
            Tok::Punct('(') => self.collection(),
            _ => Err(self.unexpected(&t, "expected a subject")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), TurtleError> {
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.emit(subject.clone(), predicate.clone(), object);
                if self.is_punct(',') {
                    self.next();
                } else {
                    break;
                }
            }
            if !self.is_punct(';') {
                return Ok(());
            }
            while self.is_punct(';') {
                self.next();
            }
            if self.is_punct('.') || self.is_punct(']') {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, TurtleError> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) if w == "a" => Ok(Iri::new(rdf::TYPE)),
            Tok::Iri(i) => Ok(Iri::new(i.clone())),
            Tok::PName { prefix, local } => self.expand(&t, prefix, local),
            _ => Err(self.unexpected(&t, "expected a predicate")),
        }
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Iri(_) | Tok::PName { .. } | Tok::Blank(_) => self.node(),
            Tok::Punct('(') => self.collection(),
            Tok::Punct('[') => self.blank_property_list(),
            Tok::Str(_) | Tok::Int(_) | Tok::Word(_) => self.literal(),
            _ => Err(self.unexpected(&t, "expected an object")),
        }
    }

    fn node(&mut self) -> Result<Term, TurtleError> {
        let t = self.next();
        match &t.tok {
            Tok::Iri(i) => Ok(Term::iri(i.clone())),
            Tok::PName { prefix, local } => self.expand(&t, prefix, local).map(Term::Iri),
            Tok::Blank(label) => {
                if let Some(b) = self.blanks.get(label) {
                    return Ok(b.clone());
                }
                let b = self.graph.fresh_blank();
                self.blanks.insert(label.clone(), b.clone());
                Ok(b)
            }
            _ => Err(self.unexpected(&t, "expected an IRI or blank node")),
        }
    }

    fn literal(&mut self) -> Result<Term, TurtleError> {
        let t = self.next();
        let malformed = |source| TurtleError::MalformedLiteral { line: t.line, column: t.column, source };
        match &t.tok {
            Tok::Word(w) if w == "true" => Ok(Term::boolean(true)),
            Tok::Word(w) if w == "false" => Ok(Term::boolean(false)),
            Tok::Int(i) => Literal::typed(i, Datatype::Integer).map(Term::Literal).map_err(malformed),
            Tok::Str(s) => {
                if self.peek().tok != Tok::DoubleCaret {
                    return Ok(Term::string(s.clone()));
                }
                self.next();
                let dt_tok = self.next();
                let dt = match &dt_tok.tok {
                    Tok::Iri(i) => Iri::new(i.clone()),
                    Tok::PName { prefix, local } => self.expand(&dt_tok, prefix, local)?,
                    _ => return Err(self.unexpected(&dt_tok, "expected a datatype IRI")),
                };
                let datatype = Datatype::from_iri(dt.as_str())
                    .ok_or_else(|| malformed(LiteralError::UnsupportedDatatype(dt.as_str().to_string())))?;
                Literal::typed(s, datatype).map(Term::Literal).map_err(malformed)
            }
            _ => Err(self.unexpected(&t, "expected a literal")),
        }
    }

    fn blank_property_list(&mut self) -> Result<Term, TurtleError> {
        self.expect_punct('[', "expected `[`")?;
        let node = self.graph.fresh_blank();
        if !self.is_punct(']') {
            self.predicate_object_list(&node)?;
        }
        self.expect_punct(']', "expected `]`")?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, TurtleError> {
        self.expect_punct('(', "expected `(`")?;
        let mut items = Vec::new();
        while !self.is_punct(')') {
            if self.peek().tok == Tok::Eof {
                let t = self.peek().clone();
                return Err(self.unexpected(&t, "unterminated collection"));
            }
            items.push(self.object()?);
        }
        self.next();
        let mut head = Term::iri(rdf::NIL);
        let cells: Vec<Term> = items.iter().map(|_| self.graph.fresh_blank()).collect();
        for (cell, item) in cells.iter().zip(items).rev() {
            self.emit(cell.clone(), Iri::new(rdf::FIRST), item);
            self.emit(cell.clone(), Iri::new(rdf::REST), head);
            head = cell.clone();
        }
        Ok(head)
    }

    fn expand(&self, t: &Token, prefix: &str, local: &str) -> Result<Iri, TurtleError> {
        self.graph.prefixes().expand(prefix, local).ok_or_else(|| TurtleError::UnknownPrefix {
            line: t.line,
            column: t.column,
            prefix: prefix.to_string(),
        })
    }

    fn emit(&mut self, s: Term, p: Iri, o: Term) {
        // Subjects come from node(), collections or property lists, never literals.
        self.graph.insert(Triple::new(s, p, o).expect("subject position never holds a literal"));
    }
}
