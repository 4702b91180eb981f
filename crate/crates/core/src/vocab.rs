//! IRI constants for the vocabularies the engine reads and writes.

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
}

pub mod sh {
    pub const NS: &str = "http://www.w3.org/ns/shacl#";
    pub const NODE_SHAPE: &str = "http://www.w3.org/ns/shacl#NodeShape";
    pub const TARGET_CLASS: &str = "http://www.w3.org/ns/shacl#targetClass";
    pub const PROPERTY: &str = "http://www.w3.org/ns/shacl#property";
    pub const PATH: &str = "http://www.w3.org/ns/shacl#path";
    pub const HAS_VALUE: &str = "http://www.w3.org/ns/shacl#hasValue";
    pub const MIN_COUNT: &str = "http://www.w3.org/ns/shacl#minCount";
    pub const MAX_COUNT: &str = "http://www.w3.org/ns/shacl#maxCount";
    pub const CLASS: &str = "http://www.w3.org/ns/shacl#class";
    pub const LESS_THAN: &str = "http://www.w3.org/ns/shacl#lessThan";
    pub const EQUALS: &str = "http://www.w3.org/ns/shacl#equals";
    pub const DATATYPE: &str = "http://www.w3.org/ns/shacl#datatype";
    pub const NOT: &str = "http://www.w3.org/ns/shacl#not";
    pub const AND: &str = "http://www.w3.org/ns/shacl#and";
    pub const SEVERITY: &str = "http://www.w3.org/ns/shacl#severity";
    pub const VIOLATION: &str = "http://www.w3.org/ns/shacl#Violation";
    pub const INFO: &str = "http://www.w3.org/ns/shacl#Info";
    pub const RULE: &str = "http://www.w3.org/ns/shacl#rule";
    pub const TRIPLE_RULE: &str = "http://www.w3.org/ns/shacl#TripleRule";
    pub const ORDER: &str = "http://www.w3.org/ns/shacl#order";
    pub const CONDITION: &str = "http://www.w3.org/ns/shacl#condition";
    pub const SUBJECT: &str = "http://www.w3.org/ns/shacl#subject";
    pub const PREDICATE: &str = "http://www.w3.org/ns/shacl#predicate";
    pub const OBJECT: &str = "http://www.w3.org/ns/shacl#object";
    pub const THIS: &str = "http://www.w3.org/ns/shacl#this";
    pub const NAME: &str = "http://www.w3.org/ns/shacl#name";
    pub const DESCRIPTION: &str = "http://www.w3.org/ns/shacl#description";
    pub const MESSAGE: &str = "http://www.w3.org/ns/shacl#message";
}

/// The GDPR mini-ontology used by the shipped fixtures.
pub mod shriol {
    pub const NS: &str = "http://example.org/shRIOL#";
    pub const COMMUNICATE: &str = "http://example.org/shRIOL#Communicate";
    pub const IS_THEME_OF: &str = "http://example.org/shRIOL#is-theme-of";
    pub const IS_REJECTED_BY: &str = "http://example.org/shRIOL#is-rejected-by";
    pub const IS_SUPPORTED_BY: &str = "http://example.org/shRIOL#is-supported-by";
    pub const IS_TRANSPARENT: &str = "http://example.org/shRIOL#is-transparent";
}
