//! Compliance checking of RDF states of affairs against deontic norms.
//!
//! Norms (obligations, permissions, constitutive rules) compile to SHACL
//! node shapes and ordered triple rules. Rules are forward-chained in
//! strata so that negation-as-failure only looks at settled facts; the
//! resulting graph is then validated against the shapes.
//!
//! ```
//! use normcheck::compliance::{check, load_data, shapes_from_norms, CheckOptions};
//!
//! let data = load_data([r#"
//!     @prefix shRIOL: <http://example.org/shRIOL#> .
//!     shRIOL:P a shRIOL:PersonalDataProcessing .
//! "#]).unwrap();
//! let shapes = shapes_from_norms(r#"
//!     (:prefix shRIOL "http://example.org/shRIOL#")
//!     (norm :id "lawful" :kind obligation :target shRIOL:PersonalDataProcessing
//!           :require (shRIOL:is-lawful true))
//! "#).unwrap();
//! let outcome = check(&data, &shapes, &CheckOptions::default()).unwrap();
//! assert!(!outcome.report.conforms);
//! ```

pub mod compliance;
pub mod inference;
pub mod norms;
pub mod rdf;
pub mod shacl;
pub mod validator;
pub mod vocab;
