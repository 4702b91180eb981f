mod common;

use common::*;
use normcheck::compliance::{check, shapes_from_turtle, CheckOptions};
use normcheck::norms::{compile, parse_norms, CompileError, NormKind};
use normcheck::rdf::{parse_turtle, serialize_turtle};
use normcheck::shacl::{parse_shapes, shapes_to_graph};

#[test]
fn shipped_norm_inventory() {
    let set = parse_norms(&fixture("gdpr.norms")).unwrap();
    assert_eq!(set.obligations().count(), 2);
    assert_eq!(set.permissions().count(), 0);
    assert_eq!(set.constitutive().count(), 6);
    let lawful = set.get("shRIOL:CheckLawfulness").unwrap();
    assert_eq!(lawful.kind, NormKind::Obligation);
    assert_eq!(lawful.target, si("PersonalDataProcessing"));
    let orders: Vec<(&str, i64)> = set.constitutive().map(|n| (n.id.as_str(), n.order)).collect();
    assert_eq!(
        orders,
        [
            ("min-consent-age", 0),
            ("exception-age", 1),
            ("consent-lawful", 2),
            ("holder-consent-lawful", 2),
            ("rejected-not-transparent", 0),
            ("default-transparent", 1),
        ]
    );
}

#[test]
fn compiled_and_handwritten_agree_rule_for_rule() {
    let compiled = compile(&parse_norms(&fixture("gdpr.norms")).unwrap()).unwrap();
    let handwritten = shapes_from_turtle(&fixture("gdpr-shapes.ttl")).unwrap();
    for id in ["CheckLawfulness", "CheckTransparency"] {
        assert_eq!(compiled.shape(&si(id)), handwritten.shape(&si(id)), "{id}");
    }
    let mut a: Vec<_> = compiled.rules().map(|(shape, r)| (shape.target_class.clone(), r.clone())).collect();
    let mut b: Vec<_> = handwritten.rules().map(|(shape, r)| (shape.target_class.clone(), r.clone())).collect();
    a.sort_by(|x, y| x.1.id.cmp(&y.1.id));
    b.sort_by(|x, y| x.1.id.cmp(&y.1.id));
    assert_eq!(a, b);
}

#[test]
fn compiled_and_handwritten_reach_the_same_report() {
    let compiled = compile(&parse_norms(&fixture("gdpr.norms")).unwrap()).unwrap();
    let handwritten = shapes_from_turtle(&fixture("gdpr-shapes.ttl")).unwrap();
    let options = CheckOptions { explain: true, ..CheckOptions::default() };
    let a = check(&scenario(), &compiled, &options).unwrap();
    let b = check(&scenario(), &handwritten, &options).unwrap();
    assert_eq!(a.validation, b.validation);
    assert_eq!(a.report, b.report);
    assert_eq!(a.report.to_json(), b.report.to_json());
}

#[test]
fn emitted_shapes_reparse_to_the_compiled_document() {
    let set = parse_norms(&fixture("gdpr.norms")).unwrap();
    let compiled = compile(&set).unwrap();
    let text = serialize_turtle(&shapes_to_graph(&compiled, &set.prefixes));
    let back = parse_shapes(&parse_turtle(&text).unwrap()).unwrap();
    let mut expected = compiled.shapes.clone();
    expected.sort_by(|a, b| a.id.cmp(&b.id));
    assert_eq!(back.shapes, expected);
    assert!(text.contains("@prefix shRIOL:"), "{text}");
}

#[test]
fn naf_over_a_later_rule_is_refused_at_compile_time() {
    let text = "(:prefix t \"http://t/\")\n\
        (norm :id \"guarded\" :kind constitutive :order 0 :target t:C\n\
              :if ((naf (min t:p 1))) :assert (self t:q true))\n\
        (norm :id \"late\" :kind constitutive :order 1 :target t:C :assert (self t:p true))";
    let err = compile(&parse_norms(text).unwrap()).unwrap_err();
    let CompileError::Unstratifiable { reading, emitting, .. } = &err;
    assert_eq!((reading.as_str(), emitting.as_str()), ("guarded", "late"));
    assert!(err.to_string().contains("guarded"));
}
