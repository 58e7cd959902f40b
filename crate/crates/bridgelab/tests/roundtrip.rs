//! Property: rendering a closed formula and parsing it back is the identity.

use bridgelab::syntax::{parse, Formula, QuotationContext, Term};
use proptest::prelude::*;

fn ctx() -> QuotationContext {
    let mut names = std::collections::BTreeMap::new();
    names.insert("b".to_string(), "Fut Pun(a)".to_string());
    names.insert("l".to_string(), "~True(l)".to_string());
    bridgelab::syntax::parse_name_map(&names).unwrap()
}

fn constant() -> impl Strategy<Value = Term> {
    prop_oneof![Just(Term::Const("a".into())), Just(Term::Const("b".into()))]
}

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        Just(Formula::Falsum),
        constant().prop_map(|t| Formula::Atom("Pun".into(), vec![t])),
        (constant(), constant())
            .prop_map(|(x, y)| Formula::Atom("Says".into(), vec![x, y])),
        prop_oneof![Just("b"), Just("l")]
            .prop_map(|n| Formula::TruePred(Term::Const(n.into()))),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(4, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::simp),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::cond(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::bicond(a, b)),
            // Fut only over a ground atom, but embedded in larger contexts.
            inner.prop_map(|a| Formula::and(
                Formula::fut(Formula::Atom("Pun".into(), vec![Term::Const("a".into())])),
                a,
            )),
        ]
    })
}

proptest! {
    #[test]
    fn parse_render_roundtrip(f in formula()) {
        let ctx = ctx();
        let rendered = f.to_string();
        let back = parse(&rendered, &ctx).unwrap();
        prop_assert_eq!(back, f);
    }
}
