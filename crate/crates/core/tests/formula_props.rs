mod common;

use common::formula;
use imodal::classes::{classify, FormulaClass};
use imodal::formula::Formula;
use imodal::measure::measure;
use imodal::parse;
use imodal::rewrite::boxed_abstraction;
use proptest::prelude::*;

/// Immediate subformulas not under a box.
fn outer_children(a: &Formula) -> Vec<&Formula> {
    match a {
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => vec![l, r],
        _ => vec![],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn display_round_trips(a in formula(20, true)) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn class_inclusions(a in formula(16, true)) {
        let cs = classify(&a);
        if cs.contains(&FormulaClass::Nnil) {
            prop_assert!(cs.contains(&FormulaClass::NnilBox));
            prop_assert!(a.is_box_free());
        }
        if cs.contains(&FormulaClass::Tnnil) {
            prop_assert!(cs.contains(&FormulaClass::TnnilBox));
        }
    }

    #[test]
    fn connective_count_grows_outward(a in formula(16, true)) {
        let whole = measure(&a);
        for s in outer_children(&a) {
            let m = measure(s);
            if (m.d, m.i) == (whole.d, whole.i) {
                prop_assert!(m.c <= whole.c, "{s}: {m} vs {a}: {whole}");
            }
        }
    }

    #[test]
    fn abstraction_restores(a in formula(16, true)) {
        let abs = boxed_abstraction(&a);
        prop_assert!(abs.skeleton.is_box_free());
        prop_assert_eq!(abs.skeleton.substitute_bindings(&abs.bindings), a.clone());
        prop_assert_eq!(abs.restore(), a);
    }
}
