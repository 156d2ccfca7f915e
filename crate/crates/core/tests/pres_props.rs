mod common;

use common::formula;
use imodal::calculi::{Budget, Verdict};
use imodal::pres::{derive_pres, verify_derivation, PresBudget};
use imodal::{decide_ihstar_sigma, Formula, PresVariant};
use proptest::prelude::*;

fn budget() -> PresBudget {
    PresBudget {
        max_depth: 2,
        max_size: 60,
        ik4_nodes: 20_000,
    }
}

/// Pairs likely to be derivable, built from the shape of `a`.
fn pair() -> impl Strategy<Value = (Formula, Formula)> {
    (formula(6, true), formula(4, true), 0usize..5).prop_map(|(a, c, k)| match k {
        0 => (Formula::and(a.clone(), c), a),
        1 => (a.clone(), Formula::or(a, c)),
        2 => (Formula::boxed(Formula::and(a.clone(), c)), Formula::boxed(a)),
        3 => (Formula::imp(Formula::atom("p"), Formula::and(a.clone(), c)), Formula::imp(Formula::atom("p"), a)),
        _ => (a, c),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivations_verify((a, b) in pair(), k in 0usize..3) {
        let v = [PresVariant::Star, PresVariant::Ha, PresVariant::Alpha][k];
        if let Some(t) = derive_pres(&a, &b, v, budget()) {
            prop_assert_eq!(t.conclusion(), (&a, &b));
            prop_assert!(verify_derivation(&t).is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivable_pairs_are_never_refuted((a, b) in pair()) {
        if derive_pres(&a, &b, PresVariant::Star, budget()).is_some() {
            let goal = Formula::imp(Formula::boxed(a), Formula::boxed(b));
            let small = Budget { depth: 1, max_lines: 1_000, max_worlds: 3, pres_depth: 1 };
            let r = decide_ihstar_sigma(&goal, small);
            prop_assert!(!matches!(r.outcome.verdict, Verdict::Refuted { .. }), "{goal}");
        }
    }
}
