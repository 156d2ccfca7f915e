//! Formula translations: the box translation, Leivant's translation, and the
//! bracket operators `[A]B`, `[A]'B` and `{A}(B)`.

use crate::classes::is_noi;
use crate::formula::{big_or, Formula};
use crate::rewrite::replace_subformula;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("{0} needs a nonempty set of formulas")]
    EmptySet(&'static str),
}

/// `A^□`: every atom and every implication is paired with its own box.
pub fn box_translate(a: &Formula) -> Formula {
    match a {
        Formula::Atom(_) => Formula::boxdot(a.clone()),
        Formula::Bot | Formula::Top => a.clone(),
        Formula::And(l, r) => Formula::and(box_translate(l), box_translate(r)),
        Formula::Or(l, r) => Formula::or(box_translate(l), box_translate(r)),
        Formula::Imp(l, r) => {
            let inner = Formula::imp(box_translate(l), box_translate(r));
            Formula::and(inner.clone(), Formula::boxed(inner))
        }
        Formula::Box(inner) => Formula::boxed(box_translate(inner)),
    }
}

/// `A^l`, used by the extended Leivant principle `□A → □A^l`.
pub fn leivant_translate(a: &Formula) -> Formula {
    match a {
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Box(_) => a.clone(),
        Formula::And(l, r) => Formula::and(leivant_translate(l), leivant_translate(r)),
        Formula::Or(l, r) => Formula::or(
            Formula::boxdot(leivant_translate(l)),
            Formula::boxdot(leivant_translate(r)),
        ),
        Formula::Imp(l, r) => {
            if is_noi(l) {
                Formula::imp((**l).clone(), leivant_translate(r))
            } else {
                a.clone()
            }
        }
    }
}

/// `[A]B`: guard every outer implication of `B` by `A`.
pub fn bracket(a: &Formula, b: &Formula) -> Formula {
    match b {
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Box(_) => b.clone(),
        Formula::And(l, r) => Formula::and(bracket(a, l), bracket(a, r)),
        Formula::Or(l, r) => Formula::or(bracket(a, l), bracket(a, r)),
        Formula::Imp(..) => Formula::imp(a.clone(), b.clone()),
    }
}

/// `[A]'B`: like `[A]B`, except `[A]'(B1 → B2) = (A' ∧ B1) → B2` where `A'`
/// is `A` with every occurrence of `B1 → B2` replaced by `B2`.
pub fn bracket_prime(a: &Formula, b: &Formula) -> Formula {
    match b {
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Box(_) => b.clone(),
        Formula::And(l, r) => Formula::and(bracket_prime(a, l), bracket_prime(a, r)),
        Formula::Or(l, r) => Formula::or(bracket_prime(a, l), bracket_prime(a, r)),
        Formula::Imp(b1, b2) => {
            let a_prime = replace_subformula(a, b, b2);
            Formula::imp(Formula::and(a_prime, (**b1).clone()), (**b2).clone())
        }
    }
}

fn canonical(zs: &[Formula]) -> BTreeSet<Formula> {
    zs.iter().cloned().collect()
}

/// `[A]Z = ⋁{[A]E | E ∈ Z}` over the canonical order of `Z`.
pub fn bracket_set(a: &Formula, zs: &[Formula]) -> Result<Formula, TranslateError> {
    if zs.is_empty() {
        return Err(TranslateError::EmptySet("[A]Z"));
    }
    Ok(big_or(canonical(zs).iter().map(|e| bracket(a, e))))
}

/// `[A]'Z` over the canonical order of `Z`.
pub fn bracket_prime_set(a: &Formula, zs: &[Formula]) -> Result<Formula, TranslateError> {
    if zs.is_empty() {
        return Err(TranslateError::EmptySet("[A]'Z"));
    }
    Ok(big_or(canonical(zs).iter().map(|e| bracket_prime(a, e))))
}

/// `{A}(B)`: boxes and `⊥` are kept, `∧`/`∨` distribute, everything else
/// becomes `A → B`.
pub fn brace(a: &Formula, b: &Formula) -> Formula {
    match b {
        Formula::Box(_) | Formula::Bot => b.clone(),
        Formula::And(l, r) => Formula::and(brace(a, l), brace(a, r)),
        Formula::Or(l, r) => Formula::or(brace(a, l), brace(a, r)),
        _ => Formula::imp(a.clone(), b.clone()),
    }
}

/// `{A}Γ = ⋁{{A}(B) | B ∈ Γ}`.
pub fn brace_set(a: &Formula, gamma: &[Formula]) -> Result<Formula, TranslateError> {
    if gamma.is_empty() {
        return Err(TranslateError::EmptySet("{A}Γ"));
    }
    Ok(big_or(canonical(gamma).iter().map(|e| brace(a, e))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn box_translation_clauses() {
        assert_eq!(box_translate(&f("p")), f("p & #p"));
        assert_eq!(box_translate(&Formula::Bot), Formula::Bot);
        let inner = f("p & #p -> q & #q");
        assert_eq!(
            box_translate(&f("p -> q")),
            Formula::and(inner.clone(), Formula::boxed(inner))
        );
        assert_eq!(box_translate(&f("#p")), f("#(p & #p)"));
    }

    #[test]
    fn leivant_clauses() {
        assert_eq!(
            leivant_translate(&f("p | q")),
            Formula::or(Formula::boxdot(f("p")), Formula::boxdot(f("q")))
        );
        assert_eq!(leivant_translate(&f("#p")), f("#p"));
        assert_eq!(leivant_translate(&f("(p -> q) -> r")), f("(p -> q) -> r"));
        assert_eq!(
            leivant_translate(&f("p -> q | r")),
            Formula::imp(f("p"), Formula::or(Formula::boxdot(f("q")), Formula::boxdot(f("r"))))
        );
    }

    #[test]
    fn bracket_clauses() {
        assert_eq!(bracket(&f("p"), &f("q -> r")), f("p -> q -> r"));
        assert_eq!(bracket(&f("p"), &f("#q")), f("#q"));
        assert_eq!(bracket(&f("p"), &f("q & (r -> s)")), f("q & (p -> r -> s)"));
    }

    #[test]
    fn bracket_prime_clauses() {
        let qr = f("q -> r");
        assert_eq!(bracket_prime(&qr, &qr), Formula::imp(f("r & q"), f("r")));
        assert_eq!(bracket_prime(&f("p"), &f("q")), f("q"));
        assert_eq!(bracket_prime(&f("p"), &f("#q")), f("#q"));
    }

    #[test]
    fn bracket_sets() {
        assert_eq!(bracket_set(&f("p"), &[f("q")]).unwrap(), f("q"));
        let b = f("p -> q");
        let c = f("r -> s");
        assert_eq!(
            bracket_set(&b, &[f("p"), c.clone()]).unwrap(),
            Formula::or(f("p"), bracket(&b, &c))
        );
        assert_eq!(
            bracket_set(&f("p"), &[f("#q"), f("r -> s")]).unwrap(),
            Formula::or(f("#q"), f("p -> r -> s"))
        );
        assert!(bracket_set(&f("p"), &[]).is_err());
    }

    #[test]
    fn brace_clauses() {
        assert_eq!(brace(&f("p"), &Formula::Bot), Formula::Bot);
        assert_eq!(brace(&f("p"), &f("q")), f("p -> q"));
        assert_eq!(brace(&f("p"), &f("#q & r")), f("#q & (p -> r)"));
        assert!(brace_set(&f("p"), &[]).is_err());
    }

    #[test]
    fn brackets_agree_on_atomic_and_boxed_arguments() {
        let a = f("(p -> q) & r");
        for b in ["p", "true", "false", "#(p -> q)"] {
            assert_eq!(bracket(&a, &f(b)), bracket_prime(&a, &f(b)));
        }
    }
}
