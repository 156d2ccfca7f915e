//! Structural rewriting: subtree replacement and abstraction of outer boxes.

use crate::formula::Formula;
use std::collections::BTreeMap;

/// Replace every occurrence of `target` by `replacement` in one outside-in
/// pass; replaced subtrees are not revisited.
pub fn replace_subformula(a: &Formula, target: &Formula, replacement: &Formula) -> Formula {
    if a == target {
        return replacement.clone();
    }
    match a {
        Formula::Atom(_) | Formula::Bot | Formula::Top => a.clone(),
        Formula::And(l, r) => Formula::and(
            replace_subformula(l, target, replacement),
            replace_subformula(r, target, replacement),
        ),
        Formula::Or(l, r) => Formula::or(
            replace_subformula(l, target, replacement),
            replace_subformula(r, target, replacement),
        ),
        Formula::Imp(l, r) => Formula::imp(
            replace_subformula(l, target, replacement),
            replace_subformula(r, target, replacement),
        ),
        Formula::Box(inner) => Formula::boxed(replace_subformula(inner, target, replacement)),
    }
}

/// Prefix of generated atoms. The parser refuses user atoms starting with `_`.
pub const FRESH_PREFIX: &str = "_v";

/// Source of atoms guaranteed not to occur in a given formula.
#[derive(Debug, Clone)]
pub struct FreshAtoms {
    next: usize,
}

impl FreshAtoms {
    /// Start above every `_vN` already present in `a`.
    pub fn avoiding(a: &Formula) -> FreshAtoms {
        let next = a
            .atoms()
            .iter()
            .filter_map(|p| p.strip_prefix(FRESH_PREFIX)?.parse::<usize>().ok())
            .max()
            .map_or(1, |n| n + 1);
        FreshAtoms { next }
    }

    pub fn next_atom(&mut self) -> String {
        let name = format!("{FRESH_PREFIX}{}", self.next);
        self.next += 1;
        name
    }
}

/// A non-modal skeleton together with the outer boxed formulas it abstracts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxedAbstraction {
    pub skeleton: Formula,
    /// `(fresh atom, boxed formula)` in order of first occurrence.
    pub bindings: Vec<(String, Formula)>,
}

impl BoxedAbstraction {
    /// Substitute the bindings back into the skeleton.
    pub fn restore(&self) -> Formula {
        self.skeleton.substitute_bindings(&self.bindings)
    }

    /// Substitute `f(□B)` for each binding.
    pub fn restore_with(&self, mut f: impl FnMut(&Formula) -> Formula) -> Formula {
        let mapped: Vec<(String, Formula)> = self
            .bindings
            .iter()
            .map(|(p, b)| (p.clone(), f(b)))
            .collect();
        self.skeleton.substitute_bindings(&mapped)
    }
}

/// Replace each box not under another box by a fresh atom. Structurally
/// equal boxes share one atom.
pub fn boxed_abstraction(a: &Formula) -> BoxedAbstraction {
    let mut fresh = FreshAtoms::avoiding(a);
    let mut seen: BTreeMap<Formula, String> = BTreeMap::new();
    let mut bindings = Vec::new();
    fn go(
        f: &Formula,
        fresh: &mut FreshAtoms,
        seen: &mut BTreeMap<Formula, String>,
        bindings: &mut Vec<(String, Formula)>,
    ) -> Formula {
        match f {
            Formula::Box(_) => {
                let name = seen.entry(f.clone()).or_insert_with(|| {
                    let name = fresh.next_atom();
                    bindings.push((name.clone(), f.clone()));
                    name
                });
                Formula::Atom(name.clone())
            }
            Formula::Atom(_) | Formula::Bot | Formula::Top => f.clone(),
            Formula::And(l, r) => Formula::and(
                go(l, fresh, seen, bindings),
                go(r, fresh, seen, bindings),
            ),
            Formula::Or(l, r) => Formula::or(
                go(l, fresh, seen, bindings),
                go(r, fresh, seen, bindings),
            ),
            Formula::Imp(l, r) => Formula::imp(
                go(l, fresh, seen, bindings),
                go(r, fresh, seen, bindings),
            ),
        }
    }
    let skeleton = go(a, &mut fresh, &mut seen, &mut bindings);
    BoxedAbstraction { skeleton, bindings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn replace_examples() {
        let qr = f("q -> r");
        assert_eq!(replace_subformula(&qr, &qr, &f("r")), f("r"));
        assert_eq!(replace_subformula(&f("(q -> r) & q"), &qr, &f("r")), f("r & q"));
        let a = f("p & #s");
        assert_eq!(replace_subformula(&a, &qr, &f("r")), a);
    }

    #[test]
    fn replacement_is_not_revisited() {
        // p is replaced by p & p once; the new p's are left alone.
        assert_eq!(replace_subformula(&f("p"), &f("p"), &f("p & p")), f("p & p"));
    }

    #[test]
    fn abstraction_examples() {
        let abs = boxed_abstraction(&f("#p"));
        assert_eq!(abs.skeleton, Formula::atom("_v1"));
        assert_eq!(abs.bindings, vec![("_v1".to_string(), f("#p"))]);

        let abs = boxed_abstraction(&f("#p & #p"));
        assert_eq!(abs.skeleton, Formula::and(Formula::atom("_v1"), Formula::atom("_v1")));
        assert_eq!(abs.bindings.len(), 1);

        let abs = boxed_abstraction(&f("p"));
        assert_eq!(abs.skeleton, f("p"));
        assert!(abs.bindings.is_empty());
    }

    #[test]
    fn fresh_atoms_avoid_existing_generated_names() {
        let a = Formula::and(Formula::atom("_v3"), f("#q"));
        let abs = boxed_abstraction(&a);
        assert_eq!(abs.bindings[0].0, "_v4");
        assert_eq!(abs.restore(), a);
    }
}
