//! The modal propositional formula tree.
//!
//! Children are reference counted so that rewriting passes can share
//! untouched subtrees. Formulas are immutable once built and are `Send + Sync`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A modal propositional formula.
///
/// The derived `Ord` is the canonical order used whenever a conjunction or
/// disjunction is viewed as a set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(String),
    Bot,
    Top,
    Box(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Arc::new(a))
    }

    /// `¬A`, i.e. `A → ⊥`.
    pub fn neg(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// `⊡A`, i.e. `A ∧ □A`.
    pub fn boxdot(a: Formula) -> Formula {
        Formula::and(a.clone(), Formula::boxed(a))
    }

    /// `A ↔ B` as `(A → B) ∧ (B → A)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn is_box(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    pub fn is_imp(&self) -> bool {
        matches!(self, Formula::Imp(..))
    }

    /// Atom or boxed formula: the formulas that propositional reasoning
    /// treats as indivisible.
    pub fn is_atomic_or_boxed(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Box(_))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Box(a) => 1 + a.size(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(a) => a.collect_atoms(out),
        }
    }

    /// The set of all subformulas, including `self`.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        out.insert(self.clone());
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            Formula::Box(a) => a.collect_subformulas(out),
            _ => {}
        }
    }

    /// True when no `□` occurs.
    pub fn is_box_free(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_box_free() && b.is_box_free()
            }
            Formula::Box(_) => false,
        }
    }

    /// Simultaneous substitution of atoms.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Atom(p) => map(p).unwrap_or_else(|| self.clone()),
            Formula::Bot | Formula::Top => self.clone(),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(map), b.substitute(map)),
            Formula::Box(a) => Formula::boxed(a.substitute(map)),
        }
    }

    /// Substitute a list of `(atom, formula)` bindings.
    pub fn substitute_bindings(&self, bindings: &[(String, Formula)]) -> Formula {
        self.substitute(&|p| {
            bindings
                .iter()
                .find(|(name, _)| name == p)
                .map(|(_, f)| f.clone())
        })
    }
}

/// Flatten nested conjunctions into a canonical set of conjuncts.
///
/// `⊤` conjuncts are kept; callers decide how to treat them.
pub fn conjuncts(a: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    fn go(f: &Formula, out: &mut BTreeSet<Formula>) {
        match f {
            Formula::And(a, b) => {
                go(a, out);
                go(b, out);
            }
            other => {
                out.insert(other.clone());
            }
        }
    }
    go(a, &mut out);
    out
}

/// Flatten nested disjunctions into a canonical set of disjuncts.
pub fn disjuncts(a: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    fn go(f: &Formula, out: &mut BTreeSet<Formula>) {
        match f {
            Formula::Or(a, b) => {
                go(a, out);
                go(b, out);
            }
            other => {
                out.insert(other.clone());
            }
        }
    }
    go(a, &mut out);
    out
}

/// Right-nested conjunction in iteration order; the empty conjunction is `⊤`.
pub fn big_and<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
    let items: Vec<Formula> = items.into_iter().collect();
    items
        .into_iter()
        .rev()
        .reduce(|acc, f| Formula::and(f, acc))
        .unwrap_or(Formula::Top)
}

/// Right-nested disjunction in iteration order; the empty disjunction is `⊥`.
pub fn big_or<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
    let items: Vec<Formula> = items.into_iter().collect();
    items
        .into_iter()
        .rev()
        .reduce(|acc, f| Formula::or(f, acc))
        .unwrap_or(Formula::Bot)
}

/// Curried implication `h1 → (h2 → … → goal)`.
pub fn curry<I>(hyps: I, goal: Formula) -> Formula
where
    I: IntoIterator<Item = Formula>,
    I::IntoIter: DoubleEndedIterator,
{
    hyps.into_iter()
        .rev()
        .fold(goal, |acc, h| Formula::imp(h, acc))
}

/// Every formula over `atoms` (plus `⊥`, `⊤`) of each size up to
/// `max_size`; entry `n - 1` holds the formulas of size `n`.
pub fn enumerate_formulas(atoms: &[String], max_size: usize, with_box: bool) -> Vec<Vec<Formula>> {
    let mut by_size: Vec<Vec<Formula>> = Vec::with_capacity(max_size);
    for n in 1..=max_size {
        let mut level = Vec::new();
        if n == 1 {
            level.extend(atoms.iter().map(|a| Formula::atom(a.clone())));
            level.push(Formula::Bot);
            level.push(Formula::Top);
        } else {
            if with_box {
                level.extend(by_size[n - 2].iter().map(|f| Formula::boxed(f.clone())));
            }
            for i in 1..n - 1 {
                let j = n - 1 - i;
                for a in &by_size[i - 1] {
                    for b in &by_size[j - 1] {
                        level.push(Formula::and(a.clone(), b.clone()));
                        level.push(Formula::or(a.clone(), b.clone()));
                        level.push(Formula::imp(a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size.push(level);
    }
    by_size
}

// Printer. Precedence (loosest first): ->, |, &, prefix.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Imp(_, b) if **b == Formula::Bot => 4,
        Formula::Imp(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(f);
    if p < min {
        out.write_str("(")?;
    }
    match f {
        Formula::Atom(name) => out.write_str(name)?,
        Formula::Bot => out.write_str("false")?,
        Formula::Top => out.write_str("true")?,
        Formula::Imp(a, b) => {
            if **b == Formula::Bot {
                out.write_str("~")?;
                write_at(a, 4, out)?;
            } else {
                write_at(a, 2, out)?;
                out.write_str(" -> ")?;
                write_at(b, 1, out)?;
            }
        }
        // `|` and `&` parse left-assoc; right operands of the same
        // connective need parentheses to round-trip structurally.
        Formula::Or(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" | ")?;
            write_at(b, 3, out)?;
        }
        Formula::And(a, b) => {
            write_at(a, 3, out)?;
            out.write_str(" & ")?;
            write_at(b, 4, out)?;
        }
        Formula::Box(a) => {
            out.write_str("#")?;
            write_at(a, 4, out)?;
        }
    }
    if p < min {
        out.write_str(")")?;
    }
    Ok(())
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = <std::borrow::Cow<'de, str>>::deserialize(d)?;
        crate::parse::parse_internal(&text).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 1, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        let atoms = vec!["p".to_string(), "q".to_string()];
        let counts: Vec<usize> = enumerate_formulas(&atoms, 5, true).iter().map(Vec::len).collect();
        assert_eq!(counts, vec![4, 4, 52, 148, 1444]);
        let flat: Vec<usize> = enumerate_formulas(&atoms, 3, false).iter().map(Vec::len).collect();
        assert_eq!(flat, vec![4, 0, 48]);
    }

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn empty_big_connectives() {
        assert_eq!(big_and(vec![]), Formula::Top);
        assert_eq!(big_or(vec![]), Formula::Bot);
        assert_eq!(big_and(vec![p()]), p());
    }

    #[test]
    fn flatten_dedups_in_canonical_order() {
        let f = Formula::and(q(), Formula::and(p(), q()));
        let cs: Vec<_> = conjuncts(&f).into_iter().collect();
        assert_eq!(cs, vec![p(), q()]);
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        let f = Formula::imp(Formula::imp(p(), q()), Formula::imp(q(), p()));
        assert_eq!(f.to_string(), "(p -> q) -> q -> p");
        assert_eq!(Formula::boxed(Formula::or(p(), q())).to_string(), "#(p | q)");
        assert_eq!(Formula::neg(Formula::neg(p())).to_string(), "~~p");
        assert_eq!(Formula::and(p(), Formula::and(q(), p())).to_string(), "p & (q & p)");
    }

    #[test]
    fn curry_nests_right() {
        let f = curry(vec![p(), q()], Formula::Bot);
        assert_eq!(f, Formula::imp(p(), Formula::imp(q(), Formula::Bot)));
    }
}
