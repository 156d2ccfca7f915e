//! Complexity measures: the implication-nesting rank `ρ` and the
//! lexicographic termination measure `(𝔡, 𝔦, 𝔠)`.

use crate::formula::Formula;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Left-nesting depth of implications, with boxed formulas counted as atoms.
///
/// A box-free formula is NNIL exactly when `rho(a) <= 1`.
pub fn rho(a: &Formula) -> usize {
    match a {
        Formula::Atom(_) | Formula::Bot | Formula::Top | Formula::Box(_) => 0,
        Formula::And(l, r) | Formula::Or(l, r) => rho(l).max(rho(r)),
        Formula::Imp(l, r) => (rho(l) + 1).max(rho(r)),
    }
}

/// `(d, i, c)` compared lexicographically; the derived `Ord` is exactly that
/// order because fields are declared in priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MeasureTuple {
    /// Maximum nesting of boxes.
    pub d: usize,
    /// Largest implication count found among the outer implications.
    pub i: usize,
    /// Connectives outside every box.
    pub c: usize,
}

impl fmt::Display for MeasureTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d, self.i, self.c)
    }
}

/// Nested box depth.
pub fn box_depth(a: &Formula) -> usize {
    match a {
        Formula::Atom(_) | Formula::Bot | Formula::Top => 0,
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => box_depth(l).max(box_depth(r)),
        Formula::Box(inner) => box_depth(inner) + 1,
    }
}

/// Distinct implication subformulas not under any box.
pub fn outer_implications(a: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    fn go(f: &Formula, out: &mut BTreeSet<Formula>) {
        match f {
            Formula::Imp(l, r) => {
                out.insert(f.clone());
                go(l, out);
                go(r, out);
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                go(l, out);
                go(r, out);
            }
            _ => {}
        }
    }
    go(a, &mut out);
    out
}

/// Occurrences of `∧`, `∨`, `→` outside every box.
pub fn outer_connectives(a: &Formula) -> usize {
    match a {
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
            1 + outer_connectives(l) + outer_connectives(r)
        }
        _ => 0,
    }
}

pub fn measure(a: &Formula) -> MeasureTuple {
    let i = outer_implications(a)
        .iter()
        .map(|e| outer_implications(e).len())
        .max()
        .unwrap_or(0);
    MeasureTuple {
        d: box_depth(a),
        i,
        c: outer_connectives(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(&f("p")), 0);
        assert_eq!(rho(&f("p -> q")), 1);
        assert_eq!(rho(&f("#((p -> q) -> r)")), 0);
        assert_eq!(rho(&f("(p -> q) -> r")), 2);
        assert_eq!(rho(&f("#(p -> q) -> r")), 1);
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measure(&f("##p")), MeasureTuple { d: 2, i: 0, c: 0 });
        assert_eq!(measure(&f("(p -> q) -> r")), MeasureTuple { d: 0, i: 2, c: 2 });
        assert_eq!(measure(&f("p & #(q | r)")), MeasureTuple { d: 1, i: 0, c: 1 });
    }

    #[test]
    fn lexicographic_order() {
        let a = MeasureTuple { d: 0, i: 5, c: 9 };
        let b = MeasureTuple { d: 1, i: 0, c: 0 };
        let c = MeasureTuple { d: 1, i: 0, c: 1 };
        assert!(a < b && b < c);
    }

    #[test]
    fn repeated_implications_count_once() {
        // I(D) is a set: both copies of p -> q are one element.
        let m = measure(&f("(p -> q) & (p -> q)"));
        assert_eq!(m.i, 1);
        assert_eq!(m.c, 3);
    }
}
