//! Syntactic classes: NNIL, NNIL with boxes, TNNIL, boxed TNNIL and NOI.

use crate::formula::Formula;
use crate::measure::rho;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormulaClass {
    /// Box-free with `ρ ≤ 1`.
    Nnil,
    /// `ρ ≤ 1` with boxed formulas counted as atoms.
    NnilBox,
    /// Thoroughly NNIL.
    Tnnil,
    /// A non-modal combination of boxed TNNIL formulas.
    TnnilBox,
    /// No implication outside a box.
    Noi,
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaClass::Nnil => "NNIL",
            FormulaClass::NnilBox => "NNIL_box",
            FormulaClass::Tnnil => "TNNIL",
            FormulaClass::TnnilBox => "TNNIL_box",
            FormulaClass::Noi => "NOI",
        })
    }
}

pub fn is_noi(a: &Formula) -> bool {
    match a {
        Formula::Imp(..) => false,
        Formula::And(l, r) | Formula::Or(l, r) => is_noi(l) && is_noi(r),
        _ => true,
    }
}

pub fn is_nnil(a: &Formula) -> bool {
    a.is_box_free() && rho(a) <= 1
}

pub fn is_nnil_box(a: &Formula) -> bool {
    rho(a) <= 1
}

pub fn is_tnnil(a: &Formula) -> bool {
    match a {
        Formula::Atom(_) | Formula::Bot | Formula::Top => true,
        Formula::And(l, r) | Formula::Or(l, r) => is_tnnil(l) && is_tnnil(r),
        Formula::Box(inner) => is_tnnil(inner),
        Formula::Imp(l, r) => is_noi(l) && is_tnnil(l) && is_tnnil(r),
    }
}

pub fn is_tnnil_box(a: &Formula) -> bool {
    match a {
        Formula::Atom(_) | Formula::Bot | Formula::Top => true,
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
            is_tnnil_box(l) && is_tnnil_box(r)
        }
        Formula::Box(inner) => is_tnnil(inner),
    }
}

pub fn classify(a: &Formula) -> BTreeSet<FormulaClass> {
    let mut out = BTreeSet::new();
    if is_nnil(a) {
        out.insert(FormulaClass::Nnil);
    }
    if is_nnil_box(a) {
        out.insert(FormulaClass::NnilBox);
    }
    if is_tnnil(a) {
        out.insert(FormulaClass::Tnnil);
    }
    if is_tnnil_box(a) {
        out.insert(FormulaClass::TnnilBox);
    }
    if is_noi(a) {
        out.insert(FormulaClass::Noi);
    }
    out
}
