//! Preservativity derivations.
//!
//! Three rule systems share one tree type:
//!
//! * `star`: A1–A4, B1, B2 (`(B→C) ∧ □B ▸ [B]Z`) and B3 for atomic or
//!   boxed antecedents;
//! * `ha`: as `star` but with B2′ (`B→C ▸ [B]Z`);
//! * `alpha`: B2 yields the brace set `{B}Z` and B3 only allows boxed
//!   antecedents.
//!
//! In every B2 variant `B = ⋀X` for a set of implications `X` and
//! `Z = {E | E→F ∈ X} ∪ {C}`.

mod closure;
mod search;
mod stream;

pub use closure::{check_box_closure, ClosureReport};
pub use search::{derive_pres, PresBudget};
pub use stream::{pres_axioms_for_pool, stream_pres_axioms};

use crate::calculi::{check_certificate, Certificate};
use crate::formula::{conjuncts, Formula};
use crate::logic::LogicId;
use crate::translate::{bracket_set, brace_set};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresVariant {
    Star,
    Ha,
    Alpha,
}

impl PresVariant {
    pub fn name(self) -> &'static str {
        match self {
            PresVariant::Star => "star",
            PresVariant::Ha => "ha",
            PresVariant::Alpha => "alpha",
        }
    }

    pub fn allows(self, rule: PresRule) -> bool {
        match rule {
            PresRule::A1 | PresRule::A2 | PresRule::A3 | PresRule::A4 | PresRule::B1 => true,
            PresRule::B2 => self != PresVariant::Ha,
            PresRule::B2Prime => self == PresVariant::Ha,
            PresRule::B3 => self != PresVariant::Alpha,
            PresRule::B3Alpha => self == PresVariant::Alpha,
        }
    }
}

impl fmt::Display for PresVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "star" => Ok(PresVariant::Star),
            "ha" => Ok(PresVariant::Ha),
            "alpha" => Ok(PresVariant::Alpha),
            _ => Err(format!("unknown preservativity variant `{s}`; expected star, ha or alpha")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PresRule {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B2Prime,
    B3,
    B3Alpha,
}

impl fmt::Display for PresRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresRule::A1 => "A1",
            PresRule::A2 => "A2",
            PresRule::A3 => "A3",
            PresRule::A4 => "A4",
            PresRule::B1 => "B1",
            PresRule::B2 => "B2",
            PresRule::B2Prime => "B2'",
            PresRule::B3 => "B3",
            PresRule::B3Alpha => "B3a",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SideData {
    None,
    /// iK4 derivation of `lhs → rhs`.
    Ik4 { certificate: Certificate },
    /// `B = ⋀x`, `A = B → c`.
    Decomposition { x: Vec<Formula>, c: Formula },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub lhs: Formula,
    pub rhs: Formula,
    pub rule: PresRule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Node>,
    pub side: SideData,
}

impl Node {
    pub fn new(lhs: Formula, rhs: Formula, rule: PresRule, premises: Vec<Node>) -> Node {
        Node {
            lhs,
            rhs,
            rule,
            premises,
            side: SideData::None,
        }
    }

    pub fn a1(lhs: Formula, rhs: Formula, certificate: Certificate) -> Node {
        Node {
            lhs,
            rhs,
            rule: PresRule::A1,
            premises: vec![],
            side: SideData::Ik4 { certificate },
        }
    }

    /// `A2` over a chain of nodes whose sides line up.
    pub fn chain(mut nodes: Vec<Node>) -> Node {
        let mut acc = nodes.remove(0);
        for n in nodes {
            acc = Node::new(acc.lhs.clone(), n.rhs.clone(), PresRule::A2, vec![acc, n]);
        }
        acc
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Node::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Node::depth).max().unwrap_or(0)
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&format!("{}  >>  {}   [{}]\n", self.lhs, self.rhs, self.rule));
        for p in &self.premises {
            p.write_text(out, indent + 1);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTree {
    pub variant: PresVariant,
    pub root: Node,
}

impl DerivationTree {
    pub fn conclusion(&self) -> (&Formula, &Formula) {
        (&self.root.lhs, &self.root.rhs)
    }

    /// One node per line, premises indented below their conclusion.
    pub fn to_text(&self) -> String {
        let mut out = format!("variant {}\n", self.variant);
        self.root.write_text(&mut out, 0);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {path:?}: {reason}")]
pub struct VerifyError {
    /// Child indices from the root to the failing node.
    pub path: Vec<usize>,
    pub reason: String,
}

/// Read `b` as `⋀X` for a set of implications.
fn implication_set(b: &Formula) -> Option<Vec<Formula>> {
    let xs: Vec<Formula> = conjuncts(b).into_iter().collect();
    if *b == Formula::Top {
        return Some(vec![]);
    }
    xs.iter().all(Formula::is_imp).then_some(xs)
}

/// `Z = {E | E → F ∈ X} ∪ {C}`.
pub fn z_set(xs: &[Formula], c: &Formula) -> Vec<Formula> {
    let mut z: Vec<Formula> = xs
        .iter()
        .filter_map(|x| match x {
            Formula::Imp(e, _) => Some((**e).clone()),
            _ => None,
        })
        .collect();
    z.push(c.clone());
    z
}

/// Right-hand side of a B2-family axiom for `B → C`, or `None` if `B` is
/// not a conjunction of implications.
pub fn b2_rhs(variant: PresVariant, b: &Formula, c: &Formula) -> Option<Formula> {
    let xs = implication_set(b)?;
    let z = z_set(&xs, c);
    Some(match variant {
        PresVariant::Alpha => brace_set(b, &z).expect("Z contains C"),
        _ => bracket_set(b, &z).expect("Z contains C"),
    })
}

/// Left-hand side of a B2-family axiom for `B → C`.
pub fn b2_lhs(variant: PresVariant, b: &Formula, c: &Formula) -> Formula {
    let a = Formula::imp(b.clone(), c.clone());
    match variant {
        PresVariant::Ha => a,
        _ => Formula::and(a, Formula::boxed(b.clone())),
    }
}

/// Split a B2-family left-hand side into `(B, C)`.
pub fn b2_parts(variant: PresVariant, lhs: &Formula) -> Option<(Formula, Formula)> {
    let imp = match (variant, lhs) {
        (PresVariant::Ha, imp) => imp,
        (_, Formula::And(imp, bx)) => {
            let Formula::Imp(b, _) = &**imp else { return None };
            if **bx != Formula::boxed((**b).clone()) {
                return None;
            }
            imp
        }
        _ => return None,
    };
    match imp {
        Formula::Imp(b, c) => Some(((**b).clone(), (**c).clone())),
        _ => None,
    }
}

fn check_node(variant: PresVariant, node: &Node) -> Result<(), String> {
    if !variant.allows(node.rule) {
        return Err(format!("rule {} is not part of the {variant} system", node.rule));
    }
    let arity = match node.rule {
        PresRule::A1 | PresRule::B2 | PresRule::B2Prime => 0,
        PresRule::A4 | PresRule::B3 | PresRule::B3Alpha => 1,
        PresRule::A2 | PresRule::A3 | PresRule::B1 => 2,
    };
    if node.premises.len() != arity {
        return Err(format!("rule {} takes {arity} premise(s), got {}", node.rule, node.premises.len()));
    }
    let p = &node.premises;
    let ok = match node.rule {
        PresRule::A1 => {
            let SideData::Ik4 { certificate } = &node.side else {
                return Err("A1 leaf without an iK4 certificate".into());
            };
            let goal = Formula::imp(node.lhs.clone(), node.rhs.clone());
            check_certificate(certificate, LogicId::IK4, &goal).map_err(|e| format!("A1: {e}"))?;
            true
        }
        PresRule::A2 => p[0].lhs == node.lhs && p[0].rhs == p[1].lhs && p[1].rhs == node.rhs,
        PresRule::A3 => {
            p[0].lhs == node.lhs
                && p[1].lhs == node.lhs
                && node.rhs == Formula::and(p[0].rhs.clone(), p[1].rhs.clone())
        }
        PresRule::A4 => {
            node.lhs == Formula::boxed(p[0].lhs.clone()) && node.rhs == Formula::boxed(p[0].rhs.clone())
        }
        PresRule::B1 => {
            p[0].rhs == node.rhs
                && p[1].rhs == node.rhs
                && node.lhs == Formula::or(p[0].lhs.clone(), p[1].lhs.clone())
        }
        PresRule::B2 | PresRule::B2Prime => {
            let (b, c) = b2_parts(variant, &node.lhs).ok_or("left side is not of B2 shape")?;
            let rhs = b2_rhs(variant, &b, &c).ok_or("antecedent is not a conjunction of implications")?;
            if let SideData::Decomposition { x, c: side_c } = &node.side {
                let xs: Vec<Formula> = implication_set(&b).unwrap_or_default();
                if *x != xs || *side_c != c {
                    return Err("recorded decomposition does not match the left side".into());
                }
            }
            rhs == node.rhs
        }
        PresRule::B3 | PresRule::B3Alpha => match (&node.lhs, &node.rhs) {
            (Formula::Imp(p1, a), Formula::Imp(p2, b)) => {
                let guard_ok = if node.rule == PresRule::B3 {
                    p1.is_atomic_or_boxed()
                } else {
                    p1.is_box()
                };
                guard_ok && p1 == p2 && **a == p[0].lhs && **b == p[0].rhs
            }
            _ => false,
        },
    };
    if ok {
        Ok(())
    } else {
        Err(format!("conclusion {} >> {} does not match rule {}", node.lhs, node.rhs, node.rule))
    }
}

fn verify_node(variant: PresVariant, node: &Node, path: &mut Vec<usize>) -> Result<(), VerifyError> {
    check_node(variant, node).map_err(|reason| VerifyError {
        path: path.clone(),
        reason,
    })?;
    for (i, p) in node.premises.iter().enumerate() {
        path.push(i);
        verify_node(variant, p, path)?;
        path.pop();
    }
    Ok(())
}

/// Check every node against its rule schema.
pub fn verify_derivation(tree: &DerivationTree) -> Result<(), VerifyError> {
    verify_node(tree.variant, &tree.root, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::{Justification, Line};
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn ipc_leaf(a: &str, b: &str) -> Node {
        let goal = Formula::imp(f(a), f(b));
        Node::a1(
            f(a),
            f(b),
            Certificate {
                lines: vec![Line { formula: goal, by: Justification::Ipc }],
            },
        )
    }

    fn b2_example() -> DerivationTree {
        let b = f("p -> q");
        let lhs = b2_lhs(PresVariant::Star, &b, &f("r"));
        let rhs = b2_rhs(PresVariant::Star, &b, &f("r")).unwrap();
        DerivationTree {
            variant: PresVariant::Star,
            root: Node::new(lhs, rhs, PresRule::B2, vec![]),
        }
    }

    #[test]
    fn worked_b2_instance() {
        let t = b2_example();
        assert_eq!(t.root.lhs, f("((p -> q) -> r) & #(p -> q)"));
        assert_eq!(t.root.rhs, f("p | r"));
        assert_eq!(verify_derivation(&t), Ok(()));
    }

    #[test]
    fn b1_needs_disjunction_on_the_left() {
        let t = DerivationTree {
            variant: PresVariant::Star,
            root: Node::new(f("p & q"), f("p"), PresRule::B1, vec![ipc_leaf("p", "p"), ipc_leaf("q", "p")]),
        };
        assert!(verify_derivation(&t).is_err());
    }

    #[test]
    fn a4_premise_must_be_unboxed_pair() {
        let t = DerivationTree {
            variant: PresVariant::Star,
            root: Node::new(f("#(p & q)"), f("#q"), PresRule::A4, vec![ipc_leaf("p & q", "p")]),
        };
        let err = verify_derivation(&t).unwrap_err();
        assert!(err.path.is_empty());
    }

    #[test]
    fn b3_guards() {
        let inner = ipc_leaf("p & q", "p");
        let star = DerivationTree {
            variant: PresVariant::Star,
            root: Node::new(f("r -> p & q"), f("r -> p"), PresRule::B3, vec![inner.clone()]),
        };
        assert!(verify_derivation(&star).is_ok());
        let alpha = DerivationTree {
            variant: PresVariant::Alpha,
            root: Node::new(f("r -> p & q"), f("r -> p"), PresRule::B3Alpha, vec![inner]),
        };
        assert!(verify_derivation(&alpha).is_err());
    }

    #[test]
    fn variants_gate_rules() {
        let mut t = b2_example();
        t.variant = PresVariant::Ha;
        assert!(verify_derivation(&t).is_err());
    }

    #[test]
    fn text_and_json() {
        let t = b2_example();
        assert!(t.to_text().contains("[B2]"));
        let back: DerivationTree = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
