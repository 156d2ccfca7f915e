//! Goal-directed search for preservativity derivations.
//!
//! Rules are tried in a fixed order: A1 (discharged by the iK4 prover),
//! the structural rules A3, B1, A4 and B3, a direct B2 match, and finally
//! A2 through a few middle formulas suggested by the shape of the goal.

use super::{b2_lhs, b2_parts, b2_rhs, implication_set, DerivationTree, Node, PresRule, PresVariant, SideData};
use crate::calculi::{ipc_provable, prove_modal, Certificate, Justification, Line};
use crate::formula::{big_and, conjuncts, Formula};
use crate::logic::LogicId;
use crate::models::{find_countermodel_with, FrameClass};
use std::collections::{BTreeSet, HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresBudget {
    /// Nesting of A2 steps through suggested middle formulas.
    pub max_depth: usize,
    /// Largest `size(A) + size(B)` of any intermediate pair.
    pub max_size: usize,
    /// Sequents explored for each iK4 leaf.
    pub ik4_nodes: u64,
}

impl Default for PresBudget {
    fn default() -> Self {
        PresBudget {
            max_depth: 4,
            max_size: 400,
            ik4_nodes: 200_000,
        }
    }
}

type Pair = (Formula, Formula);

pub(crate) struct Searcher {
    variant: PresVariant,
    budget: PresBudget,
    a1_memo: HashMap<Pair, Option<Certificate>>,
    failed: HashMap<Pair, usize>,
    active: HashSet<Pair>,
    ipc_only: bool,
}

impl Searcher {
    pub(crate) fn new(variant: PresVariant, budget: PresBudget) -> Searcher {
        Searcher {
            variant,
            budget,
            a1_memo: HashMap::new(),
            failed: HashMap::new(),
            active: HashSet::new(),
            ipc_only: false,
        }
    }

    /// Discharge A1 only for IPC-provable implications.
    pub(crate) fn ipc_only(mut self) -> Searcher {
        self.ipc_only = true;
        self
    }

    /// `iK4 ⊢ a → b` as an A1 leaf.
    pub(crate) fn a1(&mut self, a: &Formula, b: &Formula) -> Option<Node> {
        let key = (a.clone(), b.clone());
        if let Some(c) = self.a1_memo.get(&key) {
            return c.clone().map(|cert| Node::a1(a.clone(), b.clone(), cert));
        }
        let goal = Formula::imp(a.clone(), b.clone());
        let cert = if ipc_provable(&goal) {
            Some(Certificate {
                lines: vec![Line { formula: goal.clone(), by: Justification::Ipc }],
            })
        } else if self.ipc_only || find_countermodel_with(FrameClass::K4, &goal, 2, true).0.is_some() {
            None
        } else {
            prove_modal(LogicId::IK4, &goal, self.budget.ik4_nodes)
        };
        self.a1_memo.insert(key, cert.clone());
        cert.map(|cert| Node::a1(a.clone(), b.clone(), cert))
    }

    fn guard_ok(&self, p: &Formula) -> bool {
        match self.variant {
            PresVariant::Alpha => p.is_box(),
            _ => p.is_atomic_or_boxed(),
        }
    }

    fn b3_rule(&self) -> PresRule {
        match self.variant {
            PresVariant::Alpha => PresRule::B3Alpha,
            _ => PresRule::B3,
        }
    }

    fn b2_rule(&self) -> PresRule {
        match self.variant {
            PresVariant::Ha => PresRule::B2Prime,
            _ => PresRule::B2,
        }
    }

    pub(crate) fn b2_node(&self, b: &Formula, c: &Formula) -> Option<Node> {
        let rhs = b2_rhs(self.variant, b, c)?;
        Some(Node {
            lhs: b2_lhs(self.variant, b, c),
            rhs,
            rule: self.b2_rule(),
            premises: vec![],
            side: SideData::Decomposition {
                x: implication_set(b).unwrap_or_default(),
                c: c.clone(),
            },
        })
    }

    pub(crate) fn search(&mut self, a: &Formula, b: &Formula, depth: usize) -> Option<Node> {
        if a.size() + b.size() > self.budget.max_size {
            return None;
        }
        let key = (a.clone(), b.clone());
        if self.failed.get(&key).is_some_and(|&d| d >= depth) || self.active.contains(&key) {
            return None;
        }
        self.active.insert(key.clone());
        let found = self.try_rules(a, b, depth);
        self.active.remove(&key);
        if found.is_none() {
            self.failed.insert(key, depth);
        }
        found
    }

    fn try_rules(&mut self, a: &Formula, b: &Formula, depth: usize) -> Option<Node> {
        if let Some(n) = self.a1(a, b) {
            return Some(n);
        }
        if let Formula::And(b1, b2) = b {
            if let Some(l) = self.search(a, b1, depth) {
                if let Some(r) = self.search(a, b2, depth) {
                    return Some(Node::new(a.clone(), b.clone(), PresRule::A3, vec![l, r]));
                }
            }
        }
        if let Formula::Or(a1, a2) = a {
            if let Some(l) = self.search(a1, b, depth) {
                if let Some(r) = self.search(a2, b, depth) {
                    return Some(Node::new(a.clone(), b.clone(), PresRule::B1, vec![l, r]));
                }
            }
        }
        if let (Formula::Box(x), Formula::Box(y)) = (a, b) {
            if let Some(n) = self.search(x, y, depth) {
                return Some(Node::new(a.clone(), b.clone(), PresRule::A4, vec![n]));
            }
        }
        if let (Formula::Imp(p, x), Formula::Imp(q, y)) = (a, b) {
            if p == q && self.guard_ok(p) {
                if let Some(n) = self.search(x, y, depth) {
                    return Some(Node::new(a.clone(), b.clone(), self.b3_rule(), vec![n]));
                }
            }
        }
        if let Some((bb, c)) = b2_parts(self.variant, a) {
            if let Some(n) = self.b2_node(&bb, &c) {
                if n.rhs == *b {
                    return Some(n);
                }
            }
        }
        if depth == 0 {
            return None;
        }
        self.b2_hint(a, b, depth)
            .or_else(|| self.guard_hint(a, b, depth))
            .or_else(|| self.box_hint(a, b, depth))
            .or_else(|| self.split_hint(a, b, depth))
    }

    /// `a ▸ a ∧ [B']Z` through a B2 instance read off an implication
    /// conjunct of `a`, then continue from the strengthened left side.
    fn b2_hint(&mut self, a: &Formula, b: &Formula, depth: usize) -> Option<Node> {
        let parts: Vec<Formula> = conjuncts(a).into_iter().collect();
        for part in &parts {
            let Formula::Imp(p, q) = part else { continue };
            let xs: Vec<Formula> = conjuncts(p).into_iter().filter(|x| x.is_imp()).collect();
            if xs.is_empty() {
                continue;
            }
            let bb = big_and(xs);
            let Some(b2) = self.b2_node(&bb, q) else { continue };
            if conjuncts(a).contains(&b2.rhs) {
                continue;
            }
            let Some(bridge) = self.a1(a, &b2.lhs) else { continue };
            let Some(id) = self.a1(a, a) else { continue };
            let middle = Formula::and(a.clone(), b2.rhs.clone());
            let Some(rest) = self.search(&middle, b, depth - 1) else { continue };
            let step = Node::chain(vec![bridge, b2]);
            let widen = Node::new(a.clone(), middle.clone(), PresRule::A3, vec![id, step]);
            return Some(Node::chain(vec![widen, rest]));
        }
        None
    }

    /// Goal `p → G`: `a ▸ p → (a ∧ p)` by A1, then B3 on `a ∧ p ▸ G`.
    fn guard_hint(&mut self, a: &Formula, b: &Formula, depth: usize) -> Option<Node> {
        let Formula::Imp(p, g) = b else { return None };
        if !self.guard_ok(p) {
            return None;
        }
        let mut cs: BTreeSet<Formula> = conjuncts(a);
        cs.insert((**p).clone());
        let strengthened = big_and(cs);
        let lifted = Formula::imp((**p).clone(), strengthened.clone());
        if lifted == *a {
            return None;
        }
        let bridge = self.a1(a, &lifted)?;
        let inner = self.search(&strengthened, g, depth - 1)?;
        let b3 = Node::new(lifted, b.clone(), self.b3_rule(), vec![inner]);
        Some(Node::chain(vec![bridge, b3]))
    }

    /// Goal `□G`: collect the boxed conjuncts `□Dᵢ` of `a`, pass to
    /// `□⋀(Dᵢ ∧ □Dᵢ)` by A1 and apply A4.
    fn box_hint(&mut self, a: &Formula, b: &Formula, depth: usize) -> Option<Node> {
        let Formula::Box(g) = b else { return None };
        let mut inner: BTreeSet<Formula> = BTreeSet::new();
        for c in conjuncts(a) {
            if let Formula::Box(d) = &c {
                inner.insert((*d).as_ref().clone());
                inner.insert(c.clone());
            }
        }
        if inner.is_empty() {
            return None;
        }
        let target = Formula::boxed(big_and(inner.clone()));
        if target == *a {
            return None;
        }
        let bridge = self.a1(a, &target)?;
        let under = self.search(&big_and(inner), g, depth - 1)?;
        let a4 = Node::new(target, b.clone(), PresRule::A4, vec![under]);
        Some(Node::chain(vec![bridge, a4]))
    }

    /// A disjunctive conjunct of `a` is distributed and B1 applied.
    fn split_hint(&mut self, a: &Formula, b: &Formula, depth: usize) -> Option<Node> {
        let cs: BTreeSet<Formula> = conjuncts(a);
        let d = cs.iter().find(|c| matches!(c, Formula::Or(..)))?.clone();
        let Formula::Or(d1, d2) = &d else { unreachable!() };
        let side = |x: &Formula| {
            let mut s = cs.clone();
            s.remove(&d);
            s.insert(x.clone());
            big_and(s)
        };
        let (l1, l2) = (side(d1), side(d2));
        let split = Formula::or(l1.clone(), l2.clone());
        let bridge = self.a1(a, &split)?;
        let left = self.search(&l1, b, depth - 1)?;
        let right = self.search(&l2, b, depth - 1)?;
        let b1 = Node::new(split, b.clone(), PresRule::B1, vec![left, right]);
        Some(Node::chain(vec![bridge, b1]))
    }
}

/// Search for a derivation of `a ▸ b` in `variant`. `None` means nothing
/// was found within the budget.
pub fn derive_pres(a: &Formula, b: &Formula, variant: PresVariant, budget: PresBudget) -> Option<DerivationTree> {
    let mut s = Searcher::new(variant, budget);
    let root = s.search(a, b, budget.max_depth)?;
    Some(DerivationTree { variant, root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::pres::verify_derivation;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn derive(a: &str, b: &str, v: PresVariant) -> DerivationTree {
        let t = derive_pres(&f(a), &f(b), v, PresBudget::default()).unwrap_or_else(|| panic!("{a} >> {b}"));
        verify_derivation(&t).unwrap();
        t
    }

    #[test]
    fn a1_leaf() {
        let t = derive("p & q", "p", PresVariant::Star);
        assert_eq!(t.root.rule, PresRule::A1);
    }

    #[test]
    fn worked_b2() {
        let t = derive("((p -> q) -> r) & #(p -> q)", "p | r", PresVariant::Star);
        assert_eq!(t.root.rule, PresRule::B2);
    }

    #[test]
    fn b3_with_atomic_guard() {
        let t = derive("q -> ((p -> s) -> r) & #(p -> s)", "q -> p | r", PresVariant::Star);
        assert_eq!(t.root.rule, PresRule::B3);
    }

    #[test]
    fn ha_variant_uses_b2_prime() {
        let t = derive("(p -> q) -> r", "p | r", PresVariant::Ha);
        assert_eq!(t.root.rule, PresRule::B2Prime);
    }

    #[test]
    fn not_everything_is_derivable() {
        assert!(derive_pres(&f("p"), &f("q"), PresVariant::Star, PresBudget::default()).is_none());
    }
}
