//! Rebuilding a derivation of `A ▸ B` as one of `A^□ ▸ B^□`.
//!
//! Each node is translated on its own. A3, A4 and B1 commute with the
//! translation, A1 leaves are re-proved in iK4, and B3 and B2 are expanded
//! into small sub-derivations.

use super::search::{PresBudget, Searcher};
use super::{implication_set, DerivationTree, Node, PresRule, PresVariant};
use crate::formula::{big_and, Formula};
use crate::translate::box_translate;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    /// Derivation of `A^□ ▸ B^□`, already checked.
    pub found: Option<DerivationTree>,
    /// Why no derivation was built.
    pub failure: Option<String>,
}

impl ClosureReport {
    pub fn succeeded(&self) -> bool {
        self.found.is_some()
    }
}

struct Closure {
    searcher: Searcher,
    variant: PresVariant,
}

impl Closure {
    fn a1(&mut self, a: &Formula, b: &Formula) -> Result<Node, String> {
        self.searcher
            .a1(a, b)
            .ok_or_else(|| format!("iK4 proof of {a} -> {b} not found"))
    }

    /// From `X ▸ Y` build `X ∧ □X ▸ Y ∧ □Y`.
    fn with_box(&mut self, step: Node) -> Result<Node, String> {
        let (x, y) = (step.lhs.clone(), step.rhs.clone());
        let bx = Formula::boxed(x.clone());
        let both = Formula::and(x.clone(), bx.clone());
        let left = Node::chain(vec![self.a1(&both, &x)?, step.clone()]);
        let lifted = Node::new(bx.clone(), Formula::boxed(y.clone()), PresRule::A4, vec![step]);
        let right = Node::chain(vec![self.a1(&both, &bx)?, lifted]);
        Ok(Node::new(
            both,
            Formula::and(y.clone(), Formula::boxed(y)),
            PresRule::A3,
            vec![left, right],
        ))
    }

    fn b3(&mut self, n: &Node, inner: Node) -> Result<Node, String> {
        let (Formula::Imp(p, _), Formula::Imp(..)) = (&n.lhs, &n.rhs) else {
            return Err("malformed B3 node".into());
        };
        let pt = box_translate(p);
        let (a, b) = (inner.lhs.clone(), inner.rhs.clone());
        let x = Formula::imp(pt.clone(), a.clone());
        let y = Formula::imp(pt, b.clone());
        let step = match &**p {
            Formula::Atom(_) => {
                // p ∧ □p → A  is split into  p → (□p → A)  and B3 is applied twice.
                let bp = Formula::boxed((**p).clone());
                let inner_guard = Node::new(
                    Formula::imp(bp.clone(), a.clone()),
                    Formula::imp(bp.clone(), b.clone()),
                    n.rule,
                    vec![inner],
                );
                let curried = Node::new(
                    Formula::imp((**p).clone(), inner_guard.lhs.clone()),
                    Formula::imp((**p).clone(), inner_guard.rhs.clone()),
                    n.rule,
                    vec![inner_guard],
                );
                let (cl, cr) = (curried.lhs.clone(), curried.rhs.clone());
                Node::chain(vec![self.a1(&x, &cl)?, curried, self.a1(&cr, &y)?])
            }
            Formula::Box(_) => Node::new(x, y, n.rule, vec![inner]),
            _ => return Err(format!("B3 guard {p} is neither atomic nor boxed")),
        };
        self.with_box(step)
    }

    fn b2(&mut self, n: &Node) -> Result<Node, String> {
        if n.rule == PresRule::B2Prime {
            return Err("B2' nodes are not covered by the translation recipe".into());
        }
        let lhs_t = box_translate(&n.lhs);
        let rhs_t = box_translate(&n.rhs);
        let Formula::And(imp, _) = &n.lhs else {
            return Err("malformed B2 node".into());
        };
        let Formula::Imp(b, c) = &**imp else {
            return Err("malformed B2 node".into());
        };
        let xs = implication_set(b).ok_or("B2 antecedent is not a conjunction of implications")?;
        let xs_t: Vec<Formula> = xs
            .iter()
            .map(|x| match x {
                Formula::Imp(e, f) => Formula::imp(box_translate(e), box_translate(f)),
                _ => unreachable!(),
            })
            .collect();
        let bp = big_and(xs_t);
        let inner = self
            .searcher
            .b2_node(&bp, &box_translate(c))
            .ok_or("translated antecedent lost its implication shape")?;
        let box_bp = Formula::boxed(bp.clone());
        let keep = self.a1(&inner.lhs, &box_bp)?;
        let mid = inner.lhs.clone();
        let widened = Node::new(
            mid.clone(),
            Formula::and(inner.rhs.clone(), box_bp),
            PresRule::A3,
            vec![inner, keep],
        );
        let widened_rhs = widened.rhs.clone();
        Ok(Node::chain(vec![self.a1(&lhs_t, &mid)?, widened, self.a1(&widened_rhs, &rhs_t)?]))
    }

    fn translate(&mut self, n: &Node) -> Result<Node, String> {
        let lhs = box_translate(&n.lhs);
        let rhs = box_translate(&n.rhs);
        match n.rule {
            PresRule::A1 => self.a1(&lhs, &rhs),
            PresRule::A2 | PresRule::A3 | PresRule::A4 | PresRule::B1 => {
                let premises = n
                    .premises
                    .iter()
                    .map(|p| self.translate(p))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Node::new(lhs, rhs, n.rule, premises))
            }
            PresRule::B3 | PresRule::B3Alpha => {
                let inner = self.translate(&n.premises[0])?;
                self.b3(n, inner)
            }
            PresRule::B2 | PresRule::B2Prime => self.b2(n),
        }
    }
}

/// Translate every node of `tree` and check the result.
pub fn check_box_closure(tree: &DerivationTree, budget: PresBudget) -> ClosureReport {
    let mut c = Closure {
        searcher: Searcher::new(tree.variant, budget),
        variant: tree.variant,
    };
    let built = c.translate(&tree.root).and_then(|root| {
        let t = DerivationTree {
            variant: c.variant,
            root,
        };
        super::verify_derivation(&t).map_err(|e| e.to_string())?;
        Ok(t)
    });
    match built {
        Ok(t) => ClosureReport {
            found: Some(t),
            failure: None,
        },
        Err(e) => ClosureReport {
            found: None,
            failure: Some(e),
        },
    }
}
