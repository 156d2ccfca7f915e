//! Goal-directed modal sequent search with certificate extraction.
//!
//! G4ip is extended by one rule for boxed goals:
//!
//! * iK4: `Γ♭, □Γ♭ ⊢ A` gives `Γ ⊢ □A`;
//! * iGL and extensions with necessitation: `Γ♭, □Γ♭, □A ⊢ A` gives `Γ ⊢ □A`;
//! * extensions of iGLC: `Γ, Γ♭, □A ⊢ A` gives `Γ ⊢ □A`.
//!
//! Here `Γ♭ = {B | □B ∈ Γ}`. Each use of the rule becomes a lemma
//! `Γ' → □A`, derived from the premise by necessitation (or `CP`), `K`, `4`
//! and `L`; the goal follows from its lemmas by a single IPC line.

use super::{calculus, Certificate, Justification, Line};
use crate::formula::{curry, Formula};
use crate::logic::LogicId;
use crate::schema::{instantiate, AxiomSchema};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;
use std::sync::atomic::{AtomicBool, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BoxRule {
    K4,
    Gl,
    Glc,
}

fn box_rule(logic: LogicId) -> Option<BoxRule> {
    let calc = calculus(logic);
    let has = |s| calc.schemata.contains(&s);
    if !has(AxiomSchema::K) || !has(AxiomSchema::Four) {
        return None;
    }
    match (has(AxiomSchema::L), has(AxiomSchema::CP), calc.necessitation) {
        (false, false, true) => Some(BoxRule::K4),
        (true, false, true) => Some(BoxRule::Gl),
        (true, true, false) => Some(BoxRule::Glc),
        _ => None,
    }
}

/// `lemma = curry(hyps, □a)`, proved from `premise = curry(inner, a)`.
struct Lemma {
    hyps: Vec<Formula>,
    boxed_goal: Formula,
    inner: Vec<Formula>,
    deps: Rc<BTreeSet<usize>>,
}

impl Lemma {
    fn formula(&self) -> Formula {
        curry(self.hyps.iter().cloned(), self.boxed_goal.clone())
    }

    fn premise(&self) -> Formula {
        let Formula::Box(a) = &self.boxed_goal else { unreachable!() };
        curry(self.inner.iter().cloned(), (**a).clone())
    }
}

type Deps = Rc<BTreeSet<usize>>;
type Key = (Vec<Formula>, Formula);

struct ModalProver<'a> {
    rule: BoxRule,
    stop: &'a AtomicBool,
    memo: HashMap<Key, Option<Deps>>,
    active: HashSet<Key>,
    lemmas: Vec<Lemma>,
    nodes: u64,
    max_nodes: u64,
}

fn with(ctx: &BTreeSet<Formula>, drop: &Formula, add: &[Formula]) -> BTreeSet<Formula> {
    let mut out = ctx.clone();
    out.remove(drop);
    out.extend(add.iter().cloned());
    out
}

fn union(a: &Deps, b: &Deps) -> Deps {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    Rc::new(a.union(b).copied().collect())
}

impl<'a> ModalProver<'a> {
    fn new(rule: BoxRule, max_nodes: u64, stop: &'a AtomicBool) -> ModalProver<'a> {
        ModalProver {
            rule,
            stop,
            memo: HashMap::new(),
            active: HashSet::new(),
            lemmas: Vec::new(),
            nodes: 0,
            max_nodes,
        }
    }

    fn proves(&mut self, ctx: &BTreeSet<Formula>, goal: &Formula) -> Option<Deps> {
        let key = (ctx.iter().cloned().collect::<Vec<_>>(), goal.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        if self.exhausted() || !self.active.insert(key.clone()) {
            return None;
        }
        self.nodes += 1;
        let v = self.search(ctx, goal);
        self.active.remove(&key);
        if v.is_some() || !self.exhausted() {
            self.memo.insert(key, v.clone());
        }
        v
    }

    fn exhausted(&self) -> bool {
        self.nodes >= self.max_nodes || self.stop.load(Ordering::Relaxed)
    }

    fn search(&mut self, ctx: &BTreeSet<Formula>, goal: &Formula) -> Option<Deps> {
        let none = || Some(Rc::new(BTreeSet::new()));
        if *goal == Formula::Top || ctx.contains(&Formula::Bot) || ctx.contains(goal) {
            return none();
        }
        for h in ctx {
            let step: Option<Vec<Formula>> = match h {
                Formula::And(a, b) => Some(vec![(**a).clone(), (**b).clone()]),
                Formula::Top => Some(vec![]),
                Formula::Or(a, b) => {
                    let l = self.proves(&with(ctx, h, &[(**a).clone()]), goal)?;
                    let r = self.proves(&with(ctx, h, &[(**b).clone()]), goal)?;
                    return Some(union(&l, &r));
                }
                Formula::Imp(a, b) => match &**a {
                    Formula::Top => Some(vec![(**b).clone()]),
                    Formula::Bot => Some(vec![]),
                    Formula::And(c, d) => Some(vec![Formula::imp((**c).clone(), Formula::imp((**d).clone(), (**b).clone()))]),
                    Formula::Or(c, d) => Some(vec![
                        Formula::imp((**c).clone(), (**b).clone()),
                        Formula::imp((**d).clone(), (**b).clone()),
                    ]),
                    p if p.is_atomic_or_boxed() && ctx.contains(p) => Some(vec![(**b).clone()]),
                    _ => None,
                },
                _ => None,
            };
            if let Some(add) = step {
                return self.proves(&with(ctx, h, &add), goal);
            }
        }
        match goal {
            Formula::Imp(a, b) => return self.proves(&with(ctx, goal, &[(**a).clone()]), b),
            Formula::And(a, b) => {
                let l = self.proves(ctx, a)?;
                let r = self.proves(ctx, b)?;
                return Some(union(&l, &r));
            }
            Formula::Or(a, b) => {
                if let Some(d) = self.proves(ctx, a) {
                    return Some(d);
                }
                if let Some(d) = self.proves(ctx, b) {
                    return Some(d);
                }
            }
            Formula::Box(a) => {
                if let Some(d) = self.box_step(ctx, goal, a) {
                    return Some(d);
                }
            }
            _ => {}
        }
        // □X → B with □X derivable by the box rule.
        let guarded: Vec<Formula> = ctx
            .iter()
            .filter(|h| matches!(h, Formula::Imp(a, _) if a.is_box() && !ctx.contains(&**a)))
            .cloned()
            .collect();
        for h in guarded {
            let Formula::Imp(x, b) = &h else { unreachable!() };
            let rest = with(ctx, &h, &[]);
            let Some(l) = self.proves(&rest, x) else { continue };
            let Some(r) = self.proves(&with(ctx, &h, &[(**b).clone()]), goal) else { continue };
            return Some(union(&l, &r));
        }
        let nested: Vec<Formula> = ctx
            .iter()
            .filter(|h| matches!(h, Formula::Imp(a, _) if matches!(**a, Formula::Imp(..))))
            .cloned()
            .collect();
        for h in nested {
            let Formula::Imp(cd, b) = &h else { unreachable!() };
            let Formula::Imp(c, d) = &**cd else { unreachable!() };
            let db = Formula::imp((**d).clone(), (**b).clone());
            let c_to_d = Formula::imp((**c).clone(), (**d).clone());
            let Some(l) = self.proves(&with(ctx, &h, &[db]), &c_to_d) else { continue };
            let Some(r) = self.proves(&with(ctx, &h, &[(**b).clone()]), goal) else { continue };
            return Some(union(&l, &r));
        }
        None
    }

    fn box_step(&mut self, ctx: &BTreeSet<Formula>, goal: &Formula, a: &Formula) -> Option<Deps> {
        let boxed: Vec<Formula> = ctx.iter().filter(|h| h.is_box()).cloned().collect();
        let flat: Vec<Formula> = boxed
            .iter()
            .map(|h| match h {
                Formula::Box(x) => (**x).clone(),
                _ => unreachable!(),
            })
            .collect();
        let (hyps, mut inner): (Vec<Formula>, Vec<Formula>) = match self.rule {
            BoxRule::K4 | BoxRule::Gl => (boxed.clone(), flat.iter().chain(&boxed).cloned().collect()),
            BoxRule::Glc => {
                let all: Vec<Formula> = ctx.iter().cloned().collect();
                (all.clone(), all.into_iter().chain(flat.iter().cloned()).collect())
            }
        };
        if self.rule != BoxRule::K4 {
            inner.push(goal.clone());
        }
        let inner: Vec<Formula> = {
            let mut seen = BTreeSet::new();
            inner.into_iter().filter(|f| seen.insert(f.clone())).collect()
        };
        let inner_ctx: BTreeSet<Formula> = inner.iter().cloned().collect();
        let deps = self.proves(&inner_ctx, a)?;
        self.lemmas.push(Lemma {
            hyps,
            boxed_goal: goal.clone(),
            inner,
            deps,
        });
        Some(Rc::new(BTreeSet::from([self.lemmas.len() - 1])))
    }
}

struct Builder<'a> {
    lemmas: &'a [Lemma],
    lines: Vec<Line>,
    known: HashMap<Formula, usize>,
    necessitation: bool,
}

impl Builder<'_> {
    fn emit(&mut self, formula: Formula, by: Justification) -> usize {
        if let Some(&i) = self.known.get(&formula) {
            return i;
        }
        self.lines.push(Line { formula: formula.clone(), by });
        self.known.insert(formula, self.lines.len());
        self.lines.len()
    }

    fn axiom(&mut self, schema: AxiomSchema, args: Vec<Formula>) -> usize {
        let f = instantiate(schema, &args).expect("well-formed instance");
        self.emit(f, Justification::Axiom { schema, args })
    }

    /// `curry(theorems, goal)` by IPC, then modus ponens along the chain.
    fn combine(&mut self, theorems: &[usize], goal: Formula) -> usize {
        if let Some(&i) = self.known.get(&goal) {
            return i;
        }
        let hyps: Vec<Formula> = theorems.iter().map(|&i| self.lines[i - 1].formula.clone()).collect();
        let mut current = curry(hyps.iter().cloned(), goal.clone());
        let mut major = self.emit(current.clone(), Justification::Ipc);
        for &minor in theorems {
            let Formula::Imp(_, rest) = &current else { unreachable!() };
            current = (**rest).clone();
            major = self.emit(current.clone(), Justification::Mp { minor, major });
        }
        major
    }

    fn theorem(&mut self, goal: Formula, deps: &BTreeSet<usize>) -> usize {
        let used: Vec<usize> = deps.iter().map(|&l| self.lemma(l)).collect();
        self.combine(&used, goal)
    }

    fn lemma(&mut self, id: usize) -> usize {
        let lemma = &self.lemmas[id];
        let target = lemma.formula();
        if let Some(&i) = self.known.get(&target) {
            return i;
        }
        let (premise, inner, hyps) = (lemma.premise(), lemma.inner.clone(), lemma.hyps.clone());
        let Formula::Box(a) = lemma.boxed_goal.clone() else { unreachable!() };
        let deps = lemma.deps.clone();
        let t = self.theorem(premise.clone(), &deps);
        let boxed_t = Formula::boxed(premise.clone());
        let mut facts = vec![if self.necessitation {
            self.emit(boxed_t, Justification::Nec { premise: t })
        } else {
            let cp = self.axiom(AxiomSchema::CP, vec![premise.clone()]);
            self.emit(boxed_t, Justification::Mp { minor: t, major: cp })
        }];
        // K along the curried premise.
        let mut rest = premise;
        for _ in 0..inner.len() {
            let Formula::Imp(x, r) = rest.clone() else { unreachable!() };
            facts.push(self.axiom(AxiomSchema::K, vec![(*x).clone(), (*r).clone()]));
            rest = (*r).clone();
        }
        for h in &hyps {
            match h {
                Formula::Box(x) => facts.push(self.axiom(AxiomSchema::Four, vec![(**x).clone()])),
                other if !self.necessitation => facts.push(self.axiom(AxiomSchema::CP, vec![other.clone()])),
                _ => {}
            }
        }
        if inner.last() == Some(&Formula::boxed((*a).clone())) {
            facts.push(self.axiom(AxiomSchema::L, vec![(*a).clone()]));
        }
        self.combine(&facts, self.lemmas[id].formula())
    }
}

/// Sequent search for `goal` in `logic`, within `max_nodes` sequents.
/// Supported for iK4 and the extensions of iGL built from `K`, `4`, `L`
/// with either necessitation or `CP`; other logics give `None`.
pub fn prove_modal(logic: LogicId, goal: &Formula, max_nodes: u64) -> Option<Certificate> {
    prove_modal_cancellable(logic, goal, max_nodes, &AtomicBool::new(false))
}

/// [`prove_modal`] that gives up once `stop` is set.
pub fn prove_modal_cancellable(logic: LogicId, goal: &Formula, max_nodes: u64, stop: &AtomicBool) -> Option<Certificate> {
    let rule = box_rule(logic)?;
    let mut prover = ModalProver::new(rule, max_nodes, stop);
    let deps = prover.proves(&BTreeSet::new(), goal)?;
    let mut b = Builder {
        lemmas: &prover.lemmas,
        lines: Vec::new(),
        known: HashMap::new(),
        necessitation: calculus(logic).necessitation,
    };
    b.theorem(goal.clone(), &deps);
    let last = b.known[goal];
    let mut lines = b.lines;
    lines.truncate(last);
    Some(Certificate { lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::check_certificate;
    use crate::parse::parse;

    fn proves(logic: LogicId, s: &str) -> bool {
        let goal = parse(s).unwrap();
        match prove_modal(logic, &goal, 100_000) {
            Some(c) => {
                check_certificate(&c, logic, &goal).unwrap_or_else(|e| panic!("{s}: {e}\n{c}"));
                true
            }
            None => false,
        }
    }

    #[test]
    fn k4_theorems() {
        assert!(proves(LogicId::IK4, "#(p & q) -> #p"));
        assert!(proves(LogicId::IK4, "#p -> ##p"));
        assert!(proves(LogicId::IK4, "#(p -> q) & #p -> #q & ###q"));
        assert!(!proves(LogicId::IK4, "#p -> p"));
        assert!(!proves(LogicId::IK4, "#(#p -> p) -> #p"));
    }

    #[test]
    fn gl_theorems() {
        assert!(proves(LogicId::IGL, "#(#p -> p) -> #p"));
        assert!(proves(LogicId::IGL, "#~#false -> #false"));
        assert!(!proves(LogicId::IGL, "p -> #p"));
    }

    #[test]
    fn glc_theorems() {
        assert!(proves(LogicId::IGLC, "p -> #p"));
        assert!(proves(LogicId::IGLC, "#(p | q) -> #(#p | q)"));
        assert!(proves(LogicId::IGLC, "#(#p -> p) -> #p"));
        assert!(!proves(LogicId::IGLC, "~~p -> (#~p -> p)"));
        assert!(proves(LogicId::IK4, "(#p -> q) & #(p & r) -> q"));
    }

    #[test]
    fn unsupported_logics() {
        assert!(prove_modal(LogicId::Ipc, &Formula::Top, 10).is_none());
        assert!(prove_modal(LogicId::IpcBox, &Formula::Top, 10).is_none());
    }
}
