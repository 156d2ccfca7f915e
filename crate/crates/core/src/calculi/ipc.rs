//! Decision procedure for `IPC_□`.
//!
//! Outer boxed subformulas are abstracted to fresh atoms, then the
//! contraction-free sequent calculus G4ip decides the skeleton. Failed
//! searches are turned into a finite canonical countermodel built from
//! prime theories over the subformulas of the skeleton.

use super::{BoundsReport, Certificate, Countermodel, Justification, Line, Outcome, Stats, Verdict};
use crate::formula::Formula;
use crate::models::{BirelationalModel, MAX_WORLDS};
use crate::rewrite::boxed_abstraction;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

/// Memoising G4ip prover. Boxed formulas are treated as atoms.
#[derive(Default)]
pub struct IpcProver {
    memo: HashMap<(Vec<Formula>, Formula), bool>,
    nodes: u64,
    cancel: Option<Arc<AtomicBool>>,
}

fn ctx_with(ctx: &BTreeSet<Formula>, drop: &Formula, add: &[Formula]) -> BTreeSet<Formula> {
    let mut out = ctx.clone();
    out.remove(drop);
    out.extend(add.iter().cloned());
    out
}

enum LeftStep {
    Replace(Formula, Vec<Formula>),
    Split(Formula, Formula, Formula),
}

fn left_invertible(ctx: &BTreeSet<Formula>) -> Option<LeftStep> {
    for h in ctx {
        match h {
            Formula::And(a, b) => return Some(LeftStep::Replace(h.clone(), vec![(**a).clone(), (**b).clone()])),
            Formula::Or(a, b) => return Some(LeftStep::Split(h.clone(), (**a).clone(), (**b).clone())),
            Formula::Top => return Some(LeftStep::Replace(h.clone(), vec![])),
            Formula::Imp(a, b) => match &**a {
                Formula::Top => return Some(LeftStep::Replace(h.clone(), vec![(**b).clone()])),
                Formula::Bot => return Some(LeftStep::Replace(h.clone(), vec![])),
                Formula::And(c, d) => {
                    let curried = Formula::imp((**c).clone(), Formula::imp((**d).clone(), (**b).clone()));
                    return Some(LeftStep::Replace(h.clone(), vec![curried]));
                }
                Formula::Or(c, d) => {
                    let l = Formula::imp((**c).clone(), (**b).clone());
                    let r = Formula::imp((**d).clone(), (**b).clone());
                    return Some(LeftStep::Replace(h.clone(), vec![l, r]));
                }
                p if p.is_atomic_or_boxed() && ctx.contains(p) => {
                    return Some(LeftStep::Replace(h.clone(), vec![(**b).clone()]));
                }
                _ => {}
            },
            _ => {}
        }
    }
    None
}

impl IpcProver {
    pub fn new() -> IpcProver {
        IpcProver::default()
    }

    /// A prover whose searches fail as soon as `cancel` is set.
    pub fn cancellable(cancel: Arc<AtomicBool>) -> IpcProver {
        IpcProver {
            cancel: Some(cancel),
            ..IpcProver::default()
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Whether `ctx ⊢ goal` in IPC (boxes opaque).
    pub fn proves(&mut self, ctx: &BTreeSet<Formula>, goal: &Formula) -> bool {
        let key = (ctx.iter().cloned().collect::<Vec<_>>(), goal.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        if self.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed)) {
            return false;
        }
        self.nodes += 1;
        let v = self.search(ctx, goal);
        self.memo.insert(key, v);
        v
    }

    fn search(&mut self, ctx: &BTreeSet<Formula>, goal: &Formula) -> bool {
        if *goal == Formula::Top || ctx.contains(&Formula::Bot) || ctx.contains(goal) {
            return true;
        }
        if let Some(step) = left_invertible(ctx) {
            return match step {
                LeftStep::Replace(h, add) => self.proves(&ctx_with(ctx, &h, &add), goal),
                LeftStep::Split(h, a, b) => {
                    self.proves(&ctx_with(ctx, &h, &[a]), goal) && self.proves(&ctx_with(ctx, &h, &[b]), goal)
                }
            };
        }
        match goal {
            Formula::Imp(a, b) => return self.proves(&ctx_with(ctx, goal, &[(**a).clone()]), b),
            Formula::And(a, b) => return self.proves(ctx, a) && self.proves(ctx, b),
            _ => {}
        }
        if let Formula::Or(a, b) = goal {
            if self.proves(ctx, a) || self.proves(ctx, b) {
                return true;
            }
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
            if self.proves(&ctx_with(ctx, &h, &[db]), &c_to_d) && self.proves(&ctx_with(ctx, &h, &[(**b).clone()]), goal)
            {
                return true;
            }
        }
        false
    }

    /// Extend `base` to a theory over `sub` that is maximal among those not
    /// deriving any member of `avoid`.
    fn saturate(&mut self, sub: &BTreeSet<Formula>, base: &BTreeSet<Formula>, avoid: &Formula) -> BTreeSet<Formula> {
        let mut w = base.clone();
        for b in sub {
            if w.contains(b) {
                continue;
            }
            w.insert(b.clone());
            if self.proves(&w, avoid) {
                w.remove(b);
            }
        }
        w
    }

    /// Canonical countermodel to an unprovable box-free-or-opaque formula.
    /// Returns `None` if more than [`MAX_WORLDS`] worlds would be needed.
    pub fn countermodel(&mut self, a: &Formula) -> Option<BirelationalModel> {
        let sub = a.subformulas();
        let root = self.saturate(&sub, &BTreeSet::new(), a);
        let mut worlds = vec![root];
        let mut k = 0;
        while k < worlds.len() {
            let w = worlds[k].clone();
            for imp in &sub {
                let Formula::Imp(b, c) = imp else { continue };
                if w.contains(imp) {
                    continue;
                }
                let reuse = worlds
                    .iter()
                    .any(|v| v.is_superset(&w) && v.contains(&**b) && !v.contains(&**c));
                if reuse {
                    continue;
                }
                let mut base = w.clone();
                base.insert((**b).clone());
                let v = self.saturate(&sub, &base, c);
                if !worlds.contains(&v) {
                    if worlds.len() == MAX_WORLDS {
                        return None;
                    }
                    worlds.push(v);
                }
            }
            k += 1;
        }
        let n = worlds.len();
        let mut leq = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && worlds[i].is_subset(&worlds[j]) {
                    leq.push((i, j));
                }
            }
        }
        let val: BTreeMap<usize, BTreeSet<String>> = worlds
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let atoms = w
                    .iter()
                    .filter_map(|f| match f {
                        Formula::Atom(p) => Some(p.clone()),
                        _ => None,
                    })
                    .collect();
                (i, atoms)
            })
            .collect();
        Some(BirelationalModel::new(n, &leq, &[], &val).expect("canonical model satisfies the invariants"))
    }
}

/// Whether `IPC_□ ⊢ a`.
pub fn ipc_provable(a: &Formula) -> bool {
    let abs = boxed_abstraction(a);
    IpcProver::new().proves(&BTreeSet::new(), &abs.skeleton)
}

/// Complete decision for `IPC_□`. Provable goals get a one-line certificate
/// justified by the prover; unprovable ones a countermodel over the
/// abstracted language.
pub fn decide_ipc_box(a: &Formula) -> Outcome {
    let abs = boxed_abstraction(a);
    let mut prover = IpcProver::new();
    if prover.proves(&BTreeSet::new(), &abs.skeleton) {
        let certificate = Certificate {
            lines: vec![Line {
                formula: a.clone(),
                by: Justification::Ipc,
            }],
        };
        return Outcome {
            verdict: Verdict::Provable { certificate },
            stats: Stats {
                nodes: prover.nodes(),
                frames: 0,
            },
        };
    }
    let verdict = match prover.countermodel(&abs.skeleton) {
        Some(model) => Verdict::Refuted {
            countermodel: Countermodel {
                model,
                bindings: abs.bindings,
            },
        },
        None => Verdict::Unknown {
            report: BoundsReport {
                reason: format!("unprovable, but the canonical countermodel exceeds {MAX_WORLDS} worlds"),
                lines: 0,
                worlds: MAX_WORLDS,
            },
        },
    };
    Outcome {
        verdict,
        stats: Stats {
            nodes: prover.nodes(),
            frames: 1,
        },
    }
}
