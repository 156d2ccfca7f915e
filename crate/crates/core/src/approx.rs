//! NNIL and TNNIL approximation.
//!
//! * [`nnil_star`] computes `A*`, an NNIL formula (boxes read as atoms) with
//!   `IPC_□ ⊢ A* → A`.
//! * [`tnnil_plus`] computes `A⁺` by recursion on box depth: abstract the
//!   outer boxes, approximate the skeleton, and put `□(B⁺)` back.
//! * [`tnnil_minus`] computes `A⁻`: only the boxed parts are approximated.
//! * [`tnnil_dagger`] computes `A†`, the single-pass variant that descends
//!   into boxes directly.
//!
//! Every recursive call of the implication cases is recorded in a
//! [`RewriteTrace`]. The engine refuses to recurse on a subgoal whose
//! measure is not strictly below the current input, so a bug surfaces as
//! [`ApproxError::MeasureNotDecreasing`] instead of nontermination.

use crate::formula::{big_and, conjuncts, disjuncts, Formula};
use crate::measure::{measure, MeasureTuple};
use crate::rewrite::boxed_abstraction;
use crate::translate::{bracket_prime_set, bracket_set};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "1")]
    Atomic,
    #[serde(rename = "2")]
    Conj,
    #[serde(rename = "3")]
    Disj,
    #[serde(rename = "4a")]
    SplitConsequent,
    #[serde(rename = "4b")]
    SplitAntecedent,
    #[serde(rename = "4ci")]
    AtomInAntecedent,
    #[serde(rename = "4cii")]
    TopInAntecedent,
    #[serde(rename = "4ciii")]
    BotInAntecedent,
    #[serde(rename = "4civ-first")]
    BracketBranch,
    #[serde(rename = "4civ-second")]
    BracketPrimeBranch,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Atomic => "1",
            CaseLabel::Conj => "2",
            CaseLabel::Disj => "3",
            CaseLabel::SplitConsequent => "4a",
            CaseLabel::SplitAntecedent => "4b",
            CaseLabel::AtomInAntecedent => "4ci",
            CaseLabel::TopInAntecedent => "4cii",
            CaseLabel::BotInAntecedent => "4ciii",
            CaseLabel::BracketBranch => "4civ-first",
            CaseLabel::BracketPrimeBranch => "4civ-second",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub case: CaseLabel,
    pub input_measure: MeasureTuple,
    pub subgoals: Vec<Formula>,
}

impl TraceStep {
    /// True when every subgoal measures strictly below the input.
    pub fn decreases(&self) -> bool {
        self.subgoals.iter().all(|g| measure(g) < self.input_measure)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    /// Indices of steps that fail the measure-decrease audit.
    pub fn violations(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.decreases())
            .map(|(i, _)| i)
            .collect()
    }

    /// One line per step: `<case> <(d,i,c)> <subgoal count>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&format!("{} {} {}\n", s.case, s.input_measure, s.subgoals.len()));
        }
        out
    }

    fn extend(&mut self, other: RewriteTrace) {
        self.steps.extend(other.steps);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("case {case}: subgoal {subgoal} has measure {sub_measure}, not below {input_measure} of {input}")]
    MeasureNotDecreasing {
        case: CaseLabel,
        input: Formula,
        input_measure: MeasureTuple,
        subgoal: Formula,
        sub_measure: MeasureTuple,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Boxed formulas are left alone.
    Star,
    /// `(□B)† = □B†`.
    Dagger,
}

struct Engine {
    mode: Mode,
    memo: HashMap<Formula, Formula>,
    trace: RewriteTrace,
}

/// Split the leftmost outer occurrence selected by `pick` (searching through
/// `∧`/`∨` only) into its two halves, returning `(J[D], J[E])`.
fn split_outer(f: &Formula, pick: fn(&Formula) -> Option<(Formula, Formula)>) -> Option<(Formula, Formula)> {
    if let Some(parts) = pick(f) {
        return Some(parts);
    }
    match f {
        Formula::And(l, r) | Formula::Or(l, r) => {
            let rebuild = |child_l: Formula, child_r: Formula| match f {
                Formula::And(..) => Formula::and(child_l, child_r),
                _ => Formula::or(child_l, child_r),
            };
            if let Some((d, e)) = split_outer(l, pick) {
                return Some((rebuild(d, (**r).clone()), rebuild(e, (**r).clone())));
            }
            if let Some((d, e)) = split_outer(r, pick) {
                return Some((rebuild((**l).clone(), d), rebuild((**l).clone(), e)));
            }
            None
        }
        _ => None,
    }
}

fn pick_and(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::And(l, r) => Some(((**l).clone(), (**r).clone())),
        _ => None,
    }
}

fn pick_or(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::Or(l, r) => Some(((**l).clone(), (**r).clone())),
        _ => None,
    }
}

impl Engine {
    fn new(mode: Mode) -> Engine {
        Engine {
            mode,
            memo: HashMap::new(),
            trace: RewriteTrace::default(),
        }
    }

    fn record(&mut self, case: CaseLabel, input: &Formula, subgoals: Vec<Formula>) -> Result<(), ApproxError> {
        let input_measure = measure(input);
        for g in &subgoals {
            let m = measure(g);
            if m >= input_measure {
                return Err(ApproxError::MeasureNotDecreasing {
                    case,
                    input: input.clone(),
                    input_measure,
                    subgoal: g.clone(),
                    sub_measure: m,
                });
            }
        }
        self.trace.steps.push(TraceStep {
            case,
            input_measure,
            subgoals,
        });
        Ok(())
    }

    fn run(&mut self, a: &Formula) -> Result<Formula, ApproxError> {
        if let Some(done) = self.memo.get(a) {
            return Ok(done.clone());
        }
        let out = self.step(a)?;
        self.memo.insert(a.clone(), out.clone());
        Ok(out)
    }

    fn step(&mut self, a: &Formula) -> Result<Formula, ApproxError> {
        match a {
            Formula::Atom(_) | Formula::Bot | Formula::Top => {
                self.record(CaseLabel::Atomic, a, vec![])?;
                Ok(a.clone())
            }
            Formula::Box(inner) => match self.mode {
                Mode::Star => {
                    self.record(CaseLabel::Atomic, a, vec![])?;
                    Ok(a.clone())
                }
                Mode::Dagger => {
                    self.record(CaseLabel::Atomic, a, vec![(**inner).clone()])?;
                    Ok(Formula::boxed(self.run(inner)?))
                }
            },
            Formula::And(l, r) => {
                self.record(CaseLabel::Conj, a, vec![(**l).clone(), (**r).clone()])?;
                Ok(Formula::and(self.run(l)?, self.run(r)?))
            }
            Formula::Or(l, r) => {
                self.record(CaseLabel::Disj, a, vec![(**l).clone(), (**r).clone()])?;
                Ok(Formula::or(self.run(l)?, self.run(r)?))
            }
            Formula::Imp(b, c) => self.implication(a, b, c),
        }
    }

    fn implication(&mut self, a: &Formula, b: &Formula, c: &Formula) -> Result<Formula, ApproxError> {
        if let Some((c1, c2)) = split_outer(c, pick_and) {
            let a1 = Formula::imp(b.clone(), c1);
            let a2 = Formula::imp(b.clone(), c2);
            self.record(CaseLabel::SplitConsequent, a, vec![a1.clone(), a2.clone()])?;
            return Ok(Formula::and(self.run(&a1)?, self.run(&a2)?));
        }
        if let Some((b1, b2)) = split_outer(b, pick_or) {
            let a1 = Formula::imp(b1, c.clone());
            let a2 = Formula::imp(b2, c.clone());
            self.record(CaseLabel::SplitAntecedent, a, vec![a1.clone(), a2.clone()])?;
            return Ok(Formula::and(self.run(&a1)?, self.run(&a2)?));
        }

        // B = ⋀X with no outer disjunction, C = ⋁Y with no outer conjunction.
        let xs: BTreeSet<Formula> = conjuncts(b);
        debug_assert!(disjuncts(c).iter().all(|y| !matches!(y, Formula::And(..))));

        if let Some(p) = xs.iter().find(|x| x.is_atomic_or_boxed()).cloned() {
            let rest: Vec<Formula> = xs.iter().filter(|x| **x != p).cloned().collect();
            // With X = {p} the remainder is the empty conjunction; going
            // through ⊤ → C would not reduce the measure, so recurse on C.
            let tail = if rest.is_empty() {
                c.clone()
            } else {
                Formula::imp(big_and(rest), c.clone())
            };
            self.record(CaseLabel::AtomInAntecedent, a, vec![p.clone(), tail.clone()])?;
            return Ok(Formula::imp(self.run(&p)?, self.run(&tail)?));
        }
        if xs.contains(&Formula::Top) {
            let rest: Vec<Formula> = xs.iter().filter(|x| **x != Formula::Top).cloned().collect();
            let tail = if rest.is_empty() {
                c.clone()
            } else {
                Formula::imp(big_and(rest), c.clone())
            };
            self.record(CaseLabel::TopInAntecedent, a, vec![tail.clone()])?;
            return self.run(&tail);
        }
        if xs.contains(&Formula::Bot) {
            self.record(CaseLabel::BotInAntecedent, a, vec![])?;
            return Ok(Formula::Top);
        }

        // X consists of implications only.
        let mut downs = Vec::with_capacity(xs.len());
        let mut zs: Vec<Formula> = Vec::with_capacity(xs.len() + 1);
        for d in &xs {
            let Formula::Imp(e, f) = d else {
                unreachable!("antecedent conjunct {d} is not an implication")
            };
            let mut lowered: BTreeSet<Formula> = xs.iter().filter(|x| *x != d).cloned().collect();
            lowered.insert((**f).clone());
            downs.push(Formula::imp(big_and(lowered), c.clone()));
            zs.push((**e).clone());
        }
        zs.push(c.clone());
        let a0 = bracket_set(b, &zs).expect("Z contains C");
        let (case, last) = if measure(&a0) < measure(a) {
            (CaseLabel::BracketBranch, a0)
        } else {
            (
                CaseLabel::BracketPrimeBranch,
                bracket_prime_set(b, &zs).expect("Z contains C"),
            )
        };
        let mut subgoals = downs.clone();
        subgoals.push(last.clone());
        self.record(case, a, subgoals)?;
        let mut parts = Vec::with_capacity(downs.len() + 1);
        for d in &downs {
            parts.push(self.run(d)?);
        }
        parts.push(self.run(&last)?);
        Ok(big_and(parts))
    }
}

/// `A*` together with the trace of case applications.
pub fn nnil_star(a: &Formula) -> Result<(Formula, RewriteTrace), ApproxError> {
    let mut engine = Engine::new(Mode::Star);
    let out = engine.run(a)?;
    Ok((out, engine.trace))
}

/// `A*` computed on the non-modal skeleton of `A` and re-substituted.
pub fn nnil_star_via_abstraction(a: &Formula) -> Result<Formula, ApproxError> {
    let abs = boxed_abstraction(a);
    let (star, _) = nnil_star(&abs.skeleton)?;
    Ok(star.substitute_bindings(&abs.bindings))
}

struct PlusCache {
    memo: HashMap<Formula, Formula>,
    trace: RewriteTrace,
}

impl PlusCache {
    fn plus(&mut self, a: &Formula) -> Result<Formula, ApproxError> {
        if let Some(done) = self.memo.get(a) {
            return Ok(done.clone());
        }
        let abs = boxed_abstraction(a);
        let (star, trace) = nnil_star(&abs.skeleton)?;
        self.trace.extend(trace);
        let mut lifted = Vec::with_capacity(abs.bindings.len());
        for (p, boxed) in &abs.bindings {
            let Formula::Box(inner) = boxed else { unreachable!() };
            lifted.push((p.clone(), Formula::boxed(self.plus(inner)?)));
        }
        let out = star.substitute_bindings(&lifted);
        self.memo.insert(a.clone(), out.clone());
        Ok(out)
    }
}

/// `A⁺`, the TNNIL approximation.
pub fn tnnil_plus(a: &Formula) -> Result<Formula, ApproxError> {
    Ok(tnnil_plus_traced(a)?.0)
}

/// `A⁺` with the concatenated traces of every skeleton approximation.
pub fn tnnil_plus_traced(a: &Formula) -> Result<(Formula, RewriteTrace), ApproxError> {
    let mut cache = PlusCache {
        memo: HashMap::new(),
        trace: RewriteTrace::default(),
    };
    let out = cache.plus(a)?;
    Ok((out, cache.trace))
}

/// `A⁻`: the outer skeleton is kept and only boxed parts are approximated.
pub fn tnnil_minus(a: &Formula) -> Result<Formula, ApproxError> {
    let abs = boxed_abstraction(a);
    let mut cache = PlusCache {
        memo: HashMap::new(),
        trace: RewriteTrace::default(),
    };
    let mut lifted = Vec::with_capacity(abs.bindings.len());
    for (p, boxed) in &abs.bindings {
        let Formula::Box(inner) = boxed else { unreachable!() };
        lifted.push((p.clone(), Formula::boxed(cache.plus(inner)?)));
    }
    Ok(abs.skeleton.substitute_bindings(&lifted))
}

/// `A†`, the approximation that rewrites inside boxes as it meets them.
pub fn tnnil_dagger(a: &Formula) -> Result<Formula, ApproxError> {
    Ok(tnnil_dagger_traced(a)?.0)
}

pub fn tnnil_dagger_traced(a: &Formula) -> Result<(Formula, RewriteTrace), ApproxError> {
    let mut engine = Engine::new(Mode::Dagger);
    let out = engine.run(a)?;
    Ok((out, engine.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{is_nnil_box, is_tnnil, is_tnnil_box};
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn atoms_are_fixed() {
        let (out, trace) = nnil_star(&f("p")).unwrap();
        assert_eq!(out, f("p"));
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(tnnil_dagger(&f("p")).unwrap(), f("p"));
        assert_eq!(tnnil_minus(&f("p")).unwrap(), f("p"));
    }

    #[test]
    fn double_negation_collapses() {
        let (out, trace) = nnil_star(&f("~~p")).unwrap();
        // ⋀{(⊥ → ⊥)*} ∧ ([B]Z)* with [B]Z = p ∨ ⊥
        assert_eq!(out, f("true & (p | false)"));
        assert_eq!(trace.steps[0].case, CaseLabel::BracketBranch);
        assert!(trace.violations().is_empty());
    }

    #[test]
    fn split_picks_leftmost_outer_occurrence() {
        let (c1, c2) = split_outer(&f("(q & r) | (s & t)"), pick_and).unwrap();
        assert_eq!(c1, f("q | s & t"));
        assert_eq!(c2, f("r | s & t"));
        assert!(split_outer(&f("p -> q & r"), pick_and).is_none());
        assert!(split_outer(&f("#(q & r)"), pick_and).is_none());
    }

    #[test]
    fn minus_leaves_skeleton_untouched() {
        let out = tnnil_minus(&f("(q -> r) -> #~~p")).unwrap();
        assert_eq!(out, Formula::imp(f("q -> r"), Formula::boxed(f("true & (p | false)"))));
    }

    #[test]
    fn outputs_land_in_their_classes() {
        for s in ["((p -> q) -> r) -> s", "#((p -> q) -> p) -> #p", "~~(p | ~p)", "(#p -> q) -> #~~q"] {
            let a = f(s);
            let (star, trace) = nnil_star(&a).unwrap();
            assert!(is_nnil_box(&star), "{s}: {star}");
            assert!(trace.violations().is_empty());
            assert!(is_tnnil(&tnnil_plus(&a).unwrap()), "{s}");
            assert!(is_tnnil_box(&tnnil_minus(&a).unwrap()), "{s}");
            assert!(is_tnnil(&tnnil_dagger(&a).unwrap()), "{s}");
        }
    }

    #[test]
    fn trace_text_format() {
        let (_, trace) = nnil_star(&f("p -> q")).unwrap();
        assert_eq!(trace.to_text().lines().next().unwrap(), "4ci (0,1,1) 2");
    }
}
