//! Bounded Hilbert-style proof search.
//!
//! Schemata are instantiated over a pool made of the goal's subformulas
//! closed under box wrapping up to the budget depth. Theorems are then
//! saturated in rounds: a candidate is accepted when `IPC_□` derives it from
//! the theorems found so far, which becomes one `ipc` line followed by a
//! chain of `MP` steps. Accepted formulas are boxed by necessitation or
//! `CP`, and boxed implications are distributed with `K`.

use super::ipc::IpcProver;
use super::{
    calculus, Budget, BoundsReport, Calculus, Certificate, Countermodel, Justification, Line, Outcome, Stats, Verdict,
};
use super::prove_modal_cancellable;
use crate::formula::{curry, Formula};
use crate::logic::LogicId;
use crate::models::{find_countermodel_cancellable, FrameClass};
use crate::pres::{pres_axioms_for_pool, PresBudget};
use crate::schema::{instantiate, AxiomSchema};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

fn build_pool(goal: &Formula, depth: usize) -> BTreeSet<Formula> {
    let mut pool = goal.subformulas();
    for _ in 1..depth.max(1) {
        let wrapped: Vec<Formula> = pool.iter().map(|f| Formula::boxed(f.clone())).collect();
        pool.extend(wrapped);
    }
    pool
}

fn axiom_instances(calc: &Calculus, insides: &BTreeSet<Formula>, atoms: &BTreeSet<String>) -> Vec<(Formula, Justification)> {
    let mut out = Vec::new();
    let mut push = |schema: AxiomSchema, args: Vec<Formula>| {
        if let Ok(f) = instantiate(schema, &args) {
            out.push((f, Justification::Axiom { schema, args }));
        }
    };
    for &schema in &calc.schemata {
        match schema {
            AxiomSchema::K | AxiomSchema::TP => {
                for x in insides {
                    if let Formula::Imp(a, b) = x {
                        push(schema, vec![(**a).clone(), (**b).clone()]);
                    }
                }
            }
            AxiomSchema::Le => {
                for x in insides {
                    if let Formula::Or(a, b) = x {
                        push(schema, vec![(**a).clone(), (**b).clone()]);
                    }
                }
            }
            AxiomSchema::CPa => {
                for p in atoms {
                    push(schema, vec![Formula::atom(p.clone())]);
                }
            }
            AxiomSchema::Four | AxiomSchema::L | AxiomSchema::CP | AxiomSchema::LePlus => {
                for x in insides {
                    push(schema, vec![x.clone()]);
                }
            }
        }
    }
    out
}

enum Source {
    Pending(Justification),
    Line(usize),
}

struct Saturator {
    logic: LogicId,
    calc: Calculus,
    budget: Budget,
    insides: BTreeSet<Formula>,
    known: HashMap<Formula, Source>,
    theorems: Vec<Formula>,
    lifted: HashSet<Formula>,
    lines: Vec<Line>,
    prover: IpcProver,
    stop: Arc<AtomicBool>,
}

struct OutOfBudget;

impl Saturator {
    fn new(logic: LogicId, goal: &Formula, budget: Budget, stop: Arc<AtomicBool>) -> Saturator {
        let calc = calculus(logic);
        let pool = build_pool(goal, budget.depth);
        let insides: BTreeSet<Formula> = pool
            .iter()
            .filter_map(|f| match f {
                Formula::Box(x) => Some((**x).clone()),
                _ => None,
            })
            .collect();
        let mut known = HashMap::new();
        let mut theorems = Vec::new();
        let mut add = |f: Formula, j: Justification| {
            if !known.contains_key(&f) {
                theorems.push(f.clone());
                known.insert(f, Source::Pending(j));
            }
        };
        for (f, j) in axiom_instances(&calc, &insides, &goal.atoms()) {
            add(f, j);
        }
        if let Some(variant) = calc.pres {
            let pres_budget = PresBudget {
                max_depth: budget.pres_depth,
                ..PresBudget::default()
            };
            for tree in pres_axioms_for_pool(variant, &insides, pres_budget) {
                let (a, b) = tree.conclusion();
                let f = Formula::imp(Formula::boxed(a.clone()), Formula::boxed(b.clone()));
                add(f, Justification::Pres { derivation: Box::new(tree) });
            }
        }
        Saturator {
            logic,
            calc,
            budget,
            insides,
            known,
            theorems,
            lifted: HashSet::new(),
            lines: Vec::new(),
            prover: IpcProver::cancellable(stop.clone()),
            stop,
        }
    }

    fn emit(&mut self, formula: Formula, by: Justification) -> Result<usize, OutOfBudget> {
        if self.lines.len() >= self.budget.max_lines {
            return Err(OutOfBudget);
        }
        self.lines.push(Line { formula: formula.clone(), by });
        let idx = self.lines.len();
        self.known.insert(formula, Source::Line(idx));
        Ok(idx)
    }

    /// Line number of a known theorem, emitting pending axioms on demand.
    fn line_of(&mut self, f: &Formula) -> Result<usize, OutOfBudget> {
        match self.known.get(f) {
            Some(Source::Line(i)) => Ok(*i),
            Some(Source::Pending(j)) => {
                let j = j.clone();
                self.emit(f.clone(), j)
            }
            None => unreachable!("{f} is not a known theorem"),
        }
    }

    fn add_theorem(&mut self, f: Formula, by: Justification) -> Result<usize, OutOfBudget> {
        let i = self.emit(f.clone(), by)?;
        self.theorems.push(f);
        Ok(i)
    }

    /// Try to derive `c` from the current theorems with one IPC step.
    fn acquire(&mut self, c: &Formula) -> Result<bool, OutOfBudget> {
        if self.known.contains_key(c) {
            return Ok(true);
        }
        let mut hyps: Vec<Formula> = self.theorems.clone();
        let ctx: BTreeSet<Formula> = hyps.iter().cloned().collect();
        if !self.prover.proves(&ctx, c) {
            return Ok(false);
        }
        // Drop hypotheses that are not needed.
        let mut k = hyps.len();
        while k > 0 {
            k -= 1;
            let h = hyps.remove(k);
            let ctx: BTreeSet<Formula> = hyps.iter().cloned().collect();
            if !self.prover.proves(&ctx, c) {
                hyps.insert(k, h);
            }
        }
        let mut refs = Vec::with_capacity(hyps.len());
        for h in &hyps {
            refs.push(self.line_of(h)?);
        }
        let mut current = curry(hyps.iter().cloned(), c.clone());
        if hyps.is_empty() {
            self.add_theorem(current, Justification::Ipc)?;
            return Ok(true);
        }
        let mut major = self.emit(current.clone(), Justification::Ipc)?;
        for minor in refs {
            let Formula::Imp(_, rest) = &current else { unreachable!() };
            current = (**rest).clone();
            major = if hyps.is_empty() {
                unreachable!()
            } else if current == *c {
                self.add_theorem(current.clone(), Justification::Mp { minor, major })?
            } else {
                self.emit(current.clone(), Justification::Mp { minor, major })?
            };
        }
        Ok(true)
    }

    /// `□c` by necessitation or `CP`, then `□X → □Y` by `K` if `c = X → Y`.
    fn lift(&mut self, c: &Formula) -> Result<(), OutOfBudget> {
        if !self.lifted.insert(c.clone()) {
            return Ok(());
        }
        let boxed = Formula::boxed(c.clone());
        if !self.known.contains_key(&boxed) {
            let premise = self.line_of(c)?;
            if self.calc.necessitation {
                self.add_theorem(boxed.clone(), Justification::Nec { premise })?;
            } else if self.calc.schemata.contains(&AxiomSchema::CP) {
                let cp = Formula::imp(c.clone(), boxed.clone());
                let major = match self.known.get(&cp) {
                    Some(_) => self.line_of(&cp)?,
                    None => self.emit(
                        cp,
                        Justification::Axiom {
                            schema: AxiomSchema::CP,
                            args: vec![c.clone()],
                        },
                    )?,
                };
                self.add_theorem(boxed.clone(), Justification::Mp { minor: premise, major })?;
            } else {
                return Ok(());
            }
        }
        if let Formula::Imp(x, y) = c {
            if self.calc.schemata.contains(&AxiomSchema::K) {
                let (x, y) = ((**x).clone(), (**y).clone());
                let dist = Formula::imp(Formula::boxed(x.clone()), Formula::boxed(y.clone()));
                if !self.known.contains_key(&dist) {
                    let k = instantiate(AxiomSchema::K, &[x.clone(), y.clone()]).expect("arity 2");
                    let major = match self.known.get(&k) {
                        Some(_) => self.line_of(&k)?,
                        None => self.emit(k, Justification::Axiom { schema: AxiomSchema::K, args: vec![x, y] })?,
                    };
                    let minor = self.line_of(&boxed)?;
                    self.add_theorem(dist, Justification::Mp { minor, major })?;
                }
            }
        }
        Ok(())
    }

    fn candidates(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self.insides.iter().cloned().collect();
        for x in &self.insides {
            for y in &self.insides {
                if x != y {
                    out.push(Formula::imp(x.clone(), y.clone()));
                }
            }
        }
        out
    }

    fn run(&mut self, goal: &Formula) -> Result<bool, OutOfBudget> {
        let boxing = self.calc.necessitation || self.calc.schemata.contains(&AxiomSchema::CP);
        let candidates = if boxing { self.candidates() } else { Vec::new() };
        loop {
            if self.acquire(goal)? {
                self.line_of(goal)?;
                return Ok(true);
            }
            let mut progress = false;
            for c in &candidates {
                if self.stop.load(Ordering::Relaxed) {
                    return Ok(false);
                }
                if self.lifted.contains(c) {
                    continue;
                }
                if self.acquire(c)? {
                    self.lift(c)?;
                    progress = true;
                }
            }
            if !progress {
                return Ok(false);
            }
        }
    }

    /// Keep only the lines the goal depends on, renumbered.
    fn certificate(&self, goal: &Formula) -> Certificate {
        let Some(Source::Line(last)) = self.known.get(goal) else {
            unreachable!("goal has a line")
        };
        let mut needed = vec![false; self.lines.len() + 1];
        let mut stack = vec![*last];
        while let Some(i) = stack.pop() {
            if needed[i] {
                continue;
            }
            needed[i] = true;
            match self.lines[i - 1].by {
                Justification::Mp { minor, major } => stack.extend([minor, major]),
                Justification::Nec { premise } => stack.push(premise),
                _ => {}
            }
        }
        let mut renumber = vec![0; self.lines.len() + 1];
        let mut lines = Vec::new();
        for i in 1..=self.lines.len() {
            if !needed[i] || i > *last {
                continue;
            }
            let mut line = self.lines[i - 1].clone();
            line.by = match line.by {
                Justification::Mp { minor, major } => Justification::Mp {
                    minor: renumber[minor],
                    major: renumber[major],
                },
                Justification::Nec { premise } => Justification::Nec {
                    premise: renumber[premise],
                },
                other => other,
            };
            lines.push(line);
            renumber[i] = lines.len();
        }
        Certificate { lines }
    }
}

/// Sequents the modal prover may explore before saturation takes over.
const MODAL_NODES: u64 = 200_000;

fn prove_only(logic: LogicId, goal: &Formula, budget: Budget, stop: Arc<AtomicBool>) -> (Option<Certificate>, Stats, usize) {
    let mut sat = Saturator::new(logic, goal, budget, stop.clone());
    if !sat.known.contains_key(goal) {
        if let Some(cert) = prove_modal_cancellable(logic, goal, MODAL_NODES, &stop) {
            if cert.lines.len() <= budget.max_lines {
                let lines = cert.lines.len();
                return (Some(cert), Stats::default(), lines);
            }
        }
    }
    let found = matches!(sat.run(goal), Ok(true));
    let stats = Stats {
        nodes: sat.prover.nodes(),
        frames: 0,
    };
    let lines = sat.lines.len();
    debug_assert_eq!(sat.logic, logic);
    (found.then(|| sat.certificate(goal)), stats, lines)
}

/// Hilbert search alone, without countermodel search.
pub fn prove_certificate(logic: LogicId, goal: &Formula, budget: Budget) -> Option<Certificate> {
    prove_only(logic, goal, budget, Arc::new(AtomicBool::new(false))).0
}

/// Budgeted proof search in `logic`, racing a countermodel search when the
/// logic has declared frame conditions.
pub fn prove_bounded(logic: LogicId, goal: &Formula, budget: Budget) -> Outcome {
    if matches!(logic, LogicId::Ipc | LogicId::IpcBox) {
        return super::decide_ipc_box(goal);
    }
    let stop = Arc::new(AtomicBool::new(false));
    let class = FrameClass::of(logic);
    // A scoped thread rather than `rayon::join`, so the two searches
    // interleave even on a single core.
    let on_worker = rayon::current_thread_index().is_some();
    let ((cert, mut stats, lines), model) = std::thread::scope(|scope| {
        let refuter = scope.spawn(|| {
            class.map(|class| {
                let search = || find_countermodel_cancellable(class, goal, budget.max_worlds, &stop);
                // From inside a rayon pool the current worker is blocked in
                // this scope, so the search gets a pool of its own.
                let out = if on_worker {
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(1)
                        .build()
                        .map(|pool| pool.install(search))
                        .unwrap_or_else(|_| search())
                } else {
                    search()
                };
                if out.0.is_some() {
                    stop.store(true, Ordering::Relaxed);
                }
                out
            })
        });
        let out = prove_only(logic, goal, budget, stop.clone());
        if out.0.is_some() {
            stop.store(true, Ordering::Relaxed);
        }
        (out, refuter.join().expect("countermodel search panicked"))
    });
    let mut worlds = 0;
    let mut refuted = None;
    if let Some((m, search)) = model {
        stats.frames = search.frames;
        worlds = search.worlds_searched;
        refuted = m;
    }
    let verdict = match (cert, refuted) {
        (Some(certificate), None) => Verdict::Provable { certificate },
        (None, Some(model)) => Verdict::Refuted {
            countermodel: Countermodel::plain(model),
        },
        (Some(_), Some(model)) => panic!("{goal} is both derived and refuted in {logic} by\n{model}"),
        (None, None) => Verdict::Unknown {
            report: BoundsReport {
                reason: if lines >= budget.max_lines {
                    "proof line budget exhausted".into()
                } else {
                    "saturation reached a fixpoint without the goal".into()
                },
                lines,
                worlds,
            },
        },
    };
    Outcome { verdict, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::check_certificate;
    use crate::parse::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn provable(logic: LogicId, s: &str) -> Certificate {
        let goal = f(s);
        match prove_bounded(logic, &goal, Budget::default()).verdict {
            Verdict::Provable { certificate } => {
                check_certificate(&certificate, logic, &goal).unwrap();
                certificate
            }
            other => panic!("{s} in {logic}: {}", other.label()),
        }
    }

    #[test]
    fn axiom_instance_is_one_line() {
        let cert = provable(LogicId::IGLC, "#(#p -> p) -> #p");
        assert_eq!(cert.lines.len(), 1);
    }

    #[test]
    fn leivant_instance_from_cp_and_k() {
        provable(LogicId::IGLC, "#(p | q) -> #(#p | q)");
    }

    #[test]
    fn necessitation_and_k() {
        provable(LogicId::IK4, "#(p & q) -> #p");
        provable(LogicId::IGL, "#p -> ###p");
    }

    #[test]
    fn remark_non_theorem_is_refuted() {
        let goal = f("~~p -> (#~p -> p)");
        let out = prove_bounded(LogicId::IGLC, &goal, Budget::default());
        let Verdict::Refuted { countermodel } = out.verdict else { panic!("{}", out.verdict.label()) };
        assert!(countermodel.refutes(LogicId::IGLC, &goal));
    }

    #[test]
    fn undeclared_logics_never_refute() {
        let out = prove_bounded(LogicId::H, &Formula::Bot, Budget::default());
        assert!(matches!(out.verdict, Verdict::Unknown { .. }));
    }

    #[test]
    fn pool_wrapping() {
        let pool = build_pool(&f("p"), 3);
        assert!(pool.contains(&f("##p")));
        assert_eq!(build_pool(&f("p"), 1).len(), 1);
    }
}
