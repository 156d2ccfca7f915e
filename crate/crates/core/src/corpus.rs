//! Theorem and non-theorem corpus, and random formulas for property suites.
//!
//! A corpus file is UTF-8 text with one entry per line and four
//! tab-separated columns:
//!
//! ```text
//! logic <TAB> formula <TAB> expectation <TAB> source
//! ```
//!
//! `expectation` is `provable`, `non-provable` or `pres-derivable`. For
//! `pres-derivable` the formula column holds a pair `A >> B` and the logic
//! selects the preservativity family. Blank lines and lines starting with
//! `#` are skipped.

use crate::calculi::{check_certificate, decide, Budget, Verdict};
use crate::formula::Formula;
use crate::logic::LogicId;
use crate::parse::parse;
use crate::pres::{derive_pres, verify_derivation, PresBudget, PresVariant};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::time::Instant;
use thiserror::Error;

/// The corpus shipped with the crate.
pub const SHIPPED: &str = include_str!("../corpus/shipped.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Provable,
    NonProvable,
    PresDerivable,
}

impl Expectation {
    pub fn name(self) -> &'static str {
        match self {
            Expectation::Provable => "provable",
            Expectation::NonProvable => "non-provable",
            Expectation::PresDerivable => "pres-derivable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Query {
    Formula(Formula),
    Pair(Formula, Formula),
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Formula(a) => write!(f, "{a}"),
            Query::Pair(a, b) => write!(f, "{a} >> {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    /// 1-based line in the source file.
    pub line: usize,
    pub logic: LogicId,
    pub query: Query,
    pub expectation: Expectation,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

fn entry(line: usize, text: &str) -> Result<CorpusEntry, CorpusError> {
    let err = |msg: String| CorpusError::Syntax { line, msg };
    let cols: Vec<&str> = text.split('\t').map(str::trim).collect();
    let [logic, formula, expectation, source] = cols[..] else {
        return Err(err(format!("expected 4 tab-separated columns, found {}", cols.len())));
    };
    let logic: LogicId = logic.parse().map_err(|e: crate::logic::UnknownLogic| err(e.to_string()))?;
    let expectation = match expectation {
        "provable" => Expectation::Provable,
        "non-provable" => Expectation::NonProvable,
        "pres-derivable" => Expectation::PresDerivable,
        other => return Err(err(format!("unknown expectation `{other}`"))),
    };
    let formula_of = |s: &str| parse(s).map_err(|e| err(format!("{e} in `{s}`")));
    let query = match (expectation, formula.split_once(">>")) {
        (Expectation::PresDerivable, Some((a, b))) => Query::Pair(formula_of(a)?, formula_of(b)?),
        (Expectation::PresDerivable, None) => return Err(err("pres-derivable needs a pair `A >> B`".into())),
        (_, Some(_)) => return Err(err("only pres-derivable entries take a pair".into())),
        (_, None) => Query::Formula(formula_of(formula)?),
    };
    if expectation == Expectation::PresDerivable && pres_variant(logic).is_none() {
        return Err(err(format!("logic {logic} has no preservativity relation")));
    }
    if source.is_empty() {
        return Err(err("empty source tag".into()));
    }
    Ok(CorpusEntry {
        line,
        logic,
        query,
        expectation,
        source: source.to_string(),
    })
}

fn pres_variant(logic: LogicId) -> Option<PresVariant> {
    crate::calculi::calculus(logic).pres
}

/// Parse corpus text.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| entry(i + 1, l))
        .collect()
}

pub fn load(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CorpusError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_corpus(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryResult {
    pub line: usize,
    pub logic: LogicId,
    pub query: String,
    pub expectation: Expectation,
    pub source: String,
    pub status: Status,
    pub detail: String,
    pub time_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub results: Vec<EntryResult>,
    pub passed: usize,
    pub failed: usize,
    pub unknown: usize,
}

impl Report {
    pub fn any_failed(&self) -> bool {
        self.failed > 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let tag = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Unknown => "unknown",
            };
            out += &format!(
                "{tag:<7} line {:>3}  {:<12} {:<14} {}  ({}; {} ms)\n",
                r.line,
                r.logic.name(),
                r.expectation.name(),
                r.query,
                r.detail,
                r.time_ms
            );
        }
        out += &format!("{} passed, {} failed, {} unknown\n", self.passed, self.failed, self.unknown);
        out
    }
}

fn evaluate(e: &CorpusEntry, budget: Budget) -> (Status, String) {
    match (&e.query, e.expectation) {
        (Query::Pair(a, b), _) => {
            let variant = pres_variant(e.logic).expect("checked on load");
            match derive_pres(a, b, variant, PresBudget::default()) {
                Some(t) => match verify_derivation(&t) {
                    Ok(()) => (Status::Pass, format!("derivation of size {}", t.root.size())),
                    Err(err) => (Status::Fail, format!("derivation rejected: {err}")),
                },
                None => (Status::Unknown, "no derivation within budget".into()),
            }
        }
        (Query::Formula(a), expected) => {
            let r = decide(e.logic, a, budget);
            let checked = match &r.outcome.verdict {
                Verdict::Provable { certificate } => {
                    let logic = if e.logic == LogicId::IHStarSigma { LogicId::IGLC } else { e.logic };
                    check_certificate(certificate, logic, &r.reduced).map_err(|x| x.to_string())
                }
                Verdict::Refuted { countermodel } => {
                    let logic = if e.logic == LogicId::IHStarSigma { LogicId::IGLC } else { e.logic };
                    if countermodel.refutes(logic, &r.reduced) {
                        Ok(())
                    } else {
                        Err("countermodel does not refute the goal".into())
                    }
                }
                Verdict::Unknown { .. } => Ok(()),
            };
            if let Err(msg) = checked {
                return (Status::Fail, format!("invalid witness: {msg}"));
            }
            let label = r.outcome.verdict.label();
            let status = match (&r.outcome.verdict, expected) {
                (Verdict::Unknown { .. }, _) => Status::Unknown,
                (Verdict::Provable { .. }, Expectation::Provable) | (Verdict::Refuted { .. }, Expectation::NonProvable) => {
                    Status::Pass
                }
                _ => Status::Fail,
            };
            (status, label.to_string())
        }
    }
}

/// Run every entry. Entries are evaluated in parallel on the current rayon
/// pool; results keep the input order.
pub fn run(entries: &[CorpusEntry], budget: Budget) -> Report {
    let results: Vec<EntryResult> = entries
        .par_iter()
        .map(|e| {
            let start = Instant::now();
            let (status, detail) = evaluate(e, budget);
            EntryResult {
                line: e.line,
                logic: e.logic,
                query: e.query.to_string(),
                expectation: e.expectation,
                source: e.source.clone(),
                status,
                detail,
                time_ms: start.elapsed().as_millis(),
            }
        })
        .collect();
    let count = |s| results.iter().filter(|r| r.status == s).count();
    Report {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        unknown: count(Status::Unknown),
        results,
    }
}

/// Seeded random formulas.
///
/// A size is drawn uniformly from `min_size..=max_size` (among sizes that
/// admit some tree), then a tree shape of exactly that size is drawn with
/// probability proportional to `box_prob^u · (1 - box_prob)^b`, `u` and `b`
/// counting unary and binary nodes. Binary nodes are `∧`, `∨`, `→` with
/// equal odds; leaves are `⊥` with probability `bot_prob`, otherwise a
/// uniformly chosen atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomFormulas {
    pub seed: u64,
    pub min_size: usize,
    pub max_size: usize,
    pub atoms: usize,
    pub box_prob: f64,
    pub bot_prob: f64,
}

impl Default for RandomFormulas {
    fn default() -> Self {
        RandomFormulas {
            seed: 0,
            min_size: 1,
            max_size: 12,
            atoms: 3,
            box_prob: 0.2,
            bot_prob: 0.1,
        }
    }
}

const ATOM_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

impl RandomFormulas {
    fn weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.max_size + 1];
        if self.max_size >= 1 {
            w[1] = 1.0;
        }
        for n in 2..=self.max_size {
            let binary: f64 = (1..n - 1).map(|k| w[k] * w[n - 1 - k]).sum();
            w[n] = self.box_prob * w[n - 1] + (1.0 - self.box_prob) * binary;
        }
        w
    }

    fn leaf(&self, rng: &mut ChaCha8Rng) -> Formula {
        if rng.gen_bool(self.bot_prob) {
            Formula::Bot
        } else {
            Formula::atom(ATOM_NAMES[rng.gen_range(0..self.atoms.clamp(1, ATOM_NAMES.len()))])
        }
    }

    fn shape(&self, n: usize, w: &[f64], rng: &mut ChaCha8Rng) -> Formula {
        if n == 1 {
            return self.leaf(rng);
        }
        let mut x = rng.gen::<f64>() * w[n];
        let unary = self.box_prob * w[n - 1];
        if x < unary {
            return Formula::boxed(self.shape(n - 1, w, rng));
        }
        x -= unary;
        let mut k = 1;
        while k < n - 2 {
            let part = (1.0 - self.box_prob) * w[k] * w[n - 1 - k];
            if x < part {
                break;
            }
            x -= part;
            k += 1;
        }
        let (l, r) = (self.shape(k, w, rng), self.shape(n - 1 - k, w, rng));
        match rng.gen_range(0..3) {
            0 => Formula::and(l, r),
            1 => Formula::or(l, r),
            _ => Formula::imp(l, r),
        }
    }

    /// The first `count` formulas of the stream for this seed.
    pub fn generate(&self, count: usize) -> Vec<Formula> {
        let w = self.weights();
        let sizes: Vec<usize> = (self.min_size.max(1)..=self.max_size).filter(|&n| w[n] > 0.0).collect();
        assert!(!sizes.is_empty(), "no formula has a size in {}..={}", self.min_size, self.max_size);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..count)
            .map(|_| {
                let n = sizes[rng.gen_range(0..sizes.len())];
                self.shape(n, &w, &mut rng)
            })
            .collect()
    }
}
