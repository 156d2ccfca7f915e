use clap::{Args, Parser, Subcommand, ValueEnum};
use imodal::approx::{nnil_star, tnnil_dagger_traced, tnnil_minus, tnnil_plus_traced, RewriteTrace};
use imodal::calculi::{check_certificate, decide, Budget, Countermodel, Verdict};
use imodal::classes::classify;
use imodal::corpus::{self, RandomFormulas};
use imodal::models::{find_countermodel_with, FrameClass};
use imodal::pres::{check_box_closure, derive_pres, verify_derivation, PresBudget};
use imodal::translate::{
    box_translate, brace, brace_set, bracket, bracket_prime, bracket_prime_set, bracket_set, leivant_translate,
};
use imodal::{measure, parse, tnnil_plus, Formula, LogicId, PresVariant};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_PROVABLE: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Workbench for intuitionistic modal provability logics.
///
/// Formulas use `#` for the box, `~` for negation, `&`, `|`, `->`, `true`
/// and `false`.
#[derive(Parser, Debug)]
#[command(name = "imodal", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for random generation; echoed in every report.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    /// Box-nesting added to the instantiation pool.
    #[arg(long, default_value_t = Budget::default().depth, global = true)]
    depth: usize,
    /// Proof lines before giving up.
    #[arg(long, default_value_t = Budget::default().max_lines, global = true)]
    max_lines: usize,
    /// Largest countermodel searched.
    #[arg(long, default_value_t = Budget::default().max_worlds, global = true)]
    max_worlds: usize,
    /// Depth of preservativity axioms fed to proof search.
    #[arg(long, default_value_t = Budget::default().pres_depth, global = true)]
    pres_depth: usize,
}

impl From<BudgetArgs> for Budget {
    fn from(b: BudgetArgs) -> Budget {
        Budget {
            depth: b.depth,
            max_lines: b.max_lines,
            max_worlds: b.max_worlds,
            pres_depth: b.pres_depth,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TranslateKind {
    Box,
    Leivant,
    Bracket,
    BracketPrime,
    Brace,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ApproxKind {
    Star,
    Plus,
    Minus,
    Dagger,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and report its classes and measure.
    Parse { formula: String },
    /// Apply a syntactic translation. `bracket`, `bracket-prime` and `brace`
    /// take `A` followed by one or more formulas of the set.
    Translate {
        #[arg(long, value_enum)]
        kind: TranslateKind,
        formula: String,
        rest: Vec<String>,
    },
    /// Compute an approximant.
    Approx {
        #[arg(long, value_enum)]
        kind: ApproxKind,
        #[arg(long)]
        trace: bool,
        formula: String,
    },
    /// Decide or search for a proof. Exit 0 provable, 1 refuted, 2 unknown.
    Decide {
        #[arg(long)]
        logic: LogicId,
        formula: String,
    },
    /// Search for a refuting model up to `--max-worlds`.
    Countermodel {
        #[arg(long)]
        logic: LogicId,
        formula: String,
    },
    /// Search for a derivation of `A ▸ B`.
    Preserves {
        #[arg(long)]
        variant: PresVariant,
        lhs: String,
        rhs: String,
        /// Nesting of intermediate steps.
        #[arg(long, default_value_t = PresBudget::default().max_depth)]
        search_depth: usize,
        /// Largest combined size of an intermediate pair.
        #[arg(long, default_value_t = PresBudget::default().max_size)]
        max_size: usize,
        /// Also rebuild the derivation for the box translations.
        #[arg(long)]
        closure: bool,
    },
    /// Run or generate corpora.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// Run a corpus file. Exits 1 when any entry fails.
    Run { file: String },
    /// Print seeded random formulas, one per line.
    Generate {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = RandomFormulas::default().max_size)]
        max_size: usize,
        #[arg(long, default_value_t = RandomFormulas::default().atoms)]
        atoms: usize,
        #[arg(long, default_value_t = RandomFormulas::default().box_prob)]
        box_prob: f64,
    },
}

struct Report {
    exit: u8,
    text: String,
    json: Value,
}

struct UsageError(String);

fn formula(s: &str) -> Result<Formula, UsageError> {
    parse(s).map_err(|e| UsageError(format!("cannot parse `{s}`: {e}")))
}

fn stats_json(time_ms: u128, nodes: u64, frames: u64) -> Value {
    json!({ "time_ms": time_ms, "nodes": nodes, "frames": frames })
}

fn countermodel_json(c: &Countermodel) -> (Value, Option<Value>) {
    let bindings = (!c.bindings.is_empty()).then(|| {
        c.bindings
            .iter()
            .map(|(p, b)| (p.clone(), Value::String(b.to_string())))
            .collect::<serde_json::Map<_, _>>()
            .into()
    });
    (serde_json::to_value(&c.model).expect("models serialize"), bindings)
}

fn trace_value(t: &RewriteTrace) -> Value {
    serde_json::to_value(t).expect("traces serialize")
}

fn run_parse(src: &str) -> Result<Report, UsageError> {
    let a = formula(src)?;
    let classes: Vec<String> = classify(&a).iter().map(|c| c.to_string()).collect();
    let m = measure(&a);
    let text = format!(
        "{a}\nsize: {}\nmeasure: {m}\nclasses: {}\n",
        a.size(),
        if classes.is_empty() { "-".to_string() } else { classes.join(", ") }
    );
    Ok(Report {
        exit: 0,
        text,
        json: json!({
            "command": "parse",
            "query": src,
            "result": a.to_string(),
            "size": a.size(),
            "measure": [m.d, m.i, m.c],
            "classes": classes,
        }),
    })
}

fn run_translate(kind: TranslateKind, src: &str, rest: &[String]) -> Result<Report, UsageError> {
    let a = formula(src)?;
    let set = rest.iter().map(|s| formula(s)).collect::<Result<Vec<_>, _>>()?;
    let needs_set = !matches!(kind, TranslateKind::Box | TranslateKind::Leivant);
    if needs_set == set.is_empty() {
        return Err(UsageError(if needs_set {
            "this translation needs at least one formula after A".into()
        } else {
            "this translation takes a single formula".into()
        }));
    }
    let err = |e: imodal::translate::TranslateError| UsageError(e.to_string());
    let out = match (kind, set.as_slice()) {
        (TranslateKind::Box, _) => box_translate(&a),
        (TranslateKind::Leivant, _) => leivant_translate(&a),
        (TranslateKind::Bracket, [b]) => bracket(&a, b),
        (TranslateKind::Bracket, zs) => bracket_set(&a, zs).map_err(err)?,
        (TranslateKind::BracketPrime, [b]) => bracket_prime(&a, b),
        (TranslateKind::BracketPrime, zs) => bracket_prime_set(&a, zs).map_err(err)?,
        (TranslateKind::Brace, [b]) => brace(&a, b),
        (TranslateKind::Brace, gs) => brace_set(&a, gs).map_err(err)?,
    };
    Ok(Report {
        exit: 0,
        text: format!("{out}\n"),
        json: json!({
            "command": "translate",
            "query": std::iter::once(src.to_string()).chain(rest.iter().cloned()).collect::<Vec<_>>().join(" ; "),
            "kind": kind.to_possible_value().expect("no skipped variants").get_name(),
            "result": out.to_string(),
        }),
    })
}

fn run_approx(kind: ApproxKind, trace: bool, src: &str) -> Result<Report, UsageError> {
    let a = formula(src)?;
    let result = match kind {
        ApproxKind::Star => nnil_star(&a).map(|(f, t)| (f, Some(t))),
        ApproxKind::Plus => tnnil_plus_traced(&a).map(|(f, t)| (f, Some(t))),
        ApproxKind::Dagger => tnnil_dagger_traced(&a).map(|(f, t)| (f, Some(t))),
        ApproxKind::Minus => {
            if trace {
                return Err(UsageError("--trace is not available for the minus approximant".into()));
            }
            tnnil_minus(&a).map(|f| (f, None))
        }
    };
    let (out, t) = result.map_err(|e| UsageError(format!("approximation failed: {e}")))?;
    let mut text = format!("{out}\n");
    let mut js = json!({
        "command": "approx",
        "query": src,
        "kind": kind.to_possible_value().expect("no skipped variants").get_name(),
        "result": out.to_string(),
    });
    if let (true, Some(t)) = (trace, &t) {
        text += &t.to_text();
        js["trace"] = trace_value(t);
    }
    Ok(Report { exit: 0, text, json: js })
}

fn verdict_exit(v: &Verdict) -> u8 {
    match v {
        Verdict::Provable { .. } => EXIT_PROVABLE,
        Verdict::Refuted { .. } => EXIT_REFUTED,
        Verdict::Unknown { .. } => EXIT_UNKNOWN,
    }
}

fn certificate_logic(logic: LogicId) -> LogicId {
    if logic == LogicId::IHStarSigma {
        LogicId::IGLC
    } else {
        logic
    }
}

fn run_decide(logic: LogicId, src: &str, budget: Budget) -> Result<Report, UsageError> {
    let a = formula(src)?;
    let start = Instant::now();
    let r = decide(logic, &a, budget);
    let time_ms = start.elapsed().as_millis();
    let v = &r.outcome.verdict;
    let mut text = format!("verdict: {}\nlogic: {logic}\n", v.label());
    let mut js = json!({
        "command": "decide",
        "query": src,
        "logic": logic.name(),
        "verdict": v.label(),
        "stats": stats_json(time_ms, r.outcome.stats.nodes, r.outcome.stats.frames),
    });
    if r.reduced != a {
        text += &format!("reduced: {}\n", r.reduced);
        js["reduced"] = r.reduced.to_string().into();
    }
    match v {
        Verdict::Provable { certificate } => {
            debug_assert!(check_certificate(certificate, certificate_logic(logic), &r.reduced).is_ok());
            text += &certificate.to_string();
            js["certificate"] = serde_json::to_value(certificate).expect("certificates serialize");
        }
        Verdict::Refuted { countermodel } => {
            text += &countermodel.model.to_string();
            for (p, b) in &countermodel.bindings {
                text += &format!("{p} := {b}\n");
            }
            let (model, bindings) = countermodel_json(countermodel);
            js["model"] = model;
            if let Some(b) = bindings {
                js["bindings"] = b;
            }
        }
        Verdict::Unknown { report } => {
            text += &format!("reason: {} (lines {}, worlds {})\n", report.reason, report.lines, report.worlds);
            js["reason"] = report.reason.clone().into();
        }
    }
    text += &format!(
        "time: {time_ms} ms, nodes: {}, frames: {}\n",
        r.outcome.stats.nodes, r.outcome.stats.frames
    );
    Ok(Report {
        exit: verdict_exit(v),
        text,
        json: js,
    })
}

fn run_countermodel(logic: LogicId, src: &str, max_worlds: usize) -> Result<Report, UsageError> {
    let a = formula(src)?;
    let (class, goal) = match (FrameClass::of(logic), logic) {
        (Some(c), _) => (c, a.clone()),
        (None, LogicId::IHStarSigma) => {
            let reduced = tnnil_plus(&box_translate(&a)).map_err(|e| UsageError(e.to_string()))?;
            (FrameClass::Glc, reduced)
        }
        (None, _) => return Err(UsageError(format!("logic {logic} has no declared frame conditions"))),
    };
    let start = Instant::now();
    let (found, stats) = find_countermodel_with(class, &goal, max_worlds, true);
    let time_ms = start.elapsed().as_millis();
    let verdict = if found.is_some() { "refuted" } else { "unknown" };
    let mut text = format!("verdict: {verdict}\nlogic: {logic}\n");
    let mut js = json!({
        "command": "countermodel",
        "query": src,
        "logic": logic.name(),
        "verdict": verdict,
        "stats": stats_json(time_ms, 0, stats.frames),
    });
    if goal != a {
        text += &format!("reduced: {goal}\n");
        js["reduced"] = goal.to_string().into();
    }
    match &found {
        Some(m) => {
            text += &m.to_string();
            js["model"] = serde_json::to_value(m).expect("models serialize");
        }
        None => {
            let capped = if stats.capped { " (capped for this frame class)" } else { "" };
            text += &format!("no countermodel with at most {} worlds{capped}\n", stats.worlds_searched);
        }
    }
    text += &format!("time: {time_ms} ms, frames: {}\n", stats.frames);
    Ok(Report {
        exit: if found.is_some() { EXIT_REFUTED } else { EXIT_UNKNOWN },
        text,
        json: js,
    })
}

fn run_preserves(
    variant: PresVariant,
    lhs: &str,
    rhs: &str,
    budget: PresBudget,
    closure: bool,
) -> Result<Report, UsageError> {
    let (a, b) = (formula(lhs)?, formula(rhs)?);
    let start = Instant::now();
    let tree = derive_pres(&a, &b, variant, budget);
    if let Some(t) = &tree {
        verify_derivation(t).map_err(|e| UsageError(format!("internal error: derivation rejected: {e}")))?;
    }
    let report = match (&tree, closure) {
        (Some(t), true) => Some(check_box_closure(t, budget)),
        _ => None,
    };
    let time_ms = start.elapsed().as_millis();
    let verdict = if tree.is_some() { "derivable" } else { "unknown" };
    let mut text = format!("verdict: {verdict}\nvariant: {variant}\n");
    let mut js = json!({
        "command": "preserves",
        "query": format!("{lhs} >> {rhs}"),
        "variant": variant.name(),
        "verdict": verdict,
        "stats": stats_json(time_ms, tree.as_ref().map_or(0, |t| t.root.size() as u64), 0),
    });
    if let Some(t) = &tree {
        text += &t.to_text();
        js["derivation"] = serde_json::to_value(t).expect("derivations serialize");
    }
    if let Some(r) = &report {
        match (&r.found, &r.failure) {
            (Some(t), _) => {
                text += &format!("box closure: ok ({} nodes)\n", t.root.size());
                js["closure"] = json!({ "succeeded": true, "nodes": t.root.size() });
            }
            (None, f) => {
                let why = f.clone().unwrap_or_default();
                text += &format!("box closure: failed: {why}\n");
                js["closure"] = json!({ "succeeded": false, "failure": why });
            }
        }
    }
    text += &format!("time: {time_ms} ms\n");
    Ok(Report {
        exit: if tree.is_some() { EXIT_PROVABLE } else { EXIT_UNKNOWN },
        text,
        json: js,
    })
}

fn run_corpus(action: &CorpusAction, budget: Budget, seed: u64) -> Result<Report, UsageError> {
    match action {
        CorpusAction::Run { file } => {
            let entries = corpus::load(file).map_err(|e| UsageError(e.to_string()))?;
            let start = Instant::now();
            let report = corpus::run(&entries, budget);
            let time_ms = start.elapsed().as_millis();
            let text = format!("{}time: {time_ms} ms\n", report.to_text());
            let js = json!({
                "command": "corpus",
                "query": file,
                "verdict": if report.any_failed() { "fail" } else { "pass" },
                "report": serde_json::to_value(&report).expect("reports serialize"),
                "stats": stats_json(time_ms, 0, 0),
            });
            Ok(Report {
                exit: u8::from(report.any_failed()),
                text,
                json: js,
            })
        }
        &CorpusAction::Generate {
            count,
            max_size,
            atoms,
            box_prob,
        } => {
            if !(0.0..=1.0).contains(&box_prob) || max_size == 0 || atoms == 0 {
                return Err(UsageError("need 0 <= box-prob <= 1, max-size >= 1, atoms >= 1".into()));
            }
            let g = RandomFormulas {
                seed,
                max_size,
                atoms,
                box_prob,
                ..Default::default()
            };
            let fs: Vec<String> = g.generate(count).iter().map(|f| f.to_string()).collect();
            Ok(Report {
                exit: 0,
                text: fs.iter().map(|f| format!("{f}\n")).collect(),
                json: json!({
                    "command": "generate",
                    "query": format!("count={count} max_size={max_size} atoms={atoms} box_prob={box_prob}"),
                    "formulas": fs,
                }),
            })
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, UsageError> {
    let budget = Budget::from(cli.budget);
    match &cli.command {
        Command::Parse { formula } => run_parse(formula),
        Command::Translate { kind, formula, rest } => run_translate(*kind, formula, rest),
        Command::Approx { kind, trace, formula } => run_approx(*kind, *trace, formula),
        Command::Decide { logic, formula } => run_decide(*logic, formula, budget),
        Command::Countermodel { logic, formula } => run_countermodel(*logic, formula, budget.max_worlds),
        Command::Preserves {
            variant,
            lhs,
            rhs,
            search_depth,
            max_size,
            closure,
        } => run_preserves(
            *variant,
            lhs,
            rhs,
            PresBudget {
                max_depth: *search_depth,
                max_size: *max_size,
                ..PresBudget::default()
            },
            *closure,
        ),
        Command::Corpus { action } => run_corpus(action, budget, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global pool is configured once");
    }
    match dispatch(&cli) {
        Ok(mut r) => {
            let out = match cli.format {
                Format::Text => r.text,
                Format::Json => {
                    r.json["seed"] = cli.seed.into();
                    serde_json::to_string_pretty(&r.json).expect("json") + "\n"
                }
            };
            // A closed pipe is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(r.exit)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
