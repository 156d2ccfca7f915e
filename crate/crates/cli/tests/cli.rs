use serde_json::Value;
use std::process::{Command, Output};

fn imodal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imodal")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schema/result.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = imodal(&full);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&out)));
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}\n{v:#}");
    (code(&out), v)
}

#[test]
fn box_translation_of_an_atom() {
    let out = imodal(&["translate", "--kind", "box", "p"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "p & #p");
}

#[test]
fn plus_of_double_negation_is_equivalent_to_p() {
    let out = imodal(&["approx", "--kind", "plus", "~~p"]);
    assert_eq!(code(&out), 0);
    let plus = imodal::parse(stdout(&out).trim()).unwrap();
    let iff = imodal::Formula::iff(plus, imodal::parse("p").unwrap());
    assert!(imodal::decide_ipc_box(&iff).verdict.is_provable());
}

#[test]
fn remark_non_theorem_exits_refuted_with_model() {
    let (c, v) = json(&["decide", "--logic", "iglc", "~~p -> (#~p -> p)"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"], "refuted");
    let m: imodal::models::BirelationalModel = serde_json::from_value(v["model"].clone()).unwrap();
    assert!(m.is_frame_for(imodal::LogicId::IGLC));
    assert!(!m.valid_on(&imodal::parse("~~p -> (#~p -> p)").unwrap()));
}

#[test]
fn provable_certificate_reverifies() {
    let (c, v) = json(&["decide", "--logic", "igl", "#(#p -> p) -> #p"]);
    assert_eq!(c, 0);
    let cert: imodal::calculi::Certificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    imodal::calculi::check_certificate(&cert, imodal::LogicId::IGL, &imodal::parse("#(#p -> p) -> #p").unwrap()).unwrap();
}

#[test]
fn text_and_json_verdicts_agree() {
    for (logic, f) in [("iglc", "p -> #p"), ("igl", "#p -> p"), ("ipc_box", "#p | ~#p"), ("ihstar_sigma", "false")] {
        let text = imodal(&["decide", "--logic", logic, f]);
        let (c, v) = json(&["decide", "--logic", logic, f]);
        assert_eq!(code(&text), c);
        let first = stdout(&text).lines().next().unwrap().to_string();
        assert_eq!(first, format!("verdict: {}", v["verdict"].as_str().unwrap()));
    }
}

#[test]
fn ipc_box_refutation_carries_bindings() {
    let (c, v) = json(&["decide", "--logic", "ipc_box", "#p | ~#p"]);
    assert_eq!(c, 1);
    assert!(v["bindings"].is_object(), "{v:#}");
}

#[test]
fn unknown_when_search_is_starved() {
    let (c, v) = json(&["countermodel", "--logic", "igl", "--max-worlds", "3", "#(#p -> p) -> #p"]);
    assert_eq!(c, 2);
    assert_eq!(v["verdict"], "unknown");
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["decide", "--logic", "nope", "p"][..],
        &["decide", "--logic", "igl", "p ->"],
        &["frobnicate"],
        &["translate", "--kind", "bracket", "p"],
        &["approx", "--kind", "minus", "--trace", "p"],
        &["countermodel", "--logic", "h", "p"],
    ] {
        let out = imodal(args);
        assert_eq!(code(&out), 64, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_is_not_an_error() {
    assert_eq!(code(&imodal(&["--help"])), 0);
}

#[test]
fn every_subcommand_emits_schema_valid_json() {
    json(&["parse", "~~p"]);
    json(&["translate", "--kind", "leivant", "#(p | q)"]);
    json(&["translate", "--kind", "bracket-prime", "p -> q", "p", "q"]);
    json(&["translate", "--kind", "brace", "p", "q"]);
    for kind in ["star", "plus", "minus", "dagger"] {
        json(&["approx", "--kind", kind, "(p -> q) -> r"]);
    }
    json(&["approx", "--kind", "dagger", "--trace", "#~~p"]);
    json(&["countermodel", "--logic", "ihstar_sigma", "#p -> p"]);
    json(&["preserves", "--variant", "star", "((p -> q) -> r) & #(p -> q)", "p | r", "--closure"]);
    json(&["preserves", "--variant", "ha", "p", "q"]);
    json(&["corpus", "generate", "--count", "5"]);
}

#[test]
fn preserves_exit_codes() {
    assert_eq!(code(&imodal(&["preserves", "--variant", "star", "p & q", "p"])), 0);
    assert_eq!(code(&imodal(&["preserves", "--variant", "star", "p", "q"])), 2);
}

#[test]
fn generation_is_seeded_and_echoed() {
    let (_, a) = json(&["corpus", "generate", "--count", "20", "--seed", "11"]);
    let (_, b) = json(&["corpus", "generate", "--count", "20", "--seed", "11"]);
    let (_, c) = json(&["corpus", "generate", "--count", "20", "--seed", "12"]);
    assert_eq!(a["formulas"], b["formulas"]);
    assert_ne!(a["formulas"], c["formulas"]);
    assert_eq!(a["seed"], 11);
}

#[test]
fn corpus_run_reports_failures_in_exit_status() {
    let dir = std::env::temp_dir().join(format!("imodal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.tsv");
    let bad = dir.join("bad.tsv");
    std::fs::write(&good, "iglc\tp -> #p\tprovable\ttrivial\nipc\tp | ~p\tnon-provable\ttrivial\n").unwrap();
    std::fs::write(&bad, "ipc\tp | ~p\tprovable\twrong\n").unwrap();
    let (c, v) = json(&["corpus", "run", good.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!((c, v["report"]["passed"].as_u64()), (0, Some(2)));
    assert_eq!(code(&imodal(&["corpus", "run", bad.to_str().unwrap()])), 1);
    std::fs::write(&bad, "ipc\tp |\tprovable\twrong\n").unwrap();
    let out = imodal(&["corpus", "run", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn shipped_corpus_runs_clean() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus/shipped.tsv");
    let out = imodal(&["corpus", "run", path]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}
