use imodal::calculi::Budget;
use imodal::corpus::{parse_corpus, run, Status, SHIPPED};
use std::time::{Duration, Instant};

#[test]
fn shipped_corpus_has_no_failures() {
    let entries = parse_corpus(SHIPPED).unwrap();
    assert!(entries.len() >= 40);
    let start = Instant::now();
    let report = run(&entries, Budget::default());
    let elapsed = start.elapsed();
    print!("{}", report.to_text());
    assert_eq!(report.failed, 0, "{}", report.to_text());
    assert!(report.results.iter().filter(|r| r.status == Status::Unknown).count() <= report.results.len() / 10);
    assert!(elapsed < Duration::from_secs(300), "{elapsed:?}");
}
