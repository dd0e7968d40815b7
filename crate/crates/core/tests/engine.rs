use std::time::Instant;

use skein_core::corpus::default_corpus;
use skein_core::homfly::{EngineOptions, HomflyEngine};
use skein_core::par::Parallelism;

#[test]
fn bundled_references_round_trip() {
    let corpus = default_corpus().unwrap();
    let engine = HomflyEngine::default();
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for e in &corpus {
        let Some(want) = &e.record.homfly_ref else { continue };
        let got = engine.homfly(&e.diagram).unwrap();
        if &got != want {
            mismatches.push(format!("{}: got {got}, want {want}", e.name()));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn memoized_and_plain_agree_on_corpus() {
    let corpus = default_corpus().unwrap();
    let memo = HomflyEngine::default();
    let plain = HomflyEngine::new(EngineOptions { memoize: false, parallelism: Parallelism::Sequential, ..Default::default() });
    for e in corpus.iter().filter(|e| e.diagram.crossing_count() <= 8) {
        assert_eq!(memo.homfly(&e.diagram).unwrap(), plain.homfly(&e.diagram).unwrap(), "{}", e.name());
    }
}
