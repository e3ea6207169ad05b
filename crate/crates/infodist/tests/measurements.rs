//! Thresholds measured once with the builtin compressor on the bundled texts.

use std::path::{Path, PathBuf};

use infodist::core::compressor::normality_audit;
use infodist::core::distances::{benedetto_s, measure_fragment_sizes, ncd_pair, FragmentPolicy};
use infodist::core::{Document, DocumentKind, JointSizePolicy, LzCompressor};
use infodist::corpus::{load_dir, load_file};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

/// About 4 KiB of English prose.
fn english_4k() -> Document {
    let a = load_file(&data("tests/fixtures/english/harbour.txt")).unwrap();
    let b = load_file(&data("tests/fixtures/english/library.txt")).unwrap();
    let mut bytes = [a.bytes, b.bytes].concat();
    bytes.truncate(4096);
    Document::new("english", bytes, DocumentKind::Text)
}

#[test]
fn english_fixtures_are_nearly_idempotent() {
    let docs = load_dir(&data("tests/fixtures/english")).unwrap();
    assert_eq!(docs.len(), 10);
    let r = normality_audit(&LzCompressor::default(), &docs).unwrap();
    let median = r.idempotency_summary.unwrap().median;
    assert!(median <= 0.15, "median idempotency deviation {median}");
    assert!(r.monotonicity_violations.is_empty());
}

#[test]
fn self_ncd_of_english_text() {
    let x = english_4k();
    assert_eq!(x.len(), 4096);
    let d = ncd_pair(&x, &x, &LzCompressor::default(), JointSizePolicy::default()).unwrap();
    assert!(d.value <= 0.15, "{}", d.value);
}

#[test]
fn shuffled_english_is_far() {
    let x = english_4k();
    let mut bytes = x.bytes.clone();
    bytes.shuffle(&mut ChaCha8Rng::seed_from_u64(4));
    let y = Document::new("shuffled", bytes, DocumentKind::Text);
    let d = ncd_pair(&x, &y, &LzCompressor::default(), JointSizePolicy::default()).unwrap();
    assert!(d.value >= 0.5, "{}", d.value);
}

#[test]
fn italian_fragment_costs_more_after_english() {
    let lz = LzCompressor::default();
    let policy = FragmentPolicy::default();
    let english = load_file(&data("data/desk/harbour.txt")).unwrap();
    let italian = load_file(&data("data/desk/river-it.txt")).unwrap();
    let s = |x: &Document, y: &Document| {
        let z = measure_fragment_sizes(&lz, x, y, policy).unwrap();
        benedetto_s(z.c_xyp, z.c_x, z.c_yyp, z.c_y, z.len_yp).unwrap()
    };
    let cross = s(&english, &italian);
    let own = s(&italian, &italian);
    assert!(cross > own, "s(en, it) = {cross}, s(it, it) = {own}");
}

#[test]
fn romance_texts_are_closer_to_each_other_than_to_german() {
    let lz = LzCompressor::default();
    let load = |n: &str| load_file(&data(&format!("data/desk/river-{n}.txt"))).unwrap();
    let (it, es, de) = (load("it"), load("es"), load("de"));
    let d = |a: &Document, b: &Document| ncd_pair(a, b, &lz, JointSizePolicy::default()).unwrap().value;
    assert!(d(&it, &es) < d(&it, &de));
    assert!(d(&it, &es) < d(&es, &de));
}
