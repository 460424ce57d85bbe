//! Machine-readable outputs are byte-stable across runs and pinned by golden files.

mod support;

use support::*;

#[test]
fn outputs_are_reproducible_and_match_golden_files() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = golden_session(a.path());
    let second = golden_session(b.path());
    for ((na, ba), (nb, bb)) in first.iter().zip(&second) {
        assert_eq!(na, nb);
        assert!(ba == bb, "{na} differs between runs");
    }
    let bad = golden_mismatches(&first);
    assert!(bad.is_empty(), "golden mismatch: {bad:?}");
}
