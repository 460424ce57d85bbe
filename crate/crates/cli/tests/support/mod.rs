//! Helpers for driving the `osg` binary.
#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

pub fn osg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osg")).args(args).env_remove("OSG_LOG").output().expect("spawn osg")
}

pub fn osg_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_osg"))
        .args(args)
        .env_remove("OSG_LOG")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn osg");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

pub fn ok(out: Output) -> Vec<u8> {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Scripted demonstrations of `vocabulary` in `dir/demos` and a language
/// defined from them in `dir/lang.json`. Returns the define outputs.
pub fn build_language(dir: &Path, vocabulary: &str, labels: &[&str]) -> Vec<(String, Vec<u8>)> {
    let demos = dir.join("demos");
    ok(osg(&["demos", "--vocabulary", vocabulary, "--out", p(&demos)]));
    let lang = dir.join("lang.json");
    labels
        .iter()
        .map(|l| {
            let input = demos.join(format!("{l}.jsonl"));
            let out = ok(osg(&["define", "--in", p(&input), "--label", l, "--lang", p(&lang)]));
            (format!("define_{l}.json"), out)
        })
        .collect()
}

/// Every machine-readable artifact of a fixed-seed session, by golden name.
pub fn golden_session(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = build_language(dir, "small", &["circle", "wedge", "three"]);
    let demos = dir.join("demos");
    let lang = dir.join("lang.json");
    let circle = demos.join("circle.jsonl");
    out.push(("demo_circle.jsonl".into(), std::fs::read(&circle).unwrap()));
    out.push(("language.json".into(), std::fs::read(&lang).unwrap()));
    out.push(("recognize_circle.json".into(), ok(osg(&["recognize", "--in", p(&circle), "--lang", p(&lang), "--json"]))));
    out.push(("describe_circle.json".into(), ok(osg(&["describe", "--in", p(&circle), "--lang", p(&lang)]))));
    let ds: PathBuf = dir.join("dataset");
    ok(osg(&["augment", "--demos", p(&demos), "--n", "4", "--seed", "2024", "--out", p(&ds)]));
    out.push(("manifest.json".into(), std::fs::read(ds.join("manifest.json")).unwrap()));
    out.push(("sample_wedge_0002.jsonl".into(), std::fs::read(ds.join("wedge_0002.jsonl")).unwrap()));
    let manifest = ds.join("manifest.json");
    out.push((
        "evaluate.json".into(),
        ok(osg(&["evaluate", "--dataset", p(&manifest), "--lang", p(&lang), "--parallel", "2", "--json"])),
    ));
    out
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Names whose golden file is missing or differs. Set `OSG_UPDATE_GOLDEN=1`
/// to rewrite them instead.
pub fn golden_mismatches(artifacts: &[(String, Vec<u8>)]) -> Vec<String> {
    let dir = golden_dir();
    let update = std::env::var_os("OSG_UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for (name, bytes) in artifacts {
        let path = dir.join(name);
        if update {
            std::fs::write(&path, bytes).unwrap();
        } else if std::fs::read(&path).ok().as_deref() != Some(bytes.as_slice()) {
            bad.push(name.clone());
        }
    }
    bad
}
