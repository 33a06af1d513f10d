use std::fs;
use std::path::PathBuf;

use colfw_core::driver::{check_source, Options};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/corpus")
}

#[test]
fn corpus_checks_at_small_depths() {
    let mut names: Vec<_> = fs::read_dir(corpus_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    assert_eq!(names.len(), 9);
    for p in names {
        let src = fs::read_to_string(&p).unwrap();
        for k in [0, 1, 2, 4] {
            let out = check_source(&src, &Options { depth: k, ..Options::default() });
            let msgs: Vec<String> = out
                .diagnostics
                .iter()
                .map(|d| format!("{} at {:?} [{:?}]", d, d.span.map(|s| (s.line, s.col)), d.trail))
                .collect();
            assert!(msgs.is_empty(), "{} @ {}: {:#?}", p.display(), k, msgs);
        }
    }
}
