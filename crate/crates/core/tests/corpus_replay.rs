//! Replays the checked-in fuzz corpus through the same entry points the
//! fuzz targets drive, so the harness properties hold on stable builds too.

use cusped_core::groups::{GroupDescriptor, GroupModel};
use cusped_core::runspec;
use std::path::{Path, PathBuf};

fn corpus_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(name)
}

fn seeds(name: &str) -> Vec<(String, Vec<u8>)> {
    let dir = corpus_dir(name);
    let mut entries: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("corpus {} missing: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    entries
        .into_iter()
        .map(|p| (p.display().to_string(), std::fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn runspec_json_corpus() {
    let mut accepted = 0;
    for (name, data) in seeds("runspec_json") {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        if let Ok(spec) = runspec::parse_spec_json(text) {
            accepted += 1;
            let _ = runspec::validate(&spec);
            let printed = runspec::print_spec(&spec);
            let again = runspec::parse_spec_json(&printed)
                .unwrap_or_else(|e| panic!("{name}: printed spec failed to re-parse: {e}"));
            assert_eq!(spec, again, "{name}");
        }
    }
    assert!(accepted >= 2, "corpus should contain parseable specs");
}

#[test]
fn runspec_toml_corpus() {
    let mut accepted = 0;
    for (name, data) in seeds("runspec_toml") {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        if let Ok(spec) = runspec::parse_spec_toml(text) {
            accepted += 1;
            let _ = runspec::validate(&spec);
            let printed = runspec::print_spec(&spec);
            let again = runspec::parse_spec_json(&printed)
                .unwrap_or_else(|e| panic!("{name}: printed spec failed to re-parse: {e}"));
            assert_eq!(spec, again, "{name}");
        }
    }
    assert!(accepted >= 3, "corpus should contain parseable specs");
}

#[test]
fn word_parse_corpus() {
    let model = GroupModel::new(&GroupDescriptor::FreeProduct {
        factors: vec![
            GroupDescriptor::Free { rank: 1, generators: Some(vec!["t".into()]) },
            GroupDescriptor::FreeAbelian {
                rank: 2,
                generators: Some(vec!["a".into(), "b".into()]),
            },
        ],
    })
    .unwrap();
    let mut accepted = 0;
    for (name, data) in seeds("word_parse") {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        if let Ok(g) = model.parse_word(text) {
            accepted += 1;
            let again = model
                .parse_word(&model.display(&g))
                .unwrap_or_else(|e| panic!("{name}: display failed to re-parse: {e}"));
            assert_eq!(g, again, "{name}");
            assert!(model.multiply(&g, &model.invert(&g)).is_identity());
        }
    }
    assert!(accepted >= 3, "corpus should contain parseable words");
}
