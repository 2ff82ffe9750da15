#![no_main]

use cusped_core::groups::{GroupDescriptor, GroupModel};
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

fn model() -> &'static GroupModel {
    static MODEL: OnceLock<GroupModel> = OnceLock::new();
    MODEL.get_or_init(|| {
        GroupModel::new(&GroupDescriptor::FreeProduct {
            factors: vec![
                GroupDescriptor::Free { rank: 1, generators: Some(vec!["t".into()]) },
                GroupDescriptor::FreeAbelian {
                    rank: 2,
                    generators: Some(vec!["a".into(), "b".into()]),
                },
            ],
        })
        .expect("fixed model builds")
    })
}

// Arbitrary strings through the word parser. Accepted words are normal
// forms, so display must round-trip and inversion must be exact.
fuzz_target!(|data: &[u8]| {
    if data.len() > 4 * 1024 {
        return;
    }
    if let Ok(text) = std::str::from_utf8(data) {
        let m = model();
        if let Ok(g) = m.parse_word(text) {
            let again = m.parse_word(&m.display(&g)).expect("display must re-parse");
            assert_eq!(g, again);
            assert!(m.multiply(&g, &m.invert(&g)).is_identity());
        }
    }
});
