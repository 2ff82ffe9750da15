#![no_main]

use libfuzzer_sys::fuzz_target;

// Arbitrary bytes through the JSON spec parser and validator. Accepted
// specs must survive a print/re-parse round trip unchanged.
fuzz_target!(|data: &[u8]| {
    if data.len() > 64 * 1024 {
        return;
    }
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = cusped_core::runspec::parse_spec_json(text) {
            let _ = cusped_core::runspec::validate(&spec);
            let printed = cusped_core::runspec::print_spec(&spec);
            let again = cusped_core::runspec::parse_spec_json(&printed)
                .expect("printed spec must re-parse");
            assert_eq!(spec, again);
        }
    }
});
