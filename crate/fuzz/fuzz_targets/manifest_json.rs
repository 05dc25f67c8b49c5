#![no_main]

use libfuzzer_sys::fuzz_target;
use vtqg::qpd::FragmentManifest;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = FragmentManifest::from_json(text) {
        let circuits = m.circuits().expect("validated manifests hold parseable circuits");
        assert_eq!(circuits.len(), m.fragments.len());
    }
});
