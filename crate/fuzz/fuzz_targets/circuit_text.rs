#![no_main]

use libfuzzer_sys::fuzz_target;
use vtqg::circuit::{parse_circuit, write_circuit};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = parse_circuit(text) {
        let again = parse_circuit(&write_circuit(&c)).expect("written circuits parse");
        assert_eq!(again, c);
    }
});
