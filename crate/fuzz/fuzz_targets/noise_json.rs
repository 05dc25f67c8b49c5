#![no_main]

use libfuzzer_sys::fuzz_target;
use vtqg::noise::NoiseModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = NoiseModel::from_json(text) {
        m.validate().expect("parsed models are valid");
        assert_eq!(NoiseModel::from_json(&m.to_json()).unwrap(), m);
    }
});
