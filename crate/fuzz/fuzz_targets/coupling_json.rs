#![no_main]

use libfuzzer_sys::fuzz_target;
use vtqg::circuit::{route_ring_closure, CouplingMap};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(map) = CouplingMap::from_json(text) {
        assert_eq!(CouplingMap::from_json(&map.to_json()).unwrap(), map);
        if let Ok(order) = map.path_order() {
            assert_eq!(order.len(), map.n_physical());
            if (2..=64).contains(&map.n_physical()) {
                route_ring_closure(map.n_physical(), &map, 0.5).expect("paths route");
            }
        }
    }
});
