#![no_main]

use k3_sixteen::lefschetz::{holomorphic_residual, FixedLocusProfile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = FixedLocusProfile::from_json(text) {
        let back = FixedLocusProfile::from_json(&f.to_json()).expect("serialised profile reparses");
        assert_eq!(back, f);
        let _ = holomorphic_residual(&f);
    }
});
