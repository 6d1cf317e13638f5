#![no_main]

use k3_sixteen::elliptic::{fiber_analysis, parse_poly, WeierstrassModel};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (a, b) = text.split_once(';').unwrap_or((text, "1"));
    let Ok(pa) = parse_poly(a) else { return };
    assert_eq!(parse_poly(&pa.to_string()).expect("printed polynomial reparses"), pa);
    if let Ok(w) = WeierstrassModel::parse(a, b) {
        let _ = fiber_analysis(&w);
    }
});
