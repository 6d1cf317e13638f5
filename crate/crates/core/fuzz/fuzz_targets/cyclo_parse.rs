#![no_main]

use k3_sixteen::cyclo::{parse_cyclo, Cyclo16};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_cyclo(text) {
        let back: Cyclo16 = x.to_string().parse().expect("printed element reparses");
        assert_eq!(back, x);
    }
});
