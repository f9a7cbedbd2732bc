#![no_main]

use libfuzzer_sys::fuzz_target;
use marc_relay::experiment::spec::{parse_ptotal_list, parse_relay_list, parse_snr_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_snr_list(text) {
        assert!(v.iter().all(|x| x.is_finite()));
    }
    if let Ok(v) = parse_ptotal_list(text) {
        assert!(v.iter().all(|x| x.is_finite()));
    }
    let _ = parse_relay_list(text);
});
