#![no_main]

use libfuzzer_sys::fuzz_target;
use marc_relay::experiment::csv::{parse_csv, render};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_csv(text) {
        if !rows.is_empty() {
            assert_eq!(parse_csv(&render(&rows)).expect("rendered csv parses"), rows);
        }
    }
});
