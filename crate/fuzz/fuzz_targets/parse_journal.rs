#![no_main]

use libfuzzer_sys::fuzz_target;
use marc_relay::experiment::journal::parse_journal;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let j = parse_journal(text);
    for row in j.rows.values() {
        let line = row.to_line();
        assert_eq!(
            &marc_relay::experiment::CsvRow::parse(&line).expect("rendered row parses"),
            row
        );
    }
});
