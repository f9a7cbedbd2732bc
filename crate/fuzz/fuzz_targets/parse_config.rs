#![no_main]

use libfuzzer_sys::fuzz_target;
use marc_relay::experiment::spec::{validate_spec, PartialSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(partial) = PartialSpec::from_config_text(text) else {
        return;
    };
    if let Ok(v) = validate_spec(&partial) {
        // canonical text must parse back to the same spec
        let again = PartialSpec::from_config_text(&v.spec.to_config_text()).expect("canonical text parses");
        assert_eq!(validate_spec(&again).expect("canonical text validates").spec, v.spec);
    }
});
