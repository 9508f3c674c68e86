#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(value) = fairdense::rational::parse_rational(text) {
        assert!(*value.numer() >= 0 && *value.denom() > 0);
        let shown = value.to_string();
        assert_eq!(fairdense::rational::parse_rational(&shown).unwrap(), value);
    }
});
