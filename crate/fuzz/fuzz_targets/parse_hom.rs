#![no_main]

use libfuzzer_sys::fuzz_target;

// The parser must reject arbitrary input with an error, never panic.
fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = hermitia_core::io::parse_hom(s);
    }
});
