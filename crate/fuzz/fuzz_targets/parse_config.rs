//! Scenario configurations come from user-written files; parsing must never
//! panic, whatever the bytes.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = tribofe::config::parse_config(text);
    }
});
