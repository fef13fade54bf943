//! The mesh exchange format is read from disk; arbitrary input must fail
//! cleanly instead of panicking or over-allocating.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = tribofe::mesh::Mesh::parse(text);
    }
});
