//! Measured series are ingested from external CSV files; the reader must
//! reject malformed data without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = tribofe::analytics::ExperimentSeries::parse(text);
    }
});
