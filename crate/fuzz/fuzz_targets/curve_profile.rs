#![no_main]

use ibekit::curve::{Curve, CurveProfile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Primality checks on huge moduli only slow the fuzzer down.
    if data.len() > 2048 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(profile) = CurveProfile::parse(text) {
        let _ = Curve::new(profile);
    }
});
