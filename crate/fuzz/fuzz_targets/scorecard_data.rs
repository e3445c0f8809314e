#![no_main]

use ibekit::scorecard::boyen::{parse_exprs, Calibration};
use ibekit::scorecard::cost::parse_decimal;
use ibekit::scorecard::opcount::Expectations;
use ibekit::scorecard::rank::RankFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = Calibration::parse(text);
    let _ = parse_exprs(text);
    let _ = RankFile::parse(text);
    let _ = parse_decimal(text);
    // Split once so both halves of the expectation pair get exercised.
    let (rows, adjust) = text.split_once("\n\n").unwrap_or((text, ""));
    let _ = Expectations::parse(rows, adjust);
});
