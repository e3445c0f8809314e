#![no_main]

use ibekit::codec::{armor, dearmor};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok((kind, bytes)) = dearmor(&text) {
        assert_eq!(dearmor(&armor(kind, &bytes)).unwrap(), (kind, bytes));
    }
});
