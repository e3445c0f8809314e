#![no_main]

use ibekit::codec::RawEnvelope;
use ibekit::curve::Curve;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(raw) = RawEnvelope::decode(data) else {
        return;
    };
    // Anything that decodes must re-encode to the same bytes.
    assert_eq!(raw.encode(), data);
    let curve = match raw.profile.as_str() {
        "tiny" => Curve::tiny(),
        _ => Curve::bench(),
    };
    if let Ok(env) = raw.resolve(&curve) {
        assert_eq!(env.encode(), data);
    }
});
