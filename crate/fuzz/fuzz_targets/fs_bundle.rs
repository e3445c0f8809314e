#![no_main]

use ibekit::codec::RawEnvelope;
use ibekit::curve::Curve;
use ibekit::novel::fs::FsKeyBundle;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(raw) = RawEnvelope::decode(data) else {
        return;
    };
    let curve = match raw.profile.as_str() {
        "tiny" => Curve::tiny(),
        _ => Curve::bench(),
    };
    let Ok(env) = raw.resolve(&curve) else {
        return;
    };
    if let Ok(bundle) = FsKeyBundle::from_envelope(&env) {
        let again = FsKeyBundle::from_envelope(&bundle.to_envelope(&curve)).unwrap();
        assert_eq!(again, bundle);
    }
});
