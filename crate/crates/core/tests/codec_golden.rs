//! Byte-exact envelopes for seeded key material, plus decoder robustness.
//!
//! Set `IBEKIT_BLESS=1` to rewrite the files under `tests/data/golden`
//! after an intentional format change.

use std::path::PathBuf;
use std::sync::Arc;

use ibekit::codec::{armor, dearmor, Envelope, Kind, RawEnvelope};
use ibekit::curve::Curve;
use ibekit::error::Error;
use ibekit::identity::Identity;
use ibekit::novel::{fs, hibe, ibe};
use ibekit::pairing::Gt;
use ibekit::schemes::{random_message, scheme_for, Ciphertext, Params, SchemeId, UserKey};
use proptest::prelude::*;
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

const SEED: u64 = 2024;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/golden")
}

fn check_golden(name: &str, env: &Envelope) {
    let path = golden_dir().join(format!("{name}.txt"));
    let text = env.to_armor();
    if std::env::var_os("IBEKIT_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, want, "{name} drifted from its golden file");
}

/// Every value comes from one seeded rng, so the bytes are reproducible.
fn benchmark_material(id: SchemeId) -> (Params, UserKey, Ciphertext) {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let s = scheme_for(id);
    let (params, msk) = s.setup(&curve, 16, &mut rng).unwrap();
    let who = Identity::new("alice@example.com").unwrap();
    let key = s.extract(&params, &msk, &who, &mut rng).unwrap();
    let m = random_message(&params, &mut rng).unwrap();
    let ct = s.encrypt(&params, &who, &m, &mut rng).unwrap();
    (params, key, ct)
}

#[test]
fn benchmark_envelopes_match_golden() {
    for id in SchemeId::ALL {
        let (params, key, ct) = benchmark_material(id);
        let curve = params.curve.clone();
        for (part, env) in [
            ("params", params.to_envelope()),
            ("key", key.to_envelope(&curve)),
            ("ct", ct.to_envelope(&curve)),
        ] {
            check_golden(&format!("{}-{part}", id.name()), &env);
        }
    }
}

#[test]
fn golden_files_decode_and_decrypt() {
    let curve = Curve::bench();
    let load = |name: &str| {
        let text = std::fs::read_to_string(golden_dir().join(format!("{name}.txt"))).unwrap();
        Envelope::from_armor(&text, &curve).unwrap()
    };
    for id in SchemeId::ALL {
        let n = id.name();
        let params = Params::from_envelope(load(&format!("{n}-params")), &curve).unwrap();
        let key = UserKey::from_envelope(load(&format!("{n}-key"))).unwrap();
        let ct = Ciphertext::from_envelope(load(&format!("{n}-ct"))).unwrap();
        let s = scheme_for(id);
        assert!(s.validate_key(&params, &key).unwrap(), "{n}");
        s.decrypt(&params, &key, &ct).unwrap_or_else(|e| panic!("{n}: {e}"));
    }
}

#[test]
fn novel_envelopes_match_golden() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let who = Identity::new("alice@example.com").unwrap();
    let (params, msk) = ibe::setup(&curve, &mut rng).unwrap();
    let key = ibe::extract(&params, &msk, &who, &mut rng).unwrap();
    check_golden("our-ibe-params", &params.to_envelope());
    check_golden("our-ibe-key", &key.to_envelope(&curve));

    let (hp, hm) = hibe::setup(&curve, 3, &mut rng).unwrap();
    let ids = hibe::hash_identity(&curve, &Identity::parse("acme/eng").unwrap());
    let hk = hibe::extract(&hp, &hm, &ids, &mut rng).unwrap();
    check_golden("our-hibe-params", &hp.to_envelope());
    check_golden("our-hibe-key", &hk.to_envelope(&curve));

    let (fp, root) = fs::setup(&curve, 2, 3, &mut rng).unwrap();
    let bundle = root
        .derive(&fp, b"alice", &mut rng)
        .unwrap()
        .update(&fp, &mut rng)
        .unwrap();
    check_golden("fs-hibe-params", &fp.to_envelope());
    check_golden("fs-hibe-bundle", &bundle.to_envelope(&curve));
}

fn sample_bytes() -> (Arc<Curve>, Vec<u8>) {
    let (params, key, _) = benchmark_material(SchemeId::Bb1);
    let curve = params.curve.clone();
    let bytes = key.to_envelope(&curve).encode();
    (curve, bytes)
}

#[test]
fn raw_stage_needs_no_curve() {
    let (_, bytes) = sample_bytes();
    let raw = RawEnvelope::decode(&bytes).unwrap();
    assert_eq!(raw.kind, Kind::UserKey);
    assert_eq!(raw.scheme, "bb1");
    assert_eq!(raw.profile, "bench");
    assert_eq!(raw.encode(), bytes);
    // Resolving against the wrong curve is refused.
    assert!(raw.resolve(&Curve::tiny()).is_err());
}

#[test]
fn armor_rejects_mislabelled_and_malformed_text() {
    let (curve, bytes) = sample_bytes();
    let good = armor(Kind::UserKey, &bytes);
    assert_eq!(dearmor(&good).unwrap(), (Kind::UserKey, bytes.clone()));
    let relabelled = good.replace("USER KEY", "CIPHERTEXT");
    assert!(dearmor(&relabelled).is_ok());
    assert!(Envelope::from_armor(&relabelled, &curve).is_err());
    assert!(dearmor(&good.replace("-----END IBEKIT USER KEY-----\n", "")).is_err());
    assert!(dearmor(&format!("{good}trailing\n")).is_err());
    assert!(dearmor(&good.replacen('a', "g", 1)).is_err());
}

#[test]
fn gt_bytes_roundtrip_exhaustively_on_tiny() {
    let curve = Curve::tiny();
    let g = curve.generator();
    let x = ibekit::pairing::pairing(&g, &g).unwrap();
    for e in 0u32..3 {
        let v = x.pow(&e.into());
        assert_eq!(Gt::from_bytes(&curve, &v.to_bytes()).unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn any_bit_flip_fails_the_checksum(pos in any::<prop::sample::Index>(), bit in 0u8..8) {
        let (_, mut bytes) = sample_bytes();
        let i = pos.index(bytes.len());
        bytes[i] ^= 1 << bit;
        let err = RawEnvelope::decode(&bytes).unwrap_err();
        // Flips in the magic are caught before the checksum is read.
        if i < 4 {
            prop_assert!(matches!(err, Error::Malformed(_)));
        } else {
            prop_assert_eq!(err, Error::Checksum);
        }
    }

    #[test]
    fn every_truncation_is_an_error(cut in any::<prop::sample::Index>()) {
        let (_, bytes) = sample_bytes();
        let n = cut.index(bytes.len());
        prop_assert!(RawEnvelope::decode(&bytes[..n]).is_err());
    }

    #[test]
    fn random_bytes_never_panic(data in prop::collection::vec(any::<u8>(), 0..512)) {
        let curve = Curve::tiny();
        let _ = Envelope::decode(&data, &curve);
        let _ = dearmor(&String::from_utf8_lossy(&data));
    }

    #[test]
    fn framed_garbage_never_panics(data in prop::collection::vec(any::<u8>(), 0..256)) {
        // Valid magic and checksum so the decoder reaches the body.
        let mut buf = b"IBEK".to_vec();
        buf.extend(&data);
        buf.extend(crc32fast::hash(&buf).to_be_bytes());
        if let Ok(raw) = RawEnvelope::decode(&buf) {
            prop_assert_eq!(raw.encode(), buf.clone());
            if let Ok(env) = raw.resolve(&Curve::tiny()) {
                prop_assert_eq!(env.encode(), buf);
            }
        }
    }
}
