mod common;

use ibekit::codec::Element;
use ibekit::curve::Curve;
use ibekit::error::Error;
use ibekit::identity::Identity;
use ibekit::ledger::{measure, Op, Phase};
use ibekit::pairing::Gt;
use ibekit::schemes::{kem, random_message, scheme_for, Ciphertext, Message, MessageDomain, SchemeId};
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

use common::*;

#[test]
fn benchmark_schemes_roundtrip_on_bench() {
    let curve = Curve::bench();
    for id in SchemeId::ALL {
        benchmark_roundtrips(id, &curve, 20, 100 + id as u64).unwrap();
    }
}

#[test]
fn benchmark_schemes_exhaustive_on_tiny() {
    for id in SchemeId::ALL {
        benchmark_tiny_exhaustive(id).unwrap();
    }
}

/// Alter one part so that it stays well formed.
fn tamper(ct: &Ciphertext, name: &str) -> Ciphertext {
    let mut out = ct.clone();
    let e = match ct.parts.get(name).unwrap() {
        Element::Point(p) => Element::Point(p.add(&p.curve().generator())),
        Element::Gt(g) => {
            let gen = g.curve().generator();
            Element::Gt(g.mul(&ibekit::pairing::pairing(&gen, &gen).unwrap()))
        }
        Element::Bytes(b) => {
            let mut b = b.clone();
            b[0] ^= 1;
            Element::Bytes(b)
        }
        Element::Scalar(s) => Element::Scalar(s + 1u8),
        Element::Int(i) => Element::Int(i + 1),
    };
    out.parts.set(name, e);
    out
}

#[test]
fn tampering_never_yields_the_message() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let id = Identity::new("carol").unwrap();
    for sid in SchemeId::ALL {
        let s = scheme_for(sid);
        let (params, msk) = s.setup(&curve, MSG_LEN, &mut rng).unwrap();
        let key = s.extract(&params, &msk, &id, &mut rng).unwrap();
        let m = random_message(&params, &mut rng).unwrap();
        let ct = s.encrypt(&params, &id, &m, &mut rng).unwrap();
        for name in s.ciphertext_names() {
            match s.decrypt(&params, &key, &tamper(&ct, name)) {
                Ok(got) => {
                    assert!(!s.checks_validity(), "{sid} accepted a modified `{name}`");
                    assert_ne!(got, m, "{sid}: modified `{name}` still decrypts");
                }
                Err(e) => assert_eq!(e, Error::Rejected, "{sid} `{name}`"),
            }
        }
    }
}

#[test]
fn wrong_identity_key_fails() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let alice = Identity::new("alice").unwrap();
    let bob = Identity::new("bob").unwrap();
    for sid in SchemeId::ALL {
        let s = scheme_for(sid);
        let (params, msk) = s.setup(&curve, MSG_LEN, &mut rng).unwrap();
        let bob_key = s.extract(&params, &msk, &bob, &mut rng).unwrap();
        let alice_key = s.extract(&params, &msk, &alice, &mut rng).unwrap();
        assert!(s.validate_key(&params, &bob_key).unwrap());
        let mut relabelled = bob_key.clone();
        relabelled.identity = alice.clone();
        assert!(!s.validate_key(&params, &relabelled).unwrap(), "{sid}");
        let m = random_message(&params, &mut rng).unwrap();
        let ct = s.encrypt(&params, &alice, &m, &mut rng).unwrap();
        assert_ne!(s.decrypt(&params, &bob_key, &ct).ok(), Some(m.clone()), "{sid}");
        assert_eq!(s.decrypt(&params, &alice_key, &ct).unwrap(), m);
    }
}

#[test]
fn ciphertext_shape_does_not_depend_on_identity() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for sid in SchemeId::ALL {
        let s = scheme_for(sid);
        let (params, _) = s.setup(&curve, MSG_LEN, &mut rng).unwrap();
        let m = random_message(&params, &mut rng).unwrap();
        let a = s.encrypt(&params, &Identity::new("a").unwrap(), &m, &mut rng).unwrap();
        let b = s
            .encrypt(
                &params,
                &Identity::new("a much longer identity string").unwrap(),
                &m,
                &mut rng,
            )
            .unwrap();
        assert_eq!(a.shape(), b.shape(), "{sid}");
        let names: Vec<&str> = a.parts.names();
        assert_eq!(names, s.ciphertext_names(), "{sid}");
    }
}

#[test]
fn kem_carries_any_payload() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let id = Identity::new("dave").unwrap();
    for sid in SchemeId::ALL {
        let s = scheme_for(sid);
        let (params, msk) = s.setup(&curve, MSG_LEN, &mut rng).unwrap();
        let key = s.extract(&params, &msk, &id, &mut rng).unwrap();
        for len in [0usize, 1, 100, 5000] {
            let payload: Vec<u8> = (0..len).map(|i| i as u8).collect();
            let ct = kem::encrypt(&params, &id, &payload, &mut rng).unwrap();
            assert_eq!(kem::decrypt(&params, &key, &ct).unwrap(), payload, "{sid} len {len}");
        }
    }
}

#[test]
fn message_domain_and_length_are_enforced() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let id = Identity::new("eve").unwrap();
    for sid in SchemeId::ALL {
        let s = scheme_for(sid);
        let (params, _) = s.setup(&curve, MSG_LEN, &mut rng).unwrap();
        match s.domain() {
            MessageDomain::Bytes => {
                let short = Message::Bytes(vec![0; MSG_LEN - 1]);
                assert_eq!(
                    s.encrypt(&params, &id, &short, &mut rng).unwrap_err(),
                    Error::MessageLength {
                        expected: MSG_LEN,
                        got: MSG_LEN - 1
                    }
                );
                let gt = Message::Gt(Gt::random(&curve, &mut rng));
                assert_eq!(
                    s.encrypt(&params, &id, &gt, &mut rng).unwrap_err(),
                    Error::WrongMessageDomain
                );
                assert!(matches!(s.setup(&curve, 0, &mut rng), Err(Error::Config(_))));
            }
            MessageDomain::Gt => {
                let bytes = Message::Bytes(vec![0; MSG_LEN]);
                assert_eq!(
                    s.encrypt(&params, &id, &bytes, &mut rng).unwrap_err(),
                    Error::WrongMessageDomain
                );
            }
        }
    }
}

#[test]
fn mixed_scheme_inputs_are_refused() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    let id = Identity::new("frank").unwrap();
    let (p1, m1) = scheme_for(SchemeId::Bb1).setup(&curve, MSG_LEN, &mut rng).unwrap();
    let (p2, _) = scheme_for(SchemeId::Bb2).setup(&curve, MSG_LEN, &mut rng).unwrap();
    assert!(matches!(
        scheme_for(SchemeId::Bb2).extract(&p2, &m1, &id, &mut rng),
        Err(Error::SchemeMismatch { .. })
    ));
    let k1 = scheme_for(SchemeId::Bb1).extract(&p1, &m1, &id, &mut rng).unwrap();
    let m = random_message(&p2, &mut rng).unwrap();
    let ct2 = scheme_for(SchemeId::Bb2).encrypt(&p2, &id, &m, &mut rng).unwrap();
    assert!(matches!(
        scheme_for(SchemeId::Bb2).decrypt(&p2, &k1, &ct2),
        Err(Error::SchemeMismatch { .. })
    ));
}

#[test]
fn headline_operation_counts() {
    let curve = Curve::bench();
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let id = Identity::new(ibekit::scorecard::measure::DEMO_IDENTITY).unwrap();

    let sk = scheme_for(SchemeId::Sk);
    let (params, msk) = sk.setup(&curve, MSG_LEN, &mut rng).unwrap();
    let (_, l) = measure(|| sk.extract(&params, &msk, &id, &mut rng).unwrap());
    assert_eq!(l.top.get(Op::ZInv), 1);
    assert_eq!(l.top.get(Op::ScalarMul), 1);

    let bb1 = scheme_for(SchemeId::Bb1);
    let (params, msk) = bb1.setup(&curve, MSG_LEN, &mut rng).unwrap();
    let key = bb1.extract(&params, &msk, &id, &mut rng).unwrap();
    let m = random_message(&params, &mut rng).unwrap();
    let ct = bb1.encrypt(&params, &id, &m, &mut rng).unwrap();
    let (_, l) = measure(|| bb1.decrypt(&params, &key, &ct).unwrap());
    assert_eq!(l.top.get(Op::RatioPairing), 1);
    assert_eq!(l.top.get(Op::Pairing), 0);
    assert_eq!(l.all.get(Op::MillerLoop), 2);
    assert_eq!(l.all.get(Op::FinalExp), 1);

    let runs = ibekit::scorecard::measure::measure_our(&curve, &mut rng).unwrap();
    let dec = runs.iter().find(|r| r.phase() == Phase::Decrypt).unwrap();
    assert_eq!(dec.ledger().top.get(Op::Pairing), 1);
    assert_eq!(dec.ledger().all.get(Op::Pairing), 1);
    assert_eq!(dec.ledger().all.get(Op::RatioPairing), 0);
}
