//! Boneh-Boyen commutative-blinding IBE, full version.
//!
//! Params `(P, P1 = alpha P, P2 = beta P, v0 = e(P, P_hat)^omega)` with
//! `P_hat = P` under the symmetric pairing. The ciphertext binds
//! `t = s + H3(k, c, c0, c1) mod r`, and decryption recomputes `k` and `s`
//! and checks `(k, c0) = (v0^s, sP)`.

use std::sync::Arc;

use num_bigint::BigUint;
use rand_core::RngCore;

use super::*;
use crate::pairing::{pairing, pairing_ratio};

pub struct Bb1;

fn h1(curve: &Curve, id: &Identity) -> BigUint {
    curve.hash_to_scalar("bb1-H1", &[&id.to_bytes()])
}

fn h3(curve: &Curve, k: &Gt, c: &[u8], c0: &Point, c1: &Point) -> BigUint {
    curve.hash_to_scalar("bb1-H3", &[&k.to_bytes(), c, &c0.to_bytes(), &c1.to_bytes()])
}

impl Ibe for Bb1 {
    fn id(&self) -> SchemeId {
        SchemeId::Bb1
    }

    fn domain(&self) -> MessageDomain {
        MessageDomain::Bytes
    }

    fn setup(&self, curve: &Arc<Curve>, msg_len: usize, rng: &mut dyn RngCore) -> Result<(Params, MasterSecret)> {
        check_msg_len(msg_len)?;
        let alpha = curve.random_scalar(rng);
        let beta = curve.random_scalar(rng);
        let omega = curve.random_scalar(rng);
        let p = curve.generator();
        let p1 = p.mul(&alpha);
        let p2 = p.mul(&beta);
        let v0 = pairing(&p, &p)?.pow(&omega);
        let params = Params {
            scheme: SchemeId::Bb1,
            curve: Arc::clone(curve),
            elements: ElementMap::new()
                .with("P", Element::Point(p.clone()))
                .with("P1", Element::Point(p1))
                .with("P2", Element::Point(p2))
                .with("v0", Element::Gt(v0))
                .with("n", Element::Int(msg_len as u64)),
        };
        let msk = MasterSecret {
            scheme: SchemeId::Bb1,
            elements: ElementMap::new()
                .with("P_hat", Element::Point(p))
                .with("omega", Element::Scalar(omega))
                .with("alpha", Element::Scalar(alpha))
                .with("beta", Element::Scalar(beta)),
        };
        Ok((params, msk))
    }

    fn extract(&self, params: &Params, msk: &MasterSecret, id: &Identity, rng: &mut dyn RngCore) -> Result<UserKey> {
        expect_scheme(SchemeId::Bb1, params.scheme)?;
        expect_scheme(SchemeId::Bb1, msk.scheme)?;
        let curve = &params.curve;
        let fr = curve.fr();
        let s = &msk.elements;
        let r = curve.random_scalar(rng);
        let ah_b = fr.add(&fr.mul(s.scalar("alpha")?, &h1(curve, id)), s.scalar("beta")?);
        let e0 = fr.add(s.scalar("omega")?, &fr.mul(&ah_b, &r));
        let p_hat = s.point("P_hat")?;
        Ok(UserKey {
            scheme: SchemeId::Bb1,
            identity: id.clone(),
            elements: ElementMap::new()
                .with("d0", Element::Point(p_hat.mul(&e0)))
                .with("d1", Element::Point(p_hat.mul(&r))),
        })
    }

    fn encrypt(&self, params: &Params, id: &Identity, msg: &Message, rng: &mut dyn RngCore) -> Result<Ciphertext> {
        expect_scheme(SchemeId::Bb1, params.scheme)?;
        let curve = &params.curve;
        let e = &params.elements;
        let n = params.msg_len()?;
        let m = msg.as_bytes()?;
        if m.len() != n {
            return Err(Error::MessageLength {
                expected: n,
                got: m.len(),
            });
        }
        let s = curve.random_scalar(rng);
        let k = e.gt("v0")?.pow(&s);
        let c = xored(m, &mask("bb1-H2", &k.to_bytes(), n));
        let c0 = e.point("P")?.mul(&s);
        let hs = curve.fr().mul(&h1(curve, id), &s);
        let c1 = e.point("P1")?.mul(&hs).add(&e.point("P2")?.mul(&s));
        let t = curve.fr().add(&s, &h3(curve, &k, &c, &c0, &c1));
        Ok(Ciphertext {
            scheme: SchemeId::Bb1,
            parts: ElementMap::new()
                .with("c", Element::Bytes(c))
                .with("c0", Element::Point(c0))
                .with("c1", Element::Point(c1))
                .with("t", Element::Scalar(t)),
        })
    }

    fn decrypt(&self, params: &Params, key: &UserKey, ct: &Ciphertext) -> Result<Message> {
        expect_scheme(SchemeId::Bb1, params.scheme)?;
        expect_scheme(SchemeId::Bb1, key.scheme)?;
        expect_scheme(SchemeId::Bb1, ct.scheme)?;
        let curve = &params.curve;
        let e = &params.elements;
        let n = params.msg_len()?;
        let c = bytes_of(&ct.parts, "c", n)?;
        let c0 = ct.parts.point("c0")?;
        let c1 = ct.parts.point("c1")?;
        same_curve(params, c0.curve())?;
        same_curve(params, c1.curve())?;
        let t = ct.parts.scalar("t")?;
        let k = pairing_ratio(c0, key.elements.point("d0")?, c1, key.elements.point("d1")?)?;
        let s = curve.fr().sub(&curve.fr().reduce(t), &h3(curve, &k, &c, c0, c1));
        // Both checks always run so a rejection says nothing about which failed.
        let k_ok = e.gt("v0")?.pow(&s) == k;
        let c0_ok = e.point("P")?.mul(&s) == *c0;
        if !(k_ok & c0_ok) {
            return Err(Error::Rejected);
        }
        Ok(Message::Bytes(xored(&c, &mask("bb1-H2", &k.to_bytes(), n))))
    }

    fn validate_key(&self, params: &Params, key: &UserKey) -> Result<bool> {
        let curve = &params.curve;
        let e = &params.elements;
        let q = e.point("P1")?.mul(&h1(curve, &key.identity)).add(e.point("P2")?);
        let lhs = pairing(e.point("P")?, key.elements.point("d0")?)?;
        let rhs = e.gt("v0")?.mul(&pairing(&q, key.elements.point("d1")?)?);
        Ok(lhs == rhs)
    }

    fn public_names(&self) -> &'static [&'static str] {
        &["P", "P1", "P2", "v0", "n"]
    }

    fn key_names(&self) -> &'static [&'static str] {
        &["d0", "d1"]
    }

    fn ciphertext_names(&self) -> &'static [&'static str] {
        &["c", "c0", "c1", "t"]
    }

    fn identity_bound_parts(&self) -> &'static [&'static str] {
        &["c1"]
    }

    fn checks_validity(&self) -> bool {
        true
    }
}
