//! Boneh-Boyen exponent-inversion IBE, CPA version, with the key split
//! into a published `r` and the point `d = -1/(a + ID + b r) P_hat`.
//!
//! `P_hat = P` under the symmetric pairing. The minus sign lets
//! decryption multiply by `e(c1 + r c2, d) = v^{-s}` instead of dividing.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand_core::RngCore;

use super::*;
use crate::pairing::pairing;

pub struct Bb2;

fn h1(curve: &Curve, id: &Identity) -> BigUint {
    curve.hash_to_scalar("bb2-H1", &[&id.to_bytes()])
}

impl Ibe for Bb2 {
    fn id(&self) -> SchemeId {
        SchemeId::Bb2
    }

    fn domain(&self) -> MessageDomain {
        MessageDomain::Gt
    }

    fn setup(&self, curve: &Arc<Curve>, _msg_len: usize, rng: &mut dyn RngCore) -> Result<(Params, MasterSecret)> {
        let a = curve.random_scalar(rng);
        let b = curve.random_scalar(rng);
        let p = curve.generator();
        let pa = p.mul(&a);
        let pb = p.mul(&b);
        let v = pairing(&p, &p)?;
        let params = Params {
            scheme: SchemeId::Bb2,
            curve: Arc::clone(curve),
            elements: ElementMap::new()
                .with("P", Element::Point(p))
                .with("P_a", Element::Point(pa))
                .with("P_b", Element::Point(pb))
                .with("v", Element::Gt(v)),
        };
        let msk = MasterSecret {
            scheme: SchemeId::Bb2,
            elements: ElementMap::new()
                .with("a", Element::Scalar(a))
                .with("b", Element::Scalar(b)),
        };
        Ok((params, msk))
    }

    fn extract(&self, params: &Params, msk: &MasterSecret, id: &Identity, rng: &mut dyn RngCore) -> Result<UserKey> {
        expect_scheme(SchemeId::Bb2, params.scheme)?;
        expect_scheme(SchemeId::Bb2, msk.scheme)?;
        let curve = &params.curve;
        let fr = curve.fr();
        let a_id = fr.add(msk.elements.scalar("a")?, &h1(curve, id));
        let b = msk.elements.scalar("b")?;
        // A zero denominator depends on r alone, so draw r again.
        let (r, den) = loop {
            let r = curve.random_scalar(rng);
            let den = fr.add(&a_id, &fr.mul(b, &r));
            if !den.is_zero() {
                break (r, den);
            }
        };
        let inv = fr.neg(&fr.inv(&den).expect("nonzero"));
        let d = params.elements.point("P")?.mul(&inv);
        Ok(UserKey {
            scheme: SchemeId::Bb2,
            identity: id.clone(),
            elements: ElementMap::new()
                .with("r", Element::Scalar(r))
                .with("d", Element::Point(d)),
        })
    }

    fn encrypt(&self, params: &Params, id: &Identity, msg: &Message, rng: &mut dyn RngCore) -> Result<Ciphertext> {
        expect_scheme(SchemeId::Bb2, params.scheme)?;
        let curve = &params.curve;
        let e = &params.elements;
        let m = msg.as_gt()?;
        if !m.curve().same(curve) {
            return Err(Error::ContextMismatch);
        }
        let s = curve.random_scalar(rng);
        let c0 = m.mul(&e.gt("v")?.pow(&s));
        let sid = curve.fr().mul(&s, &h1(curve, id));
        let c1 = e.point("P_a")?.mul(&s).add(&e.point("P")?.mul(&sid));
        let c2 = e.point("P_b")?.mul(&s);
        Ok(Ciphertext {
            scheme: SchemeId::Bb2,
            parts: ElementMap::new()
                .with("c0", Element::Gt(c0))
                .with("c1", Element::Point(c1))
                .with("c2", Element::Point(c2)),
        })
    }

    fn decrypt(&self, params: &Params, key: &UserKey, ct: &Ciphertext) -> Result<Message> {
        expect_scheme(SchemeId::Bb2, params.scheme)?;
        expect_scheme(SchemeId::Bb2, key.scheme)?;
        expect_scheme(SchemeId::Bb2, ct.scheme)?;
        let c0 = ct.parts.gt("c0")?;
        let c1 = ct.parts.point("c1")?;
        let c2 = ct.parts.point("c2")?;
        same_curve(params, c1.curve())?;
        same_curve(params, c2.curve())?;
        let q = c1.add(&c2.mul(key.elements.scalar("r")?));
        Ok(Message::Gt(c0.mul(&pairing(&q, key.elements.point("d")?)?)))
    }

    fn validate_key(&self, params: &Params, key: &UserKey) -> Result<bool> {
        let curve = &params.curve;
        let e = &params.elements;
        let q = e
            .point("P_a")?
            .add(&e.point("P")?.mul(&h1(curve, &key.identity)))
            .add(&e.point("P_b")?.mul(key.elements.scalar("r")?));
        Ok(pairing(&q, key.elements.point("d")?)? == e.gt("v")?.inv())
    }

    fn public_names(&self) -> &'static [&'static str] {
        &["P", "P_a", "P_b", "v"]
    }

    fn key_names(&self) -> &'static [&'static str] {
        &["r", "d"]
    }

    fn ciphertext_names(&self) -> &'static [&'static str] {
        &["c0", "c1", "c2"]
    }

    fn identity_bound_parts(&self) -> &'static [&'static str] {
        &["c1"]
    }

    fn checks_validity(&self) -> bool {
        false
    }
}
