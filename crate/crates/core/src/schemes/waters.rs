//! Waters' IBE with Naccache's word-sized identity blocks (CPA).
//!
//! The identity hash is cut into [`WATERS_WORDS`] words of 32 bits and
//! `V(ID) = u' + sum v_i u_i`. With `g2` in the same group as `g`, the
//! pairing `e(g1, g2)` is symmetric. The master secret is kept as `alpha`
//! and `alpha g2` is recomputed per extraction.

use std::sync::Arc;

use num_bigint::BigUint;
use rand_core::RngCore;

use super::*;
use crate::hash;
use crate::pairing::{pairing, pairing_ratio};

pub struct Waters;

/// Words per identity.
pub const WATERS_WORDS: usize = 4;

const U_NAMES: [&str; WATERS_WORDS] = ["u0", "u1", "u2", "u3"];

/// The identity's 32-bit words.
pub fn words(id: &Identity) -> Vec<BigUint> {
    hash::expand("waters-words", &[&id.to_bytes()], 4 * WATERS_WORDS)
        .chunks(4)
        .map(|w| BigUint::from(u32::from_be_bytes(w.try_into().expect("4 bytes"))))
        .collect()
}

fn v_of(params: &Params, id: &Identity) -> Result<Point> {
    let e = &params.elements;
    let one = BigUint::from(1u8);
    let ws = words(id);
    let mut terms: Vec<(&BigUint, &Point)> = vec![(&one, e.point("u_prime")?)];
    for (w, name) in ws.iter().zip(U_NAMES) {
        terms.push((w, e.point(name)?));
    }
    Point::msm(&params.curve, &terms)
}

impl Ibe for Waters {
    fn id(&self) -> SchemeId {
        SchemeId::Waters
    }

    fn domain(&self) -> MessageDomain {
        MessageDomain::Gt
    }

    fn setup(&self, curve: &Arc<Curve>, _msg_len: usize, rng: &mut dyn RngCore) -> Result<(Params, MasterSecret)> {
        let alpha = curve.random_scalar(rng);
        let g = curve.generator();
        let g2 = random_subgroup_point(curve, rng);
        let u_prime = random_subgroup_point(curve, rng);
        let g1 = g.mul(&alpha);
        let v = pairing(&g1, &g2)?;
        let mut elements = ElementMap::new()
            .with("g", Element::Point(g))
            .with("g1", Element::Point(g1))
            .with("g2", Element::Point(g2))
            .with("u_prime", Element::Point(u_prime));
        for name in U_NAMES {
            elements.set(name, Element::Point(random_subgroup_point(curve, rng)));
        }
        elements.set("v", Element::Gt(v));
        let params = Params {
            scheme: SchemeId::Waters,
            curve: Arc::clone(curve),
            elements,
        };
        let msk = MasterSecret {
            scheme: SchemeId::Waters,
            elements: ElementMap::new().with("alpha", Element::Scalar(alpha)),
        };
        Ok((params, msk))
    }

    fn extract(&self, params: &Params, msk: &MasterSecret, id: &Identity, rng: &mut dyn RngCore) -> Result<UserKey> {
        expect_scheme(SchemeId::Waters, params.scheme)?;
        expect_scheme(SchemeId::Waters, msk.scheme)?;
        let e = &params.elements;
        let ag2 = e.point("g2")?.mul(msk.elements.scalar("alpha")?);
        let v = v_of(params, id)?;
        let r = params.curve.random_scalar(rng);
        let d1 = ag2.add(&v.mul(&r));
        let d2 = e.point("g")?.mul(&r);
        Ok(UserKey {
            scheme: SchemeId::Waters,
            identity: id.clone(),
            elements: ElementMap::new()
                .with("d1", Element::Point(d1))
                .with("d2", Element::Point(d2)),
        })
    }

    fn encrypt(&self, params: &Params, id: &Identity, msg: &Message, rng: &mut dyn RngCore) -> Result<Ciphertext> {
        expect_scheme(SchemeId::Waters, params.scheme)?;
        let curve = &params.curve;
        let e = &params.elements;
        let m = msg.as_gt()?;
        if !m.curve().same(curve) {
            return Err(Error::ContextMismatch);
        }
        let t = curve.random_scalar(rng);
        let c1 = e.gt("v")?.pow(&t).mul(m);
        let c2 = e.point("g")?.mul(&t);
        let c3 = v_of(params, id)?.mul(&t);
        Ok(Ciphertext {
            scheme: SchemeId::Waters,
            parts: ElementMap::new()
                .with("c1", Element::Gt(c1))
                .with("c2", Element::Point(c2))
                .with("c3", Element::Point(c3)),
        })
    }

    fn decrypt(&self, params: &Params, key: &UserKey, ct: &Ciphertext) -> Result<Message> {
        expect_scheme(SchemeId::Waters, params.scheme)?;
        expect_scheme(SchemeId::Waters, key.scheme)?;
        expect_scheme(SchemeId::Waters, ct.scheme)?;
        let c1 = ct.parts.gt("c1")?;
        let c2 = ct.parts.point("c2")?;
        let c3 = ct.parts.point("c3")?;
        same_curve(params, c2.curve())?;
        same_curve(params, c3.curve())?;
        // e(d2, c3) / e(d1, c2) = v^{-t}
        let k = pairing_ratio(key.elements.point("d2")?, c3, key.elements.point("d1")?, c2)?;
        Ok(Message::Gt(c1.mul(&k)))
    }

    fn validate_key(&self, params: &Params, key: &UserKey) -> Result<bool> {
        let e = &params.elements;
        let v = v_of(params, &key.identity)?;
        let q = pairing_ratio(e.point("g")?, key.elements.point("d1")?, key.elements.point("d2")?, &v)?;
        Ok(q == *e.gt("v")?)
    }

    fn public_names(&self) -> &'static [&'static str] {
        &["g", "g1", "g2", "u_prime", "u0", "u1", "u2", "u3", "v"]
    }

    fn key_names(&self) -> &'static [&'static str] {
        &["d1", "d2"]
    }

    fn ciphertext_names(&self) -> &'static [&'static str] {
        &["c1", "c2", "c3"]
    }

    fn identity_bound_parts(&self) -> &'static [&'static str] {
        &["c3"]
    }

    fn checks_validity(&self) -> bool {
        false
    }
}
