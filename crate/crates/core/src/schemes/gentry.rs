//! Gentry's IBE, full (CCA) version.
//!
//! Keys are `h_{ID,i} = (h_i - r_{ID,i} g) / (alpha - ID)` for
//! `i = 1, 2, 3`, published alongside `r_{ID,i}`. Encryption produces
//! `(u, v, w, y)` with `y = v2^s v3^{s beta}` and `beta = H(u, v, w)`.
//! The hash `H` is the crate's domain-separated hash. `v0..v3` are
//! published so encryption needs no pairing.

use std::sync::Arc;

use num_bigint::BigUint;
use rand_core::RngCore;

use super::*;
use crate::pairing::pairing;

pub struct Gentry;

const H_NAMES: [&str; 3] = ["h1", "h2", "h3"];
const V_NAMES: [&str; 3] = ["v1", "v2", "v3"];
const R_NAMES: [&str; 3] = ["r1", "r2", "r3"];
const K_NAMES: [&str; 3] = ["k1", "k2", "k3"];

fn h_id(curve: &Curve, id: &Identity) -> BigUint {
    curve.hash_to_scalar("gentry-H1", &[&id.to_bytes()])
}

fn beta(curve: &Curve, u: &Point, v: &Gt, w: &Gt) -> BigUint {
    curve.hash_to_scalar("gentry-H", &[&u.to_bytes(), &v.to_bytes(), &w.to_bytes()])
}

impl Ibe for Gentry {
    fn id(&self) -> SchemeId {
        SchemeId::Gentry
    }

    fn domain(&self) -> MessageDomain {
        MessageDomain::Gt
    }

    fn setup(&self, curve: &Arc<Curve>, _msg_len: usize, rng: &mut dyn RngCore) -> Result<(Params, MasterSecret)> {
        let alpha = curve.random_scalar(rng);
        let g = curve.generator();
        let g1 = g.mul(&alpha);
        let hs: Vec<Point> = (0..3).map(|_| random_subgroup_point(curve, rng)).collect();
        let mut elements = ElementMap::new()
            .with("g", Element::Point(g.clone()))
            .with("g1", Element::Point(g1))
            .with("v0", Element::Gt(pairing(&g, &g)?));
        for (i, h) in hs.iter().enumerate() {
            elements.set(H_NAMES[i], Element::Point(h.clone()));
        }
        for (i, h) in hs.iter().enumerate() {
            elements.set(V_NAMES[i], Element::Gt(pairing(&g, h)?));
        }
        let params = Params {
            scheme: SchemeId::Gentry,
            curve: Arc::clone(curve),
            elements,
        };
        let msk = MasterSecret {
            scheme: SchemeId::Gentry,
            elements: ElementMap::new().with("alpha", Element::Scalar(alpha)),
        };
        Ok((params, msk))
    }

    fn extract(&self, params: &Params, msk: &MasterSecret, id: &Identity, rng: &mut dyn RngCore) -> Result<UserKey> {
        expect_scheme(SchemeId::Gentry, params.scheme)?;
        expect_scheme(SchemeId::Gentry, msk.scheme)?;
        let curve = &params.curve;
        let fr = curve.fr();
        let e = &params.elements;
        let diff = fr.sub(msk.elements.scalar("alpha")?, &h_id(curve, id));
        let inv = fr.inv(&diff).ok_or(Error::ExtractAbort)?;
        let g = e.point("g")?;
        let mut elements = ElementMap::new();
        for i in 0..3 {
            let r = fr.random(rng);
            let neg_ri = fr.neg(&fr.mul(&r, &inv));
            let k = Point::msm(curve, &[(&inv, e.point(H_NAMES[i])?), (&neg_ri, g)])?;
            elements.set(R_NAMES[i], Element::Scalar(r));
            elements.set(K_NAMES[i], Element::Point(k));
        }
        Ok(UserKey {
            scheme: SchemeId::Gentry,
            identity: id.clone(),
            elements,
        })
    }

    fn encrypt(&self, params: &Params, id: &Identity, msg: &Message, rng: &mut dyn RngCore) -> Result<Ciphertext> {
        expect_scheme(SchemeId::Gentry, params.scheme)?;
        let curve = &params.curve;
        let fr = curve.fr();
        let e = &params.elements;
        let m = msg.as_gt()?;
        if !m.curve().same(curve) {
            return Err(Error::ContextMismatch);
        }
        let s = curve.random_scalar(rng);
        let neg_sid = fr.neg(&fr.mul(&s, &h_id(curve, id)));
        // u = s (g1 - ID g)
        let u = e.point("g1")?.mul(&s).add(&e.point("g")?.mul(&neg_sid));
        let v = e.gt("v0")?.pow(&s);
        let w = m.mul(&e.gt("v1")?.pow(&s).inv());
        let b = beta(curve, &u, &v, &w);
        let y = e.gt("v2")?.pow(&s).mul(&e.gt("v3")?.pow(&fr.mul(&s, &b)));
        Ok(Ciphertext {
            scheme: SchemeId::Gentry,
            parts: ElementMap::new()
                .with("u", Element::Point(u))
                .with("v", Element::Gt(v))
                .with("w", Element::Gt(w))
                .with("y", Element::Gt(y)),
        })
    }

    fn decrypt(&self, params: &Params, key: &UserKey, ct: &Ciphertext) -> Result<Message> {
        expect_scheme(SchemeId::Gentry, params.scheme)?;
        expect_scheme(SchemeId::Gentry, key.scheme)?;
        expect_scheme(SchemeId::Gentry, ct.scheme)?;
        let curve = &params.curve;
        let fr = curve.fr();
        let k = &key.elements;
        let u = ct.parts.point("u")?;
        same_curve(params, u.curve())?;
        let v = ct.parts.gt("v")?;
        let w = ct.parts.gt("w")?;
        let y = ct.parts.gt("y")?;
        let b = beta(curve, u, v, w);
        let q = k.point("k2")?.add(&k.point("k3")?.mul(&b));
        let exp = fr.add(k.scalar("r2")?, &fr.mul(k.scalar("r3")?, &b));
        let check = pairing(u, &q)?.mul(&v.pow(&exp));
        if check != *y {
            return Err(Error::Rejected);
        }
        let m = w.mul(&pairing(u, k.point("k1")?)?).mul(&v.pow(k.scalar("r1")?));
        Ok(Message::Gt(m))
    }

    fn validate_key(&self, params: &Params, key: &UserKey) -> Result<bool> {
        let curve = &params.curve;
        let e = &params.elements;
        let k = &key.elements;
        let neg_id = curve.fr().neg(&h_id(curve, &key.identity));
        let base = e.point("g1")?.add(&e.point("g")?.mul(&neg_id));
        let v0 = e.gt("v0")?;
        for i in 0..3 {
            let lhs = pairing(&base, k.point(K_NAMES[i])?)?;
            let rhs = e.gt(V_NAMES[i])?.div(&v0.pow(k.scalar(R_NAMES[i])?));
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn public_names(&self) -> &'static [&'static str] {
        &["g", "g1", "v0", "h1", "h2", "h3", "v1", "v2", "v3"]
    }

    fn key_names(&self) -> &'static [&'static str] {
        &["r1", "k1", "r2", "k2", "r3", "k3"]
    }

    fn ciphertext_names(&self) -> &'static [&'static str] {
        &["u", "v", "w", "y"]
    }

    fn identity_bound_parts(&self) -> &'static [&'static str] {
        &[]
    }

    fn checks_validity(&self) -> bool {
        true
    }
}
