//! Exponent-inversion IBE with a single decryption pairing.
//!
//! Params `(g, P_pub = g^l, x = e(g, g), y = x^a)`, master `(l, a)`. A key
//! for `ID` is `(r_ID, D = g^{(a + ID) / (r_ID l)})` and a ciphertext is
//! `(u = P_pub^s, c = m (x^ID y)^s)`, opened as `c / e(u^{r_ID}, D)`.
//!
//! `r_ID` is part of the secret key, never published.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand_core::RngCore;

use crate::codec::{Element, ElementMap, Envelope, Kind};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::identity::Identity;
use crate::pairing::{pairing, Gt};

pub const SCHEME_NAME: &str = "our-ibe";

#[derive(Clone, Debug)]
pub struct OurParams {
    pub curve: Arc<Curve>,
    pub g: Point,
    pub p_pub: Point,
    pub x: Gt,
    pub y: Gt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OurMaster {
    pub l: BigUint,
    pub a: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OurKey {
    pub identity: Identity,
    pub r_id: BigUint,
    pub d: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OurCiphertext {
    pub u: Point,
    pub c: Gt,
}

/// `H1(ID)` in `Z_r`.
pub fn hash_identity(curve: &Curve, id: &Identity) -> BigUint {
    curve.hash_to_scalar("our-H1", &[&id.to_bytes()])
}

pub fn setup(curve: &Arc<Curve>, rng: &mut dyn RngCore) -> Result<(OurParams, OurMaster)> {
    let l = curve.random_scalar(rng);
    let a = curve.random_scalar(rng);
    let g = curve.generator();
    let p_pub = g.mul(&l);
    let x = pairing(&g, &g)?;
    let y = x.pow(&a);
    Ok((
        OurParams {
            curve: Arc::clone(curve),
            g,
            p_pub,
            x,
            y,
        },
        OurMaster { l, a },
    ))
}

/// [`Error::ExtractAbort`] when `a + H1(ID) = 0 mod r`.
pub fn extract(params: &OurParams, msk: &OurMaster, id: &Identity, rng: &mut dyn RngCore) -> Result<OurKey> {
    let curve = &params.curve;
    let fr = curve.fr();
    let num = fr.add(&msk.a, &hash_identity(curve, id));
    if num.is_zero() {
        return Err(Error::ExtractAbort);
    }
    let r_id = curve.random_scalar(rng);
    let den = fr.inv(&fr.mul(&r_id, &msk.l)).ok_or(Error::ZeroInverse)?;
    let d = params.g.mul(&fr.mul(&num, &den));
    Ok(OurKey {
        identity: id.clone(),
        r_id,
        d,
    })
}

pub fn encrypt(params: &OurParams, id: &Identity, m: &Gt, rng: &mut dyn RngCore) -> Result<OurCiphertext> {
    let curve = &params.curve;
    if !m.curve().same(curve) {
        return Err(Error::ContextMismatch);
    }
    let s = curve.random_scalar(rng);
    let u = params.p_pub.mul(&s);
    let base = params.x.pow(&hash_identity(curve, id)).mul(&params.y);
    let c = m.mul(&base.pow(&s));
    Ok(OurCiphertext { u, c })
}

pub fn decrypt(params: &OurParams, key: &OurKey, ct: &OurCiphertext) -> Result<Gt> {
    if !ct.u.curve().same(&params.curve) {
        return Err(Error::ContextMismatch);
    }
    let k = pairing(&ct.u.mul(&key.r_id), &key.d)?;
    Ok(ct.c.div(&k))
}

/// `e(P_pub^{r_ID}, D) = x^ID y`, from public values only.
pub fn validate_key(params: &OurParams, key: &OurKey) -> Result<bool> {
    let lhs = pairing(&params.p_pub.mul(&key.r_id), &key.d)?;
    let rhs = params
        .x
        .pow(&hash_identity(&params.curve, &key.identity))
        .mul(&params.y);
    Ok(lhs == rhs)
}

fn env(kind: Kind, curve: &Curve, identity: Option<&Identity>, elements: ElementMap) -> Envelope {
    Envelope {
        kind,
        scheme: SCHEME_NAME.into(),
        profile: curve.name().into(),
        identity: identity.cloned(),
        elements,
    }
}

impl OurParams {
    pub fn to_envelope(&self) -> Envelope {
        env(
            Kind::Params,
            &self.curve,
            None,
            ElementMap::new()
                .with("g", Element::Point(self.g.clone()))
                .with("P_pub", Element::Point(self.p_pub.clone()))
                .with("x", Element::Gt(self.x.clone()))
                .with("y", Element::Gt(self.y.clone())),
        )
    }

    pub fn from_envelope(e: &Envelope, curve: &Arc<Curve>) -> Result<OurParams> {
        e.expect(Kind::Params, SCHEME_NAME)?;
        let m = &e.elements;
        Ok(OurParams {
            curve: Arc::clone(curve),
            g: m.point("g")?.clone(),
            p_pub: m.point("P_pub")?.clone(),
            x: m.gt("x")?.clone(),
            y: m.gt("y")?.clone(),
        })
    }
}

impl OurMaster {
    pub fn to_envelope(&self, curve: &Curve) -> Envelope {
        env(
            Kind::MasterSecret,
            curve,
            None,
            ElementMap::new()
                .with("l", Element::Scalar(self.l.clone()))
                .with("a", Element::Scalar(self.a.clone())),
        )
    }

    pub fn from_envelope(e: &Envelope) -> Result<OurMaster> {
        e.expect(Kind::MasterSecret, SCHEME_NAME)?;
        Ok(OurMaster {
            l: e.elements.scalar("l")?.clone(),
            a: e.elements.scalar("a")?.clone(),
        })
    }
}

impl OurKey {
    pub fn to_envelope(&self, curve: &Curve) -> Envelope {
        env(
            Kind::UserKey,
            curve,
            Some(&self.identity),
            ElementMap::new()
                .with("r_id", Element::Scalar(self.r_id.clone()))
                .with("D", Element::Point(self.d.clone())),
        )
    }

    pub fn from_envelope(e: &Envelope) -> Result<OurKey> {
        e.expect(Kind::UserKey, SCHEME_NAME)?;
        Ok(OurKey {
            identity: e
                .identity
                .clone()
                .ok_or_else(|| Error::Malformed("user key without identity".into()))?,
            r_id: e.elements.scalar("r_id")?.clone(),
            d: e.elements.point("D")?.clone(),
        })
    }
}

impl OurCiphertext {
    pub fn to_envelope(&self, curve: &Curve) -> Envelope {
        env(
            Kind::Ciphertext,
            curve,
            None,
            ElementMap::new()
                .with("u", Element::Point(self.u.clone()))
                .with("c", Element::Gt(self.c.clone())),
        )
    }

    pub fn from_envelope(e: &Envelope) -> Result<OurCiphertext> {
        e.expect(Kind::Ciphertext, SCHEME_NAME)?;
        if e.elements.len() != 2 {
            return Err(Error::Malformed(format!(
                "ciphertext has {} parts, expected 2",
                e.elements.len()
            )));
        }
        Ok(OurCiphertext {
            u: e.elements.point("u")?.clone(),
            c: e.elements.gt("c")?.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha20Rng;
    use rand_core::SeedableRng;

    #[test]
    fn roundtrip_and_envelopes() {
        let c = Curve::bench();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let (params, msk) = setup(&c, &mut rng).unwrap();
        let id = Identity::new("bob").unwrap();
        let key = extract(&params, &msk, &id, &mut rng).unwrap();
        assert!(validate_key(&params, &key).unwrap());
        let m = Gt::random(&c, &mut rng);
        let ct = encrypt(&params, &id, &m, &mut rng).unwrap();
        assert_eq!(decrypt(&params, &key, &ct).unwrap(), m);

        let p2 = OurParams::from_envelope(&params.to_envelope(), &c).unwrap();
        assert_eq!(p2.to_envelope(), params.to_envelope());
        assert_eq!(OurKey::from_envelope(&key.to_envelope(&c)).unwrap(), key);
        assert_eq!(OurCiphertext::from_envelope(&ct.to_envelope(&c)).unwrap(), ct);
        assert_eq!(OurMaster::from_envelope(&msk.to_envelope(&c)).unwrap(), msk);
    }
}
