//! Sakai-Kasahara with the Fujisaki-Okamoto transform, after Chen and
//! Cheng. `H1` maps identities into `Z_r`; keys are
//! `d = 1/(s + H1(ID)) P2` with `P2 = P1`, and `g = e(P1, P2)` is
//! published so encryption needs no pairing.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand_core::RngCore;

use super::*;
use crate::pairing::pairing;

pub struct Sk;

fn h1(curve: &Curve, id: &Identity) -> BigUint {
    curve.hash_to_scalar("sk-H1", &[&id.to_bytes()])
}

fn h3(curve: &Curve, sigma: &[u8], m: &[u8]) -> BigUint {
    hash_nonzero(curve, "sk-H3", &[sigma, m])
}

impl Ibe for Sk {
    fn id(&self) -> SchemeId {
        SchemeId::Sk
    }

    fn domain(&self) -> MessageDomain {
        MessageDomain::Bytes
    }

    fn setup(&self, curve: &Arc<Curve>, msg_len: usize, rng: &mut dyn RngCore) -> Result<(Params, MasterSecret)> {
        check_msg_len(msg_len)?;
        let s = curve.random_scalar(rng);
        let p1 = curve.generator();
        let ppub = p1.mul(&s);
        let g = pairing(&p1, &p1)?;
        let params = Params {
            scheme: SchemeId::Sk,
            curve: Arc::clone(curve),
            elements: ElementMap::new()
                .with("P1", Element::Point(p1))
                .with("P_pub", Element::Point(ppub))
                .with("g", Element::Gt(g))
                .with("n", Element::Int(msg_len as u64)),
        };
        let msk = MasterSecret {
            scheme: SchemeId::Sk,
            elements: ElementMap::new().with("s", Element::Scalar(s)),
        };
        Ok((params, msk))
    }

    fn extract(&self, params: &Params, msk: &MasterSecret, id: &Identity, _rng: &mut dyn RngCore) -> Result<UserKey> {
        expect_scheme(SchemeId::Sk, params.scheme)?;
        expect_scheme(SchemeId::Sk, msk.scheme)?;
        let curve = &params.curve;
        let t = curve.fr().add(msk.elements.scalar("s")?, &h1(curve, id));
        if t.is_zero() {
            return Err(Error::ExtractAbort);
        }
        let inv = curve.fr().inv(&t).ok_or(Error::ExtractAbort)?;
        let d = params.elements.point("P1")?.mul(&inv);
        Ok(UserKey {
            scheme: SchemeId::Sk,
            identity: id.clone(),
            elements: ElementMap::new().with("d", Element::Point(d)),
        })
    }

    fn encrypt(&self, params: &Params, id: &Identity, msg: &Message, rng: &mut dyn RngCore) -> Result<Ciphertext> {
        expect_scheme(SchemeId::Sk, params.scheme)?;
        let curve = &params.curve;
        let n = params.msg_len()?;
        let m = msg.as_bytes()?;
        if m.len() != n {
            return Err(Error::MessageLength {
                expected: n,
                got: m.len(),
            });
        }
        let mut sigma = vec![0u8; n];
        rng.fill_bytes(&mut sigma);
        let r = h3(curve, &sigma, m);
        let q = params
            .elements
            .point("P1")?
            .mul(&h1(curve, id))
            .add(params.elements.point("P_pub")?);
        let u = q.mul(&r);
        let gr = params.elements.gt("g")?.pow(&r);
        let v = xored(&sigma, &mask("sk-H2", &gr.to_bytes(), n));
        let w = xored(m, &mask("sk-H4", &sigma, n));
        Ok(Ciphertext {
            scheme: SchemeId::Sk,
            parts: ElementMap::new()
                .with("U", Element::Point(u))
                .with("V", Element::Bytes(v))
                .with("W", Element::Bytes(w)),
        })
    }

    fn decrypt(&self, params: &Params, key: &UserKey, ct: &Ciphertext) -> Result<Message> {
        expect_scheme(SchemeId::Sk, params.scheme)?;
        expect_scheme(SchemeId::Sk, key.scheme)?;
        expect_scheme(SchemeId::Sk, ct.scheme)?;
        let curve = &params.curve;
        let n = params.msg_len()?;
        let u = ct.parts.point("U")?;
        same_curve(params, u.curve())?;
        let v = bytes_of(&ct.parts, "V", n)?;
        let w = bytes_of(&ct.parts, "W", n)?;
        let k = pairing(u, key.elements.point("d")?)?;
        let sigma = xored(&v, &mask("sk-H2", &k.to_bytes(), n));
        let m = xored(&w, &mask("sk-H4", &sigma, n));
        let r = h3(curve, &sigma, &m);
        // U = r (H1(ID) P1 + P_pub) as one two-term multiplication.
        let rh = curve.fr().mul(&r, &h1(curve, &key.identity));
        let expect = Point::msm(
            curve,
            &[
                (&rh, params.elements.point("P1")?),
                (&r, params.elements.point("P_pub")?),
            ],
        )?;
        if expect != *u {
            return Err(Error::Rejected);
        }
        Ok(Message::Bytes(m))
    }

    fn validate_key(&self, params: &Params, key: &UserKey) -> Result<bool> {
        let curve = &params.curve;
        let q = params
            .elements
            .point("P1")?
            .mul(&h1(curve, &key.identity))
            .add(params.elements.point("P_pub")?);
        Ok(pairing(&q, key.elements.point("d")?)? == *params.elements.gt("g")?)
    }

    fn public_names(&self) -> &'static [&'static str] {
        &["P1", "P_pub", "g", "n"]
    }

    fn key_names(&self) -> &'static [&'static str] {
        &["d"]
    }

    fn ciphertext_names(&self) -> &'static [&'static str] {
        &["U", "V", "W"]
    }

    fn identity_bound_parts(&self) -> &'static [&'static str] {
        &["U"]
    }

    fn checks_validity(&self) -> bool {
        true
    }
}
