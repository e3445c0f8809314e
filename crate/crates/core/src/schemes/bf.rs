//! Boneh-Franklin with the Fujisaki-Okamoto transform, in Galindo's full
//! version: `C = <rP1, sigma xor H2(g_ID^r), M xor H4(sigma)>` with
//! `r = H3(sigma, M)`.
//!
//! `Q_pub = s P2` and `P_pub = psi(Q_pub)` coincide here, so the public key
//! is the single point `P_pub = s P1`. Decryption re-derives `r` and checks
//! `U = r P1`.

use std::sync::Arc;

use num_bigint::BigUint;
use rand_core::RngCore;

use super::*;
use crate::pairing::pairing;

pub struct Bf;

fn h3(curve: &Curve, sigma: &[u8], m: &[u8]) -> BigUint {
    hash_nonzero(curve, "bf-H3", &[sigma, m])
}

fn q_id(curve: &Arc<Curve>, id: &Identity) -> Result<Point> {
    curve.map_to_point(&id.to_bytes())
}

impl Ibe for Bf {
    fn id(&self) -> SchemeId {
        SchemeId::Bf
    }

    fn domain(&self) -> MessageDomain {
        MessageDomain::Bytes
    }

    fn setup(&self, curve: &Arc<Curve>, msg_len: usize, rng: &mut dyn RngCore) -> Result<(Params, MasterSecret)> {
        check_msg_len(msg_len)?;
        let s = curve.random_scalar(rng);
        let p1 = curve.generator();
        let ppub = p1.mul(&s);
        let params = Params {
            scheme: SchemeId::Bf,
            curve: Arc::clone(curve),
            elements: ElementMap::new()
                .with("P1", Element::Point(p1))
                .with("P_pub", Element::Point(ppub))
                .with("n", Element::Int(msg_len as u64)),
        };
        let msk = MasterSecret {
            scheme: SchemeId::Bf,
            elements: ElementMap::new().with("s", Element::Scalar(s)),
        };
        Ok((params, msk))
    }

    fn extract(&self, params: &Params, msk: &MasterSecret, id: &Identity, _rng: &mut dyn RngCore) -> Result<UserKey> {
        expect_scheme(SchemeId::Bf, params.scheme)?;
        expect_scheme(SchemeId::Bf, msk.scheme)?;
        let d = q_id(&params.curve, id)?.mul(msk.elements.scalar("s")?);
        Ok(UserKey {
            scheme: SchemeId::Bf,
            identity: id.clone(),
            elements: ElementMap::new().with("d", Element::Point(d)),
        })
    }

    fn encrypt(&self, params: &Params, id: &Identity, msg: &Message, rng: &mut dyn RngCore) -> Result<Ciphertext> {
        expect_scheme(SchemeId::Bf, params.scheme)?;
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
        let q = q_id(curve, id)?;
        let u = params.elements.point("P1")?.mul(&r);
        let g_id = pairing(params.elements.point("P_pub")?, &q)?;
        let v = xored(&sigma, &mask("bf-H2", &g_id.pow(&r).to_bytes(), n));
        let w = xored(m, &mask("bf-H4", &sigma, n));
        Ok(Ciphertext {
            scheme: SchemeId::Bf,
            parts: ElementMap::new()
                .with("U", Element::Point(u))
                .with("V", Element::Bytes(v))
                .with("W", Element::Bytes(w)),
        })
    }

    fn decrypt(&self, params: &Params, key: &UserKey, ct: &Ciphertext) -> Result<Message> {
        expect_scheme(SchemeId::Bf, params.scheme)?;
        expect_scheme(SchemeId::Bf, key.scheme)?;
        expect_scheme(SchemeId::Bf, ct.scheme)?;
        let curve = &params.curve;
        let n = params.msg_len()?;
        let u = ct.parts.point("U")?;
        same_curve(params, u.curve())?;
        let v = bytes_of(&ct.parts, "V", n)?;
        let w = bytes_of(&ct.parts, "W", n)?;
        let k = pairing(u, key.elements.point("d")?)?;
        let sigma = xored(&v, &mask("bf-H2", &k.to_bytes(), n));
        let m = xored(&w, &mask("bf-H4", &sigma, n));
        let r = h3(curve, &sigma, &m);
        if params.elements.point("P1")?.mul(&r) != *u {
            return Err(Error::Rejected);
        }
        Ok(Message::Bytes(m))
    }

    fn validate_key(&self, params: &Params, key: &UserKey) -> Result<bool> {
        let q = q_id(&params.curve, &key.identity)?;
        let lhs = pairing(params.elements.point("P1")?, key.elements.point("d")?)?;
        Ok(lhs == pairing(params.elements.point("P_pub")?, &q)?)
    }

    fn public_names(&self) -> &'static [&'static str] {
        &["P1", "P_pub", "n"]
    }

    fn key_names(&self) -> &'static [&'static str] {
        &["d"]
    }

    fn ciphertext_names(&self) -> &'static [&'static str] {
        &["U", "V", "W"]
    }

    fn identity_bound_parts(&self) -> &'static [&'static str] {
        &[]
    }

    fn checks_validity(&self) -> bool {
        true
    }
}
