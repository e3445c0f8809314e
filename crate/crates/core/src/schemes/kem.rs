//! Hybrid mode for arbitrary-length payloads.
//!
//! A fresh random message in the scheme's own domain (a `G_T` element or
//! a byte string of the setup length) is encrypted as a session key, and
//! the payload is XORed with a mask expanded from it. The masked payload
//! travels as an extra `kem_payload` part.

use rand_core::RngCore;

use super::*;

const PAYLOAD: &str = "kem_payload";

fn session_mask(scheme: SchemeId, session: &Message, len: usize) -> Vec<u8> {
    hash::expand("kem", &[scheme.name().as_bytes(), &session.to_bytes()], len)
}

pub fn encrypt(params: &Params, id: &Identity, payload: &[u8], rng: &mut dyn RngCore) -> Result<Ciphertext> {
    let scheme = scheme_for(params.scheme);
    let session = random_message(params, rng)?;
    let mut ct = scheme.encrypt(params, id, &session, rng)?;
    let body = xored(payload, &session_mask(params.scheme, &session, payload.len()));
    ct.parts.set(PAYLOAD, Element::Bytes(body));
    Ok(ct)
}

pub fn decrypt(params: &Params, key: &UserKey, ct: &Ciphertext) -> Result<Vec<u8>> {
    let mut inner = ct.clone();
    let body = match inner.parts.remove(PAYLOAD) {
        Some(Element::Bytes(b)) => b,
        Some(_) => return Err(Error::ElementType(PAYLOAD.into())),
        None => return Err(Error::MissingElement(PAYLOAD.into())),
    };
    let session = scheme_for(params.scheme).decrypt(params, key, &inner)?;
    Ok(xored(&body, &session_mask(params.scheme, &session, body.len())))
}
