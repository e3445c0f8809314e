//! Domain-separated hashing.
//!
//! One extendable-output construction backs every random oracle: SHA-256 in
//! counter mode over a length-prefixed encoding of the domain tag and the
//! input parts.

use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use crate::field::PrimeField;

/// Expand `(domain, parts)` into `len` pseudorandom bytes.
pub fn expand(domain: &str, parts: &[&[u8]], len: usize) -> Vec<u8> {
    let mut prefix = Sha256::new();
    prefix.update((domain.len() as u32).to_be_bytes());
    prefix.update(domain.as_bytes());
    prefix.update((parts.len() as u32).to_be_bytes());
    for part in parts {
        prefix.update((part.len() as u64).to_be_bytes());
        prefix.update(part);
    }
    let mut out = Vec::with_capacity(len.div_ceil(32) * 32);
    let mut counter = 0u32;
    while out.len() < len {
        let mut h = prefix.clone();
        h.update(counter.to_be_bytes());
        out.extend_from_slice(h.finalize().as_slice());
        counter += 1;
    }
    out.truncate(len);
    out
}

/// Hash to a residue modulo the field's prime, with 128 bits of slack so the
/// reduction bias is negligible.
pub fn to_residue(field: &PrimeField, domain: &str, parts: &[&[u8]]) -> BigUint {
    let bytes = expand(domain, parts, field.byte_len() + 16);
    BigUint::from_bytes_be(&bytes) % field.modulus()
}

/// XOR `mask` into `data` in place.
pub fn xor_into(data: &mut [u8], mask: &[u8]) {
    for (d, m) in data.iter_mut().zip(mask) {
        *d ^= m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains_separate() {
        let a = expand("H2", &[b"x"], 40);
        let b = expand("H4", &[b"x"], 40);
        assert_ne!(a, b);
        assert_eq!(a.len(), 40);
        assert_eq!(&expand("H2", &[b"x"], 20)[..], &a[..20]);
    }

    #[test]
    fn part_boundaries_matter() {
        assert_ne!(expand("t", &[b"ab", b"c"], 32), expand("t", &[b"a", b"bc"], 32));
    }
}
