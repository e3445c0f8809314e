//! The exponent-inversion IBE with one decryption pairing, the
//! constant-ciphertext HIBE built on it, and its forward-secure variant.

pub mod fs;
pub mod hibe;
pub mod ibe;
