//! Prime fields and their degree-k extensions.

mod ext;
mod prime;

pub use ext::{ExtField, ExtFieldElement};
pub use prime::{is_probable_prime, FieldElement, FieldRole, PrimeField};
