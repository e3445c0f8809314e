use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::ledger::{self, Op};

/// Which ledger counters a field reports into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldRole {
    /// Coordinate field of the curve: `Mul`, `Sq`, `Inv`, `Exp`.
    Base,
    /// Exponent ring modulo the group order: `ZMul`, `ZInv`, `ZExp`.
    Scalar,
}

/// A prime field context.
///
/// Arithmetic works on plain [`BigUint`] residues so that curve and pairing
/// code can stay allocation-light; [`FieldElement`] wraps a residue together
/// with its context for the public API.
pub struct PrimeField {
    p: BigUint,
    bytes: usize,
    role: FieldRole,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeField({}, {:?})", self.p, self.role)
    }
}

impl PrimeField {
    pub fn new(p: BigUint, role: FieldRole) -> Result<Arc<Self>> {
        if !is_probable_prime(&p) {
            return Err(Error::NotPrime);
        }
        let bytes = p.bits().div_ceil(8) as usize;
        Ok(Arc::new(PrimeField { p, bytes, role }))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    pub fn role(&self) -> FieldRole {
        self.role
    }

    /// Width of the fixed-length big-endian encoding.
    pub fn byte_len(&self) -> usize {
        self.bytes
    }

    pub fn same(&self, other: &PrimeField) -> bool {
        std::ptr::eq(self, other) || (self.p == other.p && self.role == other.role)
    }

    fn count_mul(&self) {
        ledger::record(match self.role {
            FieldRole::Base => Op::Mul,
            FieldRole::Scalar => Op::ZMul,
        });
    }

    fn count_sq(&self) {
        ledger::record(match self.role {
            FieldRole::Base => Op::Sq,
            FieldRole::Scalar => Op::ZMul,
        });
    }

    pub fn reduce(&self, a: &BigUint) -> BigUint {
        a % &self.p
    }

    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.p - (b - a)
        }
    }

    pub fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }

    pub fn dbl(&self, a: &BigUint) -> BigUint {
        self.add(a, a)
    }

    /// Multiply by a small constant through repeated addition (not counted).
    pub fn small_mul(&self, a: &BigUint, c: u32) -> BigUint {
        (a * c) % &self.p
    }

    /// Counted multiplication. Always a `Mul`: formula code decides what is
    /// a squaring, not the operand values.
    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.count_mul();
        self.mul_raw(a, b)
    }

    pub fn sqr(&self, a: &BigUint) -> BigUint {
        self.count_sq();
        self.sqr_raw(a)
    }

    pub fn mul_raw(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }

    pub fn sqr_raw(&self, a: &BigUint) -> BigUint {
        (a * a) % &self.p
    }

    /// Counted inversion; `None` for zero.
    pub fn inv(&self, a: &BigUint) -> Option<BigUint> {
        ledger::record(match self.role {
            FieldRole::Base => Op::Inv,
            FieldRole::Scalar => Op::ZInv,
        });
        self.inv_raw(a)
    }

    /// Inversion by the extended Euclidean algorithm.
    pub fn inv_raw(&self, a: &BigUint) -> Option<BigUint> {
        let a = self.reduce(a);
        if a.is_zero() {
            return None;
        }
        let (mut r0, mut r1) = (BigInt::from_biguint(Sign::Plus, self.p.clone()), BigInt::from(a));
        let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let t = &t0 - &q * &t1;
            t0 = std::mem::replace(&mut t1, t);
        }
        debug_assert!(r0.is_one());
        let p = BigInt::from_biguint(Sign::Plus, self.p.clone());
        let t = t0.mod_floor(&p);
        t.to_biguint()
    }

    /// Counted right-to-left binary exponentiation: one `Exp`, then
    /// `bits(e) - 1` squarings and `popcount(e)` multiplications one level
    /// down.
    pub fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        ledger::nested(
            match self.role {
                FieldRole::Base => Op::Exp,
                FieldRole::Scalar => Op::ZExp,
            },
            || {
                let mut acc = BigUint::one();
                let mut base = self.reduce(a);
                let bits = e.bits();
                for i in 0..bits {
                    if e.bit(i) {
                        self.count_mul();
                        acc = self.mul_raw(&acc, &base);
                    }
                    if i + 1 < bits {
                        self.count_sq();
                        base = self.sqr_raw(&base);
                    }
                }
                acc
            },
        )
    }

    pub fn pow_raw(&self, a: &BigUint, e: &BigUint) -> BigUint {
        a.modpow(e, &self.p)
    }

    pub fn random(&self, rng: &mut dyn RngCore) -> BigUint {
        let mut buf = vec![0u8; self.bytes + 16];
        rng.fill_bytes(&mut buf);
        BigUint::from_bytes_be(&buf) % &self.p
    }

    pub fn random_nonzero(&self, rng: &mut dyn RngCore) -> BigUint {
        loop {
            let v = self.random(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// Fixed-width big-endian encoding.
    pub fn to_bytes(&self, a: &BigUint) -> Vec<u8> {
        let mut out = vec![0u8; self.bytes];
        if !a.is_zero() {
            let raw = a.to_bytes_be();
            out[self.bytes - raw.len()..].copy_from_slice(&raw);
        }
        out
    }

    /// Strict decoding: exact width, value below the modulus.
    pub fn from_bytes(&self, bytes: &[u8]) -> Result<BigUint> {
        if bytes.len() != self.bytes {
            return Err(Error::Malformed(format!(
                "field element must be {} bytes, got {}",
                self.bytes,
                bytes.len()
            )));
        }
        let v = BigUint::from_bytes_be(bytes);
        if v >= self.p {
            return Err(Error::Malformed("field element not reduced".into()));
        }
        Ok(v)
    }

    pub fn element(self: &Arc<Self>, v: impl Into<BigUint>) -> FieldElement {
        FieldElement {
            v: self.reduce(&v.into()),
            f: Arc::clone(self),
        }
    }
}

/// Miller-Rabin with 40 fixed small-prime and derived bases.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    const SMALL: [u32; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    ];
    for &q in &SMALL {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for i in 0..40u32 {
        let a = if (i as usize) < SMALL.len() {
            BigUint::from(SMALL[i as usize])
        } else {
            BigUint::from(1_000_003u64 * u64::from(i) + 7) % (n - 3u32) + 2u32
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A residue together with its field context.
#[derive(Clone)]
pub struct FieldElement {
    v: BigUint,
    f: Arc<PrimeField>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.f.same(&other.f)
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn value(&self) -> &BigUint {
        &self.v
    }

    pub fn field(&self) -> &Arc<PrimeField> {
        &self.f
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.f.same(&other.f) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn wrap(&self, v: BigUint) -> FieldElement {
        FieldElement {
            v,
            f: Arc::clone(&self.f),
        }
    }

    pub fn try_add(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        Ok(self.wrap(self.f.add(&self.v, &o.v)))
    }

    pub fn try_sub(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        Ok(self.wrap(self.f.sub(&self.v, &o.v)))
    }

    /// Counted product; equal operands are counted as a squaring.
    pub fn try_mul(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check(o)?;
        if self.v == o.v {
            Ok(self.wrap(self.f.sqr(&self.v)))
        } else {
            Ok(self.wrap(self.f.mul(&self.v, &o.v)))
        }
    }

    /// Panicking form of [`try_add`](Self::try_add) for internal use.
    pub fn add(&self, o: &FieldElement) -> FieldElement {
        self.try_add(o).expect("field context mismatch")
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        self.try_sub(o).expect("field context mismatch")
    }

    pub fn mul(&self, o: &FieldElement) -> FieldElement {
        self.try_mul(o).expect("field context mismatch")
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.f.neg(&self.v))
    }

    pub fn square(&self) -> FieldElement {
        self.wrap(self.f.sqr(&self.v))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.f.inv(&self.v).map(|v| self.wrap(v)).ok_or(Error::ZeroInverse)
    }

    pub fn pow(&self, e: &BigUint) -> FieldElement {
        self.wrap(self.f.pow(&self.v, e))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.f.to_bytes(&self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f11() -> Arc<PrimeField> {
        PrimeField::new(BigUint::from(11u32), FieldRole::Base).unwrap()
    }

    #[test]
    fn small_values() {
        let f = f11();
        assert_eq!(f.element(3u32).mul(&f.element(4u32)), f.element(1u32));
        assert_eq!(f.element(3u32).inv().unwrap(), f.element(4u32));
        assert_eq!(f.element(1u32).inv().unwrap(), f.element(1u32));
        assert_eq!(f.element(2u32).pow(&BigUint::from(10u32)), f.element(1u32));
        assert_eq!(f.element(5u32).pow(&BigUint::zero()), f.element(1u32));
        assert_eq!(f.element(0u32).inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigUint::from(11u32)));
        assert!(!is_probable_prime(&BigUint::from(561u32)));
        assert!(PrimeField::new(BigUint::from(15u32), FieldRole::Base).is_err());
    }

    #[test]
    fn encoding_width() {
        let f = f11();
        assert_eq!(f.to_bytes(&BigUint::zero()), vec![0]);
        assert_eq!(f.to_bytes(&BigUint::from(10u32)), vec![10]);
        assert!(f.from_bytes(&[11]).is_err());
    }
}
