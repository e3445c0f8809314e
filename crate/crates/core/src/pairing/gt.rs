use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand_core::RngCore;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::field::ExtFieldElement;
use crate::ledger::{self, Op};

/// An element of the order-`r` subgroup of `F_{p^k}^*`.
#[derive(Clone)]
pub struct Gt {
    v: ExtFieldElement,
    curve: Arc<Curve>,
}

impl fmt::Debug for Gt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gt{:?}", self.v)
    }
}

impl PartialEq for Gt {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl Eq for Gt {}

impl Gt {
    pub(crate) fn wrap(curve: &Arc<Curve>, v: ExtFieldElement) -> Gt {
        Gt {
            v,
            curve: Arc::clone(curve),
        }
    }

    pub fn one(curve: &Arc<Curve>) -> Gt {
        Gt::wrap(curve, curve.fpk().one())
    }

    /// Uniform element other than 1, not counted: a random field element
    /// pushed through the final exponentiation.
    pub fn random(curve: &Arc<Curve>, rng: &mut dyn RngCore) -> Gt {
        ledger::untracked(|| loop {
            let v = curve.fpk().random(rng);
            if v.is_zero() {
                continue;
            }
            let g = v.pow_raw(curve.final_exponent());
            if !g.is_one() {
                return Gt::wrap(curve, g);
            }
        })
    }

    pub fn value(&self) -> &ExtFieldElement {
        &self.v
    }

    pub fn curve(&self) -> &Arc<Curve> {
        &self.curve
    }

    pub fn is_one(&self) -> bool {
        self.v.is_one()
    }

    /// One `GtMul`.
    pub fn mul(&self, o: &Gt) -> Gt {
        ledger::nested(Op::GtMul, || Gt::wrap(&self.curve, self.v.mul(&o.v)))
    }

    /// One `GtExp`; the exponent is reduced mod `r` first.
    pub fn pow(&self, e: &BigUint) -> Gt {
        ledger::nested(Op::GtExp, || {
            let e = e % self.curve.r();
            if e.is_zero() {
                Gt::one(&self.curve)
            } else {
                Gt::wrap(&self.curve, self.v.pow(&e))
            }
        })
    }

    /// One `GtInv`.
    pub fn inv(&self) -> Gt {
        ledger::nested(Op::GtInv, || {
            Gt::wrap(&self.curve, self.v.inv().expect("group elements are nonzero"))
        })
    }

    /// One `GtDiv`: an inversion and a product one level down.
    pub fn div(&self, o: &Gt) -> Gt {
        ledger::nested(Op::GtDiv, || {
            let inv = o.v.inv().expect("group elements are nonzero");
            Gt::wrap(&self.curve, self.v.mul(&inv))
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.v.to_bytes()
    }

    /// Decode and check `v^r = 1`.
    pub fn from_bytes(curve: &Arc<Curve>, bytes: &[u8]) -> Result<Gt> {
        let v = curve.fpk().from_bytes(bytes)?;
        if v.is_zero() || !v.pow_raw(curve.r()).is_one() {
            return Err(Error::NotInSubgroup);
        }
        Ok(Gt::wrap(curve, v))
    }

    pub fn byte_len(curve: &Curve) -> usize {
        curve.fpk().byte_len()
    }
}
