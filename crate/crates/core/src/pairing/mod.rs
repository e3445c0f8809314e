//! Tate pairing on the supersingular curve, with the symmetric wrapper
//! `e(P, Q) = t_r(P, phi(Q))` every scheme uses.

pub mod assumptions;
mod gt;
mod miller;

use std::sync::Arc;

use num_bigint::BigUint;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

pub use gt::Gt;
pub use miller::{MillerTrace, AUX_RETRIES};

use crate::curve::{Curve, ExtPoint, Point};
use crate::error::{Error, Result};
use crate::field::ExtFieldElement;
use crate::hash;
use crate::ledger::{self, Op};

// Auxiliary points are drawn from a generator seeded by the inputs, so a
// pairing is a pure function of its arguments.
fn aux_rng(terms: &[(Point, ExtPoint)]) -> ChaCha20Rng {
    let mut parts: Vec<Vec<u8>> = Vec::with_capacity(2 * terms.len());
    for (p, q) in terms {
        parts.push(p.to_bytes());
        parts.push(ext_point_bytes(q));
    }
    let refs: Vec<&[u8]> = parts.iter().map(Vec::as_slice).collect();
    let seed: [u8; 32] = hash::expand("miller-aux", &refs, 32).try_into().expect("32 bytes");
    ChaCha20Rng::from_seed(seed)
}

fn ext_point_bytes(q: &ExtPoint) -> Vec<u8> {
    match q.coords() {
        None => vec![0],
        Some((x, y)) => {
            let mut out = vec![4];
            out.extend(x.to_bytes());
            out.extend(y.to_bytes());
            out
        }
    }
}

/// `f_{r,P}` evaluated at `[Q + S] - [S]`, one `MillerLoop`.
///
/// No order check happens here; `r = 1` gives the constant function 1.
pub fn miller_loop(p: &Point, q: &ExtPoint, r: &BigUint) -> Result<ExtFieldElement> {
    let terms = [(p.clone(), q.clone())];
    miller_loop_with(p, q, r, &mut aux_rng(&terms))
}

/// [`miller_loop`] with caller-chosen auxiliary randomness.
pub fn miller_loop_with(p: &Point, q: &ExtPoint, r: &BigUint, rng: &mut dyn RngCore) -> Result<ExtFieldElement> {
    let terms = [(p.clone(), q.clone())];
    ledger::nested(Op::MillerLoop, || miller::run(p.curve(), &terms, r, rng)).map(|(v, _)| v)
}

/// Raise a Miller value to `(p^k - 1) / r`, one `FinalExp`.
pub fn final_exponentiation(curve: &Arc<Curve>, f: &ExtFieldElement) -> Gt {
    ledger::nested(Op::FinalExp, || Gt::wrap(curve, f.pow(curve.final_exponent())))
}

/// `t_r(P, Q)` for `P` in `E(F_p)[r]` and `Q` in `E(F_{p^k})`.
pub fn tate(p: &Point, q: &ExtPoint) -> Result<Gt> {
    let terms = [(p.clone(), q.clone())];
    tate_with(p, q, &mut aux_rng(&terms))
}

/// [`tate`] with caller-chosen auxiliary randomness. The result does not
/// depend on it.
pub fn tate_with(p: &Point, q: &ExtPoint, rng: &mut dyn RngCore) -> Result<Gt> {
    let curve = p.curve();
    ledger::nested(Op::Pairing, || {
        if p.is_infinity() || q.is_infinity() {
            return Ok(Gt::one(curve));
        }
        let terms = [(p.clone(), q.clone())];
        let (f, ends) = ledger::nested(Op::MillerLoop, || miller::run(curve, &terms, curve.r(), rng))?;
        if !ends[0].is_infinity() {
            return Err(Error::NotInSubgroup);
        }
        Ok(final_exponentiation(curve, &f))
    })
}

/// The symmetric pairing `e(P, Q) = t_r(P, phi(Q))`.
pub fn pairing(p: &Point, q: &Point) -> Result<Gt> {
    let curve = p.curve();
    if !q.curve().same(curve) {
        return Err(Error::ContextMismatch);
    }
    tate(p, &curve.distort(q)?)
}

/// `e(P1, Q1) / e(P2, Q2)` as `t(P1, phi(Q1)) t(P2, -phi(Q2))`: both Miller
/// terms share one loop (two `MillerLoop`s counted, one accumulator) and a
/// single final exponentiation.
pub fn pairing_ratio(p1: &Point, q1: &Point, p2: &Point, q2: &Point) -> Result<Gt> {
    let curve = p1.curve();
    if [q1, p2, q2].iter().any(|x| !x.curve().same(curve)) {
        return Err(Error::ContextMismatch);
    }
    let mut terms = Vec::with_capacity(2);
    if !p1.is_infinity() && !q1.is_infinity() {
        terms.push((p1.clone(), curve.distort(q1)?));
    }
    if !p2.is_infinity() && !q2.is_infinity() {
        terms.push((p2.clone(), curve.distort(q2)?.neg()));
    }
    let mut rng = aux_rng(&terms);
    ledger::nested(Op::RatioPairing, || {
        if terms.is_empty() {
            return Ok(Gt::one(curve));
        }
        ledger::record_n(Op::MillerLoop, terms.len() as u64);
        let (f, ends) = ledger::within(|| miller::run(curve, &terms, curve.r(), &mut rng))?;
        if ends.iter().any(|t| !t.is_infinity()) {
            return Err(Error::OrderMismatch);
        }
        Ok(final_exponentiation(curve, &f))
    })
}

/// Pairing-based DDH decision: `true` iff `e(P, C) = e(A, B)`.
pub fn ddh_decide(p: &Point, a: &Point, b: &Point, c: &Point) -> Result<bool> {
    Ok(pairing_ratio(p, c, a, b)?.is_one())
}
