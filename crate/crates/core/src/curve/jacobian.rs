//! Counted Jacobian formulas for `y^2 = x^3 + a4 x + a6` over `F_p`.
//!
//! `(X, Y, Z)` stands for the affine point `(X / Z^2, Y / Z^3)`. The
//! doubling and addition routines hand back the intermediates the Miller
//! loop reuses for its line functions.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::field::PrimeField;

#[derive(Clone, Debug)]
pub(crate) struct Jac {
    pub x: BigUint,
    pub y: BigUint,
    pub z: BigUint,
}

impl Jac {
    pub fn affine(x: BigUint, y: BigUint) -> Jac {
        Jac {
            x,
            y,
            z: BigUint::one(),
        }
    }
}

/// Intermediates of one doubling, in the names the tangent line uses.
pub(crate) struct DblParts {
    /// `3 X^2 + a4 Z^4`
    pub m: BigUint,
    /// `Z^2`
    pub zz: BigUint,
    /// `Y^2`
    pub yy: BigUint,
}

/// `4M + 6S`: `XX, YY, ZZ, ZZ^2, M^2, YY^2` squared; `a4 ZZ^2`, `X YY`,
/// `M (S - X3)` and `Y Z` multiplied. The `a4` product is spent even when
/// `a4 = 0` so that the count does not depend on the curve.
///
/// Returns `None` for points of order 2 (`Y = 0`).
pub(crate) fn double(f: &PrimeField, a4: &BigUint, t: &Jac) -> Option<(Jac, DblParts)> {
    if t.y.is_zero() {
        return None;
    }
    let xx = f.sqr(&t.x);
    let yy = f.sqr(&t.y);
    let zz = f.sqr(&t.z);
    let zzzz = f.sqr(&zz);
    let m = f.add(&f.small_mul(&xx, 3), &f.mul(a4, &zzzz));
    let s = f.small_mul(&f.mul(&t.x, &yy), 4);
    let x3 = f.sub(&f.sqr(&m), &f.dbl(&s));
    let yyyy = f.sqr(&yy);
    let y3 = f.sub(&f.mul(&m, &f.sub(&s, &x3)), &f.small_mul(&yyyy, 8));
    let z3 = f.dbl(&f.mul(&t.y, &t.z));
    Some((Jac { x: x3, y: y3, z: z3 }, DblParts { m, zz, yy }))
}

pub(crate) enum AddOutcome {
    /// Regular sum, with `R = S2 - S1` (the slope numerator).
    Sum(Jac, BigUint),
    /// The operands were equal.
    Double,
    /// The operands were negatives of each other.
    Infinity,
}

/// General addition, `12M + 4S` when neither operand has `Z = 1` and
/// `8M + 3S` when the second one does. Callers wanting the cheap path put
/// the normalized operand second.
pub(crate) fn add(f: &PrimeField, p: &Jac, q: &Jac) -> AddOutcome {
    let q_affine = q.z.is_one();
    let z1z1 = f.sqr(&p.z);
    let (u1, s1) = if q_affine {
        (p.x.clone(), p.y.clone())
    } else {
        let z2z2 = f.sqr(&q.z);
        let u1 = f.mul(&p.x, &z2z2);
        let s1 = f.mul(&f.mul(&p.y, &q.z), &z2z2);
        (u1, s1)
    };
    let u2 = f.mul(&q.x, &z1z1);
    let s2 = f.mul(&f.mul(&q.y, &p.z), &z1z1);
    let h = f.sub(&u2, &u1);
    let r = f.sub(&s2, &s1);
    if h.is_zero() {
        return if r.is_zero() {
            AddOutcome::Double
        } else {
            AddOutcome::Infinity
        };
    }
    let hh = f.sqr(&h);
    let hhh = f.mul(&h, &hh);
    let v = f.mul(&u1, &hh);
    let x3 = f.sub(&f.sub(&f.sqr(&r), &hhh), &f.dbl(&v));
    let y3 = f.sub(&f.mul(&r, &f.sub(&v, &x3)), &f.mul(&s1, &hhh));
    let z3 = if q_affine {
        f.mul(&p.z, &h)
    } else {
        f.mul(&f.mul(&p.z, &q.z), &h)
    };
    AddOutcome::Sum(Jac { x: x3, y: y3, z: z3 }, r)
}

/// Uncounted conversion to affine coordinates.
pub(crate) fn to_affine(f: &PrimeField, t: &Jac) -> (BigUint, BigUint) {
    if t.z.is_one() {
        return (t.x.clone(), t.y.clone());
    }
    let zi = f.inv_raw(&t.z).expect("Jacobian Z is nonzero");
    let zi2 = f.sqr_raw(&zi);
    let zi3 = f.mul_raw(&zi2, &zi);
    (f.mul_raw(&t.x, &zi2), f.mul_raw(&t.y, &zi3))
}

/// Uncounted projective equality.
pub(crate) fn eq(f: &PrimeField, a: &Jac, b: &Jac) -> bool {
    let za2 = f.sqr_raw(&a.z);
    let zb2 = f.sqr_raw(&b.z);
    if f.mul_raw(&a.x, &zb2) != f.mul_raw(&b.x, &za2) {
        return false;
    }
    let za3 = f.mul_raw(&za2, &a.z);
    let zb3 = f.mul_raw(&zb2, &b.z);
    f.mul_raw(&a.y, &zb3) == f.mul_raw(&b.y, &za3)
}
