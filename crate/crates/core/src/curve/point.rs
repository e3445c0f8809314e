use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use super::jacobian::{self, AddOutcome, Jac};
use super::Curve;
use crate::error::{Error, Result};
use crate::ledger::{self, Op};

/// A point of `E(F_p)`, kept in Jacobian coordinates.
#[derive(Clone)]
pub struct Point {
    pub(crate) j: Option<Jac>,
    pub(crate) curve: Arc<Curve>,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_affine() {
            None => write!(f, "Point(O)"),
            Some((x, y)) => write!(f, "Point({x}, {y})"),
        }
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        if !self.curve.same(&other.curve) {
            return false;
        }
        match (&self.j, &other.j) {
            (None, None) => true,
            (Some(a), Some(b)) => jacobian::eq(self.curve.fp(), a, b),
            _ => false,
        }
    }
}

impl Eq for Point {}

impl Point {
    pub fn infinity(curve: &Arc<Curve>) -> Point {
        Point {
            j: None,
            curve: Arc::clone(curve),
        }
    }

    pub(crate) fn from_jac(curve: &Arc<Curve>, j: Option<Jac>) -> Point {
        Point {
            j,
            curve: Arc::clone(curve),
        }
    }

    pub fn curve(&self) -> &Arc<Curve> {
        &self.curve
    }

    pub fn is_infinity(&self) -> bool {
        self.j.is_none()
    }

    /// Affine coordinates, `None` for the point at infinity. Not counted.
    pub fn to_affine(&self) -> Option<(BigUint, BigUint)> {
        self.j.as_ref().map(|j| jacobian::to_affine(self.curve.fp(), j))
    }

    /// Same point with `Z = 1`. Not counted.
    pub fn normalize(&self) -> Point {
        let j = self.to_affine().map(|(x, y)| Jac::affine(x, y));
        Point::from_jac(&self.curve, j)
    }

    pub fn neg(&self) -> Point {
        let f = self.curve.fp();
        let j = self.j.as_ref().map(|j| Jac {
            x: j.x.clone(),
            y: f.neg(&j.y),
            z: j.z.clone(),
        });
        Point::from_jac(&self.curve, j)
    }

    /// One counted `EcAdd`.
    pub fn try_add(&self, o: &Point) -> Result<Point> {
        if !self.curve.same(&o.curve) {
            return Err(Error::ContextMismatch);
        }
        Ok(ledger::nested(Op::EcAdd, || self.add_inner(o)))
    }

    pub fn add(&self, o: &Point) -> Point {
        self.try_add(o).expect("points on different curves")
    }

    pub fn sub(&self, o: &Point) -> Point {
        self.add(&o.neg())
    }

    fn add_inner(&self, o: &Point) -> Point {
        let (a, b) = match (&self.j, &o.j) {
            (None, _) => return o.clone(),
            (_, None) => return self.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        // Put a normalized operand second to take the mixed path.
        let (a, b) = if a.z == BigUint::from(1u8) && b.z != a.z {
            (b, a)
        } else {
            (a, b)
        };
        match jacobian::add(self.curve.fp(), a, b) {
            AddOutcome::Sum(j, _) => Point::from_jac(&self.curve, Some(j)),
            AddOutcome::Infinity => Point::infinity(&self.curve),
            AddOutcome::Double => self.double_inner(),
        }
    }

    /// One counted `EcDbl`.
    pub fn double(&self) -> Point {
        ledger::nested(Op::EcDbl, || self.double_inner())
    }

    fn double_inner(&self) -> Point {
        let j = self
            .j
            .as_ref()
            .and_then(|j| jacobian::double(self.curve.fp(), self.curve.a4(), j))
            .map(|(j, _)| j);
        Point::from_jac(&self.curve, j)
    }

    /// `[d] P` by NAF double-and-add: one `ScalarMul` at the top, the
    /// doublings and additions below it.
    pub fn mul(&self, d: &BigUint) -> Point {
        ledger::nested(Op::ScalarMul, || self.mul_inner(d))
    }

    fn mul_inner(&self, d: &BigUint) -> Point {
        if self.is_infinity() || d.is_zero() {
            return Point::infinity(&self.curve);
        }
        let base = self.normalize();
        let neg = base.neg();
        let digits = naf(d);
        let mut acc = base.clone();
        for &digit in digits.iter().rev().skip(1) {
            acc = acc.double();
            match digit {
                1 => acc = acc.add(&base),
                -1 => acc = acc.add(&neg),
                _ => {}
            }
        }
        acc
    }

    /// `sum [d_i] P_i` with interleaved NAF (shared doublings), counted as a
    /// single `ScalarMul`.
    pub fn msm(curve: &Arc<Curve>, terms: &[(&BigUint, &Point)]) -> Result<Point> {
        if terms.iter().any(|(_, p)| !p.curve.same(curve)) {
            return Err(Error::ContextMismatch);
        }
        Ok(ledger::nested(Op::ScalarMul, || {
            let prepared: Vec<(Vec<i8>, Point, Point)> = terms
                .iter()
                .filter(|(d, p)| !d.is_zero() && !p.is_infinity())
                .map(|(d, p)| {
                    let base = p.normalize();
                    let neg = base.neg();
                    (naf(d), base, neg)
                })
                .collect();
            let len = prepared.iter().map(|(n, _, _)| n.len()).max().unwrap_or(0);
            let mut acc = Point::infinity(curve);
            for i in (0..len).rev() {
                if !acc.is_infinity() {
                    acc = acc.double();
                }
                for (digits, base, neg) in &prepared {
                    match digits.get(i) {
                        Some(1) => acc = acc.add(base),
                        Some(-1) => acc = acc.add(neg),
                        _ => {}
                    }
                }
            }
            acc
        }))
    }

    pub fn is_on_curve(&self) -> bool {
        match self.to_affine() {
            None => true,
            Some((x, y)) => self.curve.contains(&x, &y),
        }
    }

    /// `[r] P = O`, checked without touching the ledger.
    pub fn in_subgroup(&self) -> bool {
        ledger::untracked(|| self.mul(self.curve.r()).is_infinity())
    }

    /// `0x00` for infinity, else `0x04 || x || y` at field width.
    pub fn to_bytes(&self) -> Vec<u8> {
        let f = self.curve.fp();
        match self.to_affine() {
            None => vec![0],
            Some((x, y)) => {
                let mut out = Vec::with_capacity(1 + 2 * f.byte_len());
                out.push(4);
                out.extend(f.to_bytes(&x));
                out.extend(f.to_bytes(&y));
                out
            }
        }
    }
}

/// Non-adjacent form, least significant digit first.
pub fn naf(d: &BigUint) -> Vec<i8> {
    let mut out = Vec::with_capacity(d.bits() as usize + 1);
    let mut k = d.clone();
    let one = BigUint::from(1u8);
    while !k.is_zero() {
        if k.bit(0) {
            if k.bit(1) {
                out.push(-1);
                k += &one;
            } else {
                out.push(1);
                k -= &one;
            }
        } else {
            out.push(0);
        }
        k >>= 1;
    }
    out
}
