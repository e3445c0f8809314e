//! Brute-force Tate pairing oracle for the tiny curve. It shares no code
//! with the library: its own `F_121`, its own group law, the Miller
//! function written down from its divisor, and evaluation at every
//! admissible auxiliary point.
#![allow(dead_code)]

use std::sync::Arc;

use ibekit::curve::{Curve, ExtPoint, Point};
use ibekit::pairing::Gt;
use num_bigint::BigUint;

pub const P: u64 = 11;
pub const A6: u64 = 2;
pub const R: u64 = 3;

/// `a + b i` with `i^2 = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct F2(pub u64, pub u64);

impl F2 {
    pub const ZERO: F2 = F2(0, 0);
    pub const ONE: F2 = F2(1, 0);

    pub fn add(self, o: F2) -> F2 {
        F2((self.0 + o.0) % P, (self.1 + o.1) % P)
    }
    pub fn neg(self) -> F2 {
        F2((P - self.0) % P, (P - self.1) % P)
    }
    pub fn sub(self, o: F2) -> F2 {
        self.add(o.neg())
    }
    pub fn mul(self, o: F2) -> F2 {
        F2(
            (self.0 * o.0 + (P - self.1 * o.1 % P)) % P,
            (self.0 * o.1 + self.1 * o.0) % P,
        )
    }
    pub fn small(c: u64) -> F2 {
        F2(c % P, 0)
    }
    pub fn pow(self, mut e: u64) -> F2 {
        let (mut acc, mut b) = (F2::ONE, self);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(b);
            }
            b = b.mul(b);
            e >>= 1;
        }
        acc
    }
    pub fn inv(self) -> F2 {
        assert_ne!(self, F2::ZERO);
        // Brute force: the group has 120 elements.
        all_f2().find(|&z| self.mul(z) == F2::ONE).unwrap()
    }
}

pub fn all_f2() -> impl Iterator<Item = F2> {
    (0..P).flat_map(|a| (0..P).map(move |b| F2(a, b)))
}

pub type Pt = Option<(F2, F2)>;

pub fn on_curve(x: F2, y: F2) -> bool {
    y.mul(y) == x.mul(x).mul(x).add(F2::small(A6))
}

pub fn add(p: Pt, q: Pt) -> Pt {
    let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
        return p.or(q);
    };
    let lambda = if x1 == x2 {
        if y1.add(y2) == F2::ZERO {
            return None;
        }
        F2::small(3).mul(x1).mul(x1).mul(y1.add(y1).inv())
    } else {
        y2.sub(y1).mul(x2.sub(x1).inv())
    };
    let x3 = lambda.mul(lambda).sub(x1).sub(x2);
    Some((x3, lambda.mul(x1.sub(x3)).sub(y1)))
}

pub fn mul(k: u64, p: Pt) -> Pt {
    (0..k).fold(None, |acc, _| add(acc, p))
}

pub fn all_points() -> Vec<Pt> {
    let mut out = vec![None];
    for x in all_f2() {
        for y in all_f2() {
            if on_curve(x, y) {
                out.push(Some((x, y)));
            }
        }
    }
    out
}

/// For `P` of order 3 the tangent at `P` meets the curve only at `P`, so
/// `f = y - y_P - lambda (x - x_P)` has divisor `3(P) - 3(O)`.
pub fn miller_function(p: (F2, F2)) -> impl Fn(F2, F2) -> F2 {
    let (xp, yp) = p;
    let lambda = F2::small(3).mul(xp).mul(xp).mul(yp.add(yp).inv());
    move |x, y| y.sub(yp).sub(lambda.mul(x.sub(xp)))
}

/// `(f(Q + S) / f(S))^((p^2 - 1) / r)` for every `S` where both values are
/// defined and nonzero. Panics unless all choices agree.
pub fn oracle(p: Pt, q: Pt, points: &[Pt]) -> F2 {
    let (Some(pa), Some(_)) = (p, q) else {
        return F2::ONE;
    };
    let f = miller_function(pa);
    let eval = |s: Pt| s.map(|(x, y)| f(x, y));
    let mut seen = None;
    for &s in points {
        let (Some(a), Some(b)) = (eval(add(q, s)), eval(s)) else {
            continue;
        };
        if a == F2::ZERO || b == F2::ZERO {
            continue;
        }
        let v = a.mul(b.inv()).pow((P * P - 1) / R);
        match seen {
            None => seen = Some(v),
            Some(w) => assert_eq!(v, w, "oracle value depends on the auxiliary point"),
        }
    }
    seen.expect("some auxiliary point is admissible")
}

pub fn small(v: &BigUint) -> u64 {
    v.to_u64_digits().first().copied().unwrap_or(0)
}

pub fn lib_gt(g: &Gt) -> F2 {
    let c = g.value().coeffs();
    F2(small(&c[0]), small(&c[1]))
}

pub fn lib_ext_point(curve: &Arc<Curve>, q: Pt) -> ExtPoint {
    match q {
        None => ExtPoint::infinity(),
        Some((x, y)) => {
            let fpk = curve.fpk();
            let e = |v: F2| fpk.from_coeffs(vec![v.0.into(), v.1.into()]).unwrap();
            ExtPoint::new(e(x), e(y))
        }
    }
}

pub fn lib_point(curve: &Arc<Curve>, p: Pt) -> Point {
    match p {
        None => Point::infinity(curve),
        Some((x, y)) => {
            assert_eq!((x.1, y.1), (0, 0));
            curve.point(x.0.into(), y.0.into()).unwrap()
        }
    }
}

pub fn g1() -> Vec<Pt> {
    let g = Some((F2::small(9), F2::small(4)));
    (0..R).map(|k| mul(k, g)).collect()
}

pub fn zeta(curve: &Curve) -> F2 {
    let z = curve.zeta().expect("tiny curve has a distortion map");
    let c = z.coeffs();
    F2(small(&c[0]), small(&c[1]))
}

pub fn distort(z: F2, q: Pt) -> Pt {
    q.map(|(x, y)| (z.mul(x), y))
}
