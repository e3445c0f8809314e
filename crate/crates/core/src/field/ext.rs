use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_core::RngCore;

use super::prime::{FieldElement, PrimeField};
use crate::error::{Error, Result};
use crate::ledger::{self, Op};

/// `F_{p^k}` as `F_p[x] / f(x)` for a monic irreducible `f` of degree `k`.
pub struct ExtField {
    base: Arc<PrimeField>,
    k: usize,
    /// Low coefficients `m_0..m_{k-1}` of `f = x^k + m_{k-1} x^{k-1} + ... + m_0`.
    m: Vec<BigUint>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtField(k={}, m={:?})", self.k, self.m)
    }
}

impl ExtField {
    /// Build the extension; `modulus` lists `m_0..m_{k-1}`.
    pub fn new(base: Arc<PrimeField>, modulus: Vec<BigUint>) -> Result<Arc<Self>> {
        let k = modulus.len();
        if k < 2 {
            return Err(Error::Reducible(k));
        }
        let m = modulus.iter().map(|c| base.reduce(c)).collect();
        let ext = Arc::new(ExtField { base, k, m });
        if !ledger::untracked(|| ext.is_irreducible()) {
            return Err(Error::Reducible(k));
        }
        Ok(ext)
    }

    pub fn base(&self) -> &Arc<PrimeField> {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus_coeffs(&self) -> &[BigUint] {
        &self.m
    }

    pub fn same(&self, other: &ExtField) -> bool {
        std::ptr::eq(self, other) || (self.k == other.k && self.m == other.m && self.base.same(&other.base))
    }

    /// Byte width of an encoded element.
    pub fn byte_len(&self) -> usize {
        self.k * self.base.byte_len()
    }

    // Rabin's test: x^(p^k) = x mod f and gcd(x^(p^(k/q)) - x, f) = 1 for
    // every prime q dividing k.
    fn is_irreducible(self: &Arc<Self>) -> bool {
        let p = self.base.modulus().clone();
        let x = self.x();
        let mut powers = vec![x.clone()];
        for _ in 0..self.k {
            let next = powers.last().unwrap().pow_raw(&p);
            powers.push(next);
        }
        if powers[self.k] != x {
            return false;
        }
        let f = self.modulus_poly();
        for q in prime_factors(self.k) {
            let h = powers[self.k / q].sub(&x);
            let g = poly_gcd(&self.base, &trim(h.c.clone()), &f);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    fn modulus_poly(&self) -> Vec<BigUint> {
        let mut f = self.m.clone();
        f.push(BigUint::one());
        f
    }

    fn x(self: &Arc<Self>) -> ExtFieldElement {
        let mut c = vec![BigUint::zero(); self.k];
        c[1] = BigUint::one();
        self.make(c)
    }

    fn make(self: &Arc<Self>, c: Vec<BigUint>) -> ExtFieldElement {
        ExtFieldElement {
            c,
            ctx: Arc::clone(self),
        }
    }

    pub fn zero(self: &Arc<Self>) -> ExtFieldElement {
        self.make(vec![BigUint::zero(); self.k])
    }

    pub fn one(self: &Arc<Self>) -> ExtFieldElement {
        let mut c = vec![BigUint::zero(); self.k];
        c[0] = BigUint::one();
        self.make(c)
    }

    /// Embed a base-field residue as a constant polynomial.
    pub fn from_base(self: &Arc<Self>, a: &BigUint) -> ExtFieldElement {
        let mut c = vec![BigUint::zero(); self.k];
        c[0] = self.base.reduce(a);
        self.make(c)
    }

    /// Element from coefficients `c_0..c_{k-1}`.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<BigUint>) -> Result<ExtFieldElement> {
        if coeffs.len() != self.k {
            return Err(Error::Malformed(format!(
                "extension element needs {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        Ok(self.make(coeffs.iter().map(|c| self.base.reduce(c)).collect()))
    }

    pub fn random(self: &Arc<Self>, rng: &mut dyn RngCore) -> ExtFieldElement {
        let c = (0..self.k).map(|_| self.base.random(rng)).collect();
        self.make(c)
    }

    pub fn from_bytes(self: &Arc<Self>, bytes: &[u8]) -> Result<ExtFieldElement> {
        let w = self.base.byte_len();
        if bytes.len() != self.byte_len() {
            return Err(Error::Malformed(format!(
                "extension element must be {} bytes, got {}",
                self.byte_len(),
                bytes.len()
            )));
        }
        let c = bytes
            .chunks(w)
            .map(|ch| self.base.from_bytes(ch))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.make(c))
    }

    /// `m_i * t` for a reduction constant, skipping the multiplier for the
    /// trivial constants 0 and 1.
    fn times_m(&self, i: usize, t: &BigUint, counted: &mut u64) -> BigUint {
        let m = &self.m[i];
        if m.is_zero() {
            BigUint::zero()
        } else if m.is_one() {
            t.clone()
        } else {
            *counted += 1;
            self.base.mul_raw(m, t)
        }
    }

    // Reduce a product polynomial of degree <= 2k-2 modulo f.
    fn reduce_poly(&self, mut prod: Vec<BigUint>, counted: &mut u64) -> Vec<BigUint> {
        let f = &self.base;
        for d in (self.k..prod.len()).rev() {
            let t = std::mem::take(&mut prod[d]);
            if t.is_zero() {
                continue;
            }
            // x^d = x^(d-k) * x^k = -x^(d-k) * sum m_i x^i
            for i in 0..self.k {
                let v = self.times_m(i, &t, counted);
                let idx = d - self.k + i;
                prod[idx] = f.sub(&prod[idx], &v);
            }
        }
        prod.truncate(self.k);
        prod
    }

    fn mul_coeffs(&self, a: &[BigUint], b: &[BigUint]) -> (Vec<BigUint>, u64) {
        let f = &self.base;
        let mut counted = 0u64;
        if self.k == 2 {
            // Karatsuba: three base multiplications.
            let t0 = f.mul_raw(&a[0], &b[0]);
            let t1 = f.mul_raw(&a[1], &b[1]);
            let t2 = f.mul_raw(&f.add(&a[0], &a[1]), &f.add(&b[0], &b[1]));
            counted += 3;
            let mid = f.sub(&f.sub(&t2, &t0), &t1);
            let c0 = f.sub(&t0, &self.times_m(0, &t1, &mut counted));
            let c1 = f.sub(&mid, &self.times_m(1, &t1, &mut counted));
            return (vec![c0, c1], counted);
        }
        let mut prod = vec![BigUint::zero(); 2 * self.k - 1];
        for i in 0..self.k {
            for j in 0..self.k {
                let t = f.mul_raw(&a[i], &b[j]);
                counted += 1;
                prod[i + j] = f.add(&prod[i + j], &t);
            }
        }
        let out = self.reduce_poly(prod, &mut counted);
        (out, counted)
    }

    fn sqr_coeffs(&self, a: &[BigUint]) -> (Vec<BigUint>, u64) {
        let f = &self.base;
        if self.k == 2 && self.m[1].is_zero() && self.m[0].is_one() {
            // (a0 + a1 x)^2 with x^2 = -1: two base multiplications.
            let c0 = f.mul_raw(&f.add(&a[0], &a[1]), &f.sub(&a[0], &a[1]));
            let c1 = f.dbl(&f.mul_raw(&a[0], &a[1]));
            return (vec![c0, c1], 2);
        }
        self.mul_coeffs(a, a)
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(mut v: Vec<BigUint>) -> Vec<BigUint> {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigUint::zero());
    }
    v
}

fn is_zero_poly(v: &[BigUint]) -> bool {
    v.iter().all(|c| c.is_zero())
}

// Polynomial long division over F_p; `b` must be nonzero.
fn poly_divrem(f: &PrimeField, a: &[BigUint], b: &[BigUint]) -> (Vec<BigUint>, Vec<BigUint>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = f.inv_raw(&b[db]).expect("nonzero divisor");
    if r.len() < b.len() {
        return (vec![BigUint::zero()], r);
    }
    let mut q = vec![BigUint::zero(); r.len() - db];
    while r.len() > db && !is_zero_poly(&r) {
        let dr = r.len() - 1;
        let coef = f.mul_raw(&r[dr], &lead_inv);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let t = f.mul_raw(&coef, bc);
            r[shift + i] = f.sub(&r[shift + i], &t);
        }
        q[shift] = coef;
        r = trim(r);
        if dr == 0 {
            break;
        }
    }
    (trim(q), r)
}

fn poly_gcd(f: &PrimeField, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero_poly(&y) {
        let (_, r) = poly_divrem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn poly_mul(f: &PrimeField, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul_raw(x, y));
        }
    }
    trim(out)
}

fn poly_sub(f: &PrimeField, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n = a.len().max(b.len());
    let zero = BigUint::zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(out)
}

/// An element of `F_{p^k}`.
#[derive(Clone)]
pub struct ExtFieldElement {
    c: Vec<BigUint>,
    ctx: Arc<ExtField>,
}

impl fmt::Debug for ExtFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl PartialEq for ExtFieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.ctx.same(&other.ctx)
    }
}

impl Eq for ExtFieldElement {}

impl ExtFieldElement {
    pub fn context(&self) -> &Arc<ExtField> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.c
    }

    /// Coefficients as context-carrying base-field elements.
    pub fn coeff_elements(&self) -> Vec<FieldElement> {
        self.c.iter().map(|c| self.ctx.base.element(c.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|c| c.is_zero())
    }

    fn wrap(&self, c: Vec<BigUint>) -> ExtFieldElement {
        ExtFieldElement {
            c,
            ctx: Arc::clone(&self.ctx),
        }
    }

    fn check(&self, o: &ExtFieldElement) -> Result<()> {
        if self.ctx.same(&o.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, o: &ExtFieldElement) -> ExtFieldElement {
        let f = &self.ctx.base;
        self.wrap(self.c.iter().zip(&o.c).map(|(a, b)| f.add(a, b)).collect())
    }

    pub fn sub(&self, o: &ExtFieldElement) -> ExtFieldElement {
        let f = &self.ctx.base;
        self.wrap(self.c.iter().zip(&o.c).map(|(a, b)| f.sub(a, b)).collect())
    }

    pub fn neg(&self) -> ExtFieldElement {
        let f = &self.ctx.base;
        self.wrap(self.c.iter().map(|a| f.neg(a)).collect())
    }

    /// Add a base-field residue to the constant coefficient.
    pub fn add_base(&self, a: &BigUint) -> ExtFieldElement {
        let mut c = self.c.clone();
        c[0] = self.ctx.base.add(&c[0], a);
        self.wrap(c)
    }

    /// Counted product: one `MulK`, with the base multiplications it spends
    /// reported as `MulInExt`.
    pub fn try_mul(&self, o: &ExtFieldElement) -> Result<ExtFieldElement> {
        self.check(o)?;
        ledger::record(Op::MulK);
        let (c, n) = self.ctx.mul_coeffs(&self.c, &o.c);
        ledger::record_n(Op::MulInExt, n);
        Ok(self.wrap(c))
    }

    pub fn mul(&self, o: &ExtFieldElement) -> ExtFieldElement {
        self.try_mul(o).expect("extension context mismatch")
    }

    pub fn square(&self) -> ExtFieldElement {
        ledger::record(Op::SqK);
        let (c, n) = self.ctx.sqr_coeffs(&self.c);
        ledger::record_n(Op::MulInExt, n);
        self.wrap(c)
    }

    /// Scale by a base-field residue: `k` counted base multiplications.
    pub fn mul_base(&self, a: &BigUint) -> ExtFieldElement {
        let f = &self.ctx.base;
        self.wrap(self.c.iter().map(|x| f.mul(x, a)).collect())
    }

    /// Counted inverse via the polynomial extended Euclidean algorithm.
    pub fn inv(&self) -> Result<ExtFieldElement> {
        ledger::record(Op::InvK);
        self.inv_raw().ok_or(Error::ZeroInverse)
    }

    fn inv_raw(&self) -> Option<ExtFieldElement> {
        if self.is_zero() {
            return None;
        }
        let f = &self.ctx.base;
        let (mut r0, mut r1) = (self.ctx.modulus_poly(), trim(self.c.clone()));
        let (mut t0, mut t1) = (vec![BigUint::zero()], vec![BigUint::one()]);
        while !is_zero_poly(&r1) {
            let (q, r) = poly_divrem(f, &r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let t = poly_sub(f, &t0, &poly_mul(f, &q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        // r0 is a nonzero constant since f is irreducible.
        let scale = f.inv_raw(&r0[0])?;
        let mut c: Vec<BigUint> = t0.iter().map(|t| f.mul_raw(t, &scale)).collect();
        c.resize(self.ctx.k, BigUint::zero());
        Some(self.wrap(c))
    }

    /// Counted left-to-right square-and-multiply (`SqK`/`MulK` only).
    pub fn pow(&self, e: &BigUint) -> ExtFieldElement {
        let mut acc = self.ctx.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            if i + 1 < bits {
                acc = acc.square();
            }
            if e.bit(i) {
                acc = if i + 1 == bits { self.clone() } else { acc.mul(self) };
            }
        }
        acc
    }

    /// Uncounted exponentiation.
    pub fn pow_raw(&self, e: &BigUint) -> ExtFieldElement {
        let mut acc = self.ctx.one();
        for i in (0..e.bits()).rev() {
            acc = acc.wrap(self.ctx.sqr_coeffs(&acc.c).0);
            if e.bit(i) {
                acc = acc.wrap(self.ctx.mul_coeffs(&acc.c, &self.c).0);
            }
        }
        acc
    }

    /// Uncounted product.
    pub fn mul_raw(&self, o: &ExtFieldElement) -> ExtFieldElement {
        self.wrap(self.ctx.mul_coeffs(&self.c, &o.c).0)
    }

    /// Concatenated fixed-width coefficients, constant term first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.ctx.byte_len());
        for c in &self.c {
            out.extend(self.ctx.base.to_bytes(c));
        }
        out
    }
}
