//! Curve context, group law and identity hashing.

mod ext_point;
pub(crate) mod jacobian;
mod point;
mod profile;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand_core::RngCore;

pub use ext_point::ExtPoint;
pub use point::{naf, Point};
pub use profile::CurveProfile;

use crate::error::{Error, Result};
use crate::field::{ExtField, ExtFieldElement, FieldRole, PrimeField};
use crate::hash;
use crate::ledger::{self, Op};

/// Admissible-encoding attempts before `map_to_point` gives up.
pub const MAP_TO_POINT_RETRIES: u32 = 256;

/// Validated curve parameters plus the derived field contexts.
pub struct Curve {
    profile: CurveProfile,
    fp: Arc<PrimeField>,
    fr: Arc<PrimeField>,
    fpk: Arc<ExtField>,
    a4_k: ExtFieldElement,
    a6_k: ExtFieldElement,
    /// Primitive cube root of unity in `F_{p^k}`, present when the curve
    /// admits the distortion map `(x, y) -> (zeta x, y)`.
    zeta: Option<ExtFieldElement>,
    /// `(2p - 1) / 3`, present when `p = 2 mod 3` and `a4 = 0`.
    cube_root_exp: Option<BigUint>,
    final_exp: BigUint,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({})", self.profile.name)
    }
}

impl Curve {
    /// Validate a profile and build its contexts.
    ///
    /// Checks primality of `p` and `r`, the discriminant, `#E(F_p) = r cof`
    /// (by enumeration for small `p`, by the supersingular order formula
    /// otherwise), the embedding degree, irreducibility of the extension
    /// modulus, and that the generator has order `r`.
    pub fn new(profile: CurveProfile) -> Result<Arc<Curve>> {
        ledger::untracked(|| Curve::build(profile))
    }

    pub fn tiny() -> Arc<Curve> {
        Curve::new(CurveProfile::tiny()).expect("tiny profile is valid")
    }

    pub fn bench() -> Arc<Curve> {
        Curve::new(CurveProfile::bench()).expect("bench profile is valid")
    }

    fn build(profile: CurveProfile) -> Result<Arc<Curve>> {
        let bad = |m: &str| Error::InvalidCurve(m.to_string());
        let fp = PrimeField::new(profile.p.clone(), FieldRole::Base).map_err(|_| bad("p is not prime"))?;
        let fr = PrimeField::new(profile.r.clone(), FieldRole::Scalar).map_err(|_| bad("r is not prime"))?;
        let p = &profile.p;
        if profile.a4 >= *p || profile.a6 >= *p || profile.gx >= *p || profile.gy >= *p {
            return Err(bad("coefficients must be reduced mod p"));
        }
        let disc = fp.add(
            &fp.small_mul(&fp.pow_raw(&profile.a4, &BigUint::from(3u8)), 4),
            &fp.small_mul(&fp.sqr_raw(&profile.a6), 27),
        );
        if disc.is_zero() {
            return Err(bad("singular curve"));
        }
        let order = group_order(&profile).ok_or_else(|| bad("cannot verify the group order of this curve"))?;
        if &profile.r * &profile.cof != order {
            return Err(bad("r * cof differs from the group order"));
        }
        for j in 1..profile.k {
            if p.modpow(&BigUint::from(j), &profile.r).is_one() {
                return Err(bad("embedding degree is smaller than k"));
            }
        }
        let pk = p.pow(profile.k as u32);
        let pk_minus_1 = &pk - 1u32;
        if !(&pk_minus_1 % &profile.r).is_zero() {
            return Err(bad("r does not divide p^k - 1"));
        }
        let fpk = ExtField::new(Arc::clone(&fp), profile.ext.clone())
            .map_err(|_| bad("extension modulus is not irreducible of degree k"))?;

        let three = BigUint::from(3u8);
        let p_mod_3 = p % &three;
        let supersingular_j0 = profile.a4.is_zero() && p_mod_3 == BigUint::from(2u8);
        let cube_root_exp = supersingular_j0.then(|| (p * 2u32 - 1u32) / &three);
        let zeta = if supersingular_j0 && profile.k == 2 {
            Some(cube_root_of_unity(&fpk, &pk_minus_1))
        } else {
            None
        };
        let curve = Arc::new(Curve {
            a4_k: fpk.from_base(&profile.a4),
            a6_k: fpk.from_base(&profile.a6),
            final_exp: pk_minus_1 / &profile.r,
            profile,
            fp,
            fr,
            fpk,
            zeta,
            cube_root_exp,
        });
        if !curve.contains(&curve.profile.gx, &curve.profile.gy) {
            return Err(Error::NotOnCurve);
        }
        let g = curve.generator();
        if g.is_infinity() || !g.in_subgroup() {
            return Err(bad("generator does not have order r"));
        }
        Ok(curve)
    }

    pub fn profile(&self) -> &CurveProfile {
        &self.profile
    }

    pub fn name(&self) -> &str {
        &self.profile.name
    }

    pub fn same(&self, other: &Curve) -> bool {
        std::ptr::eq(self, other) || self.profile == other.profile
    }

    /// Coordinate field `F_p`.
    pub fn fp(&self) -> &Arc<PrimeField> {
        &self.fp
    }

    /// Exponent field `Z_r`.
    pub fn fr(&self) -> &Arc<PrimeField> {
        &self.fr
    }

    /// Pairing target field `F_{p^k}`.
    pub fn fpk(&self) -> &Arc<ExtField> {
        &self.fpk
    }

    pub fn a4(&self) -> &BigUint {
        &self.profile.a4
    }

    pub fn a6(&self) -> &BigUint {
        &self.profile.a6
    }

    pub fn r(&self) -> &BigUint {
        &self.profile.r
    }

    pub fn cof(&self) -> &BigUint {
        &self.profile.cof
    }

    pub fn k(&self) -> usize {
        self.profile.k
    }

    /// `(p^k - 1) / r`.
    pub fn final_exponent(&self) -> &BigUint {
        &self.final_exp
    }

    pub fn zeta(&self) -> Option<&ExtFieldElement> {
        self.zeta.as_ref()
    }

    pub fn generator(self: &Arc<Self>) -> Point {
        let (x, y) = (self.profile.gx.clone(), self.profile.gy.clone());
        Point::from_jac(self, Some(jacobian::Jac::affine(x, y)))
    }

    pub fn contains(&self, x: &BigUint, y: &BigUint) -> bool {
        let f = &self.fp;
        y < f.modulus() && x < f.modulus() && f.sqr_raw(y) == self.rhs(x)
    }

    fn rhs(&self, x: &BigUint) -> BigUint {
        let f = &self.fp;
        let x3 = f.mul_raw(&f.sqr_raw(x), x);
        f.add(&f.add(&x3, &f.mul_raw(&self.profile.a4, x)), &self.profile.a6)
    }

    /// Affine point after an on-curve check. Subgroup membership is not
    /// checked; see [`Curve::subgroup_point`].
    pub fn point(self: &Arc<Self>, x: BigUint, y: BigUint) -> Result<Point> {
        if !self.contains(&x, &y) {
            return Err(Error::NotOnCurve);
        }
        Ok(Point::from_jac(self, Some(jacobian::Jac::affine(x, y))))
    }

    /// Affine point of order dividing `r`.
    pub fn subgroup_point(self: &Arc<Self>, x: BigUint, y: BigUint) -> Result<Point> {
        let pt = self.point(x, y)?;
        if !pt.in_subgroup() {
            return Err(Error::NotInSubgroup);
        }
        Ok(pt)
    }

    /// Inverse of [`Point::to_bytes`], with on-curve and subgroup checks.
    pub fn point_from_bytes(self: &Arc<Self>, bytes: &[u8]) -> Result<Point> {
        let w = self.fp.byte_len();
        match bytes.first() {
            Some(0) if bytes.len() == 1 => Ok(Point::infinity(self)),
            Some(4) if bytes.len() == 1 + 2 * w => {
                let x = self.fp.from_bytes(&bytes[1..1 + w])?;
                let y = self.fp.from_bytes(&bytes[1 + w..])?;
                self.subgroup_point(x, y)
            }
            _ => Err(Error::Malformed("bad point encoding".into())),
        }
    }

    pub fn point_byte_len(&self) -> usize {
        1 + 2 * self.fp.byte_len()
    }

    /// All affine points of `E(F_p)` plus infinity. Only sensible for tiny
    /// fields; used by brute-force oracles.
    pub fn enumerate(self: &Arc<Self>) -> Vec<Point> {
        let p = self.fp.modulus().to_u64_digits().first().copied().unwrap_or(0);
        assert!(self.fp.modulus().bits() <= 20, "enumeration needs a tiny field");
        let mut out = vec![Point::infinity(self)];
        for x in 0..p {
            for y in 0..p {
                let (x, y) = (BigUint::from(x), BigUint::from(y));
                if self.contains(&x, &y) {
                    out.push(Point::from_jac(self, Some(jacobian::Jac::affine(x, y))));
                }
            }
        }
        out
    }

    /// Uniform point of `E(F_p)` via a random `y` and the unique cube root,
    /// not counted. Needs `a4 = 0` and `p = 2 mod 3`.
    pub fn random_point(self: &Arc<Self>, rng: &mut dyn RngCore) -> Result<Point> {
        let e = self.cube_root_exp.as_ref().ok_or(Error::MapToPointUnsupported)?;
        let f = &self.fp;
        let y = f.random(rng);
        let x = f.pow_raw(&f.sub(&f.sqr_raw(&y), &self.profile.a6), e);
        Ok(Point::from_jac(self, Some(jacobian::Jac::affine(x, y))))
    }

    /// Random nonzero scalar in `Z_r`, not counted.
    pub fn random_scalar(&self, rng: &mut dyn RngCore) -> BigUint {
        self.fr.random_nonzero(rng)
    }

    /// Hash an identity onto the order-`r` subgroup: `y0 = H1(id)`,
    /// `x0 = (y0^2 - a6)^((2p - 1) / 3)`, `Q = [cof] (x0, y0)`, retrying with
    /// a counter while `Q` is the point at infinity.
    pub fn map_to_point(self: &Arc<Self>, id: &[u8]) -> Result<Point> {
        let e = self.cube_root_exp.as_ref().ok_or(Error::MapToPointUnsupported)?;
        let f = &self.fp;
        ledger::nested(Op::MapToPoint, || {
            for ctr in 0..MAP_TO_POINT_RETRIES {
                let y0 = hash::to_residue(f, "H1-point", &[id, &ctr.to_be_bytes()]);
                let x0 = f.pow(&f.sub(&f.sqr(&y0), &self.profile.a6), e);
                let q = Point::from_jac(self, Some(jacobian::Jac::affine(x0, y0)));
                let q = q.mul(&self.profile.cof);
                if !q.is_infinity() {
                    return Ok(q);
                }
            }
            Err(Error::HashRetriesExhausted)
        })
    }

    /// Hash bytes to `Z_r` under a domain tag.
    pub fn hash_to_scalar(&self, domain: &str, parts: &[&[u8]]) -> BigUint {
        hash::to_residue(&self.fr, domain, parts)
    }

    /// Embed a base-field point into `E(F_{p^k})`.
    pub fn embed(&self, pt: &Point) -> ExtPoint {
        match pt.to_affine() {
            None => ExtPoint::infinity(),
            Some((x, y)) => ExtPoint::new(self.fpk.from_base(&x), self.fpk.from_base(&y)),
        }
    }

    /// The distortion map `(x, y) -> (zeta x, y)`.
    pub fn distort(&self, pt: &Point) -> Result<ExtPoint> {
        let zeta = self
            .zeta
            .as_ref()
            .ok_or_else(|| Error::Config(format!("curve {} has no distortion map", self.profile.name)))?;
        Ok(match pt.to_affine() {
            None => ExtPoint::infinity(),
            Some((x, y)) => ExtPoint::new(zeta.mul_raw(&self.fpk.from_base(&x)), self.fpk.from_base(&y)),
        })
    }

    pub fn a4_ext(&self) -> &ExtFieldElement {
        &self.a4_k
    }

    pub fn a6_ext(&self) -> &ExtFieldElement {
        &self.a6_k
    }
}

// #E(F_p) by enumeration for p < 2^16, else the order p + 1 of the two
// supersingular families with a known closed form.
fn group_order(profile: &CurveProfile) -> Option<BigUint> {
    let p = &profile.p;
    if p.bits() <= 16 {
        let pu = p.to_u64_digits()[0];
        let (a4, a6) = (small(&profile.a4), small(&profile.a6));
        let mut squares = vec![0u64; pu as usize];
        for y in 0..pu {
            squares[(y * y % pu) as usize] += 1;
        }
        let mut n = 1u64;
        for x in 0..pu {
            let rhs = (x * x % pu * x + a4 * x + a6) % pu;
            n += squares[rhs as usize];
        }
        return Some(BigUint::from(n));
    }
    let three = BigUint::from(3u8);
    let four = BigUint::from(4u8);
    let j0 = profile.a4.is_zero() && p % &three == BigUint::from(2u8);
    let j1728 = profile.a6.is_zero() && p % &four == three;
    (j0 || j1728).then(|| p + 1u32)
}

fn small(v: &BigUint) -> u64 {
    v.to_u64_digits().first().copied().unwrap_or(0)
}

// z^((p^2 - 1) / 3) is a cube root of unity; the first one different from 1
// is primitive.
fn cube_root_of_unity(fpk: &Arc<ExtField>, pk_minus_1: &BigUint) -> ExtFieldElement {
    let e = pk_minus_1.div_floor(&BigUint::from(3u8));
    let k = fpk.degree();
    for c in 1u32.. {
        let mut coeffs = vec![BigUint::zero(); k];
        coeffs[0] = BigUint::from(c);
        coeffs[1] = BigUint::one();
        let z = fpk.from_coeffs(coeffs).expect("k coefficients").pow_raw(&e);
        if !z.is_one() {
            return z;
        }
    }
    unreachable!()
}
