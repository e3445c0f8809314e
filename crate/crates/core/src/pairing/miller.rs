use std::sync::Arc;

use num_bigint::BigUint;
use rand_core::RngCore;

use crate::curve::jacobian::{self, AddOutcome, Jac};
use crate::curve::{Curve, ExtPoint, Point};
use crate::error::{Error, Result};
use crate::field::ExtFieldElement;
use crate::ledger::{self, Op};

/// Fresh auxiliary points tried before a pairing input is declared
/// degenerate.
pub const AUX_RETRIES: u32 = 16;

// Evaluation points of one Miller term: Q + S and S.
struct Eval {
    qs: (ExtFieldElement, ExtFieldElement),
    s: (ExtFieldElement, ExtFieldElement),
}

struct Term {
    p: (BigUint, BigUint),
    t: Option<Jac>,
    eval: Eval,
}

/// Running state of a (multi-)Miller loop evaluated at `[Q + S] - [S]`.
///
/// The accumulator is kept as `num / den` so that no inversion is needed
/// until the end. A doubling step spends `2 SqK + 4 MulK` on the
/// accumulator per loop, and each term adds a Jacobian doubling plus
/// `3M + 1S` of line coefficients and `6k` base-by-extension products.
pub struct MillerTrace {
    curve: Arc<Curve>,
    terms: Vec<Term>,
    num: ExtFieldElement,
    den: ExtFieldElement,
    steps: usize,
}

// Marker for "pick another S".
fn degenerate() -> Error {
    Error::PairingDegenerate(0)
}

fn is_degenerate(e: &Error) -> bool {
    matches!(e, Error::PairingDegenerate(0))
}

impl MillerTrace {
    /// Start a loop for `f_{r,P_i}` at `Q_i`. Auxiliary points `S_i` are
    /// drawn from `E(F_p) + phi(E(F_p))` without touching the ledger.
    pub fn new(curve: &Arc<Curve>, terms: &[(Point, ExtPoint)], rng: &mut dyn RngCore) -> Result<MillerTrace> {
        let mut out = Vec::with_capacity(terms.len());
        for (p, q) in terms {
            if !p.curve().same(curve) {
                return Err(Error::ContextMismatch);
            }
            let pa = p
                .to_affine()
                .ok_or(Error::Config("Miller loop needs a finite P".into()))?;
            let eval = ledger::untracked(|| aux_points(curve, q, rng))?;
            out.push(Term {
                t: Some(Jac::affine(pa.0.clone(), pa.1.clone())),
                p: pa,
                eval,
            });
        }
        let one = curve.fpk().one();
        Ok(MillerTrace {
            curve: Arc::clone(curve),
            terms: out,
            num: one.clone(),
            den: one,
            steps: 0,
        })
    }

    /// `T <- [2] T` for every term, folding tangents and verticals into
    /// `num <- num^2 l(Q+S) v(S)` and `den <- den^2 l(S) v(Q+S)`.
    pub fn double_step(&mut self) -> Result<()> {
        let f = Arc::clone(self.curve.fp());
        self.num = self.num.square();
        self.den = self.den.square();
        for term in &mut self.terms {
            let t = term.t.as_ref().ok_or_else(degenerate)?;
            ledger::record(Op::EcDbl);
            let (t2, parts) = jacobian::double(&f, self.curve.a4(), t).ok_or_else(degenerate)?;
            // Tangent times Z3 Z^2: (Z3 ZZ) y - (M ZZ) x + (M X - 2 YY).
            let cy = f.mul(&t2.z, &parts.zz);
            let cx = f.mul(&parts.m, &parts.zz);
            let c0 = f.sub(&f.mul(&parts.m, &t.x), &f.dbl(&parts.yy));
            let z3sq = f.sqr(&t2.z);
            let line = |x: &ExtFieldElement, y: &ExtFieldElement| y.mul_base(&cy).sub(&x.mul_base(&cx)).add_base(&c0);
            let vert = |x: &ExtFieldElement| x.mul_base(&z3sq).sub(&self.curve.fpk().from_base(&t2.x));
            let (xq, yq) = &term.eval.qs;
            let (xs, ys) = &term.eval.s;
            let (lq, ls) = (line(xq, yq), line(xs, ys));
            let (vq, vs) = (vert(xq), vert(xs));
            if lq.is_zero() || ls.is_zero() || vq.is_zero() || vs.is_zero() {
                return Err(degenerate());
            }
            self.num = self.num.mul(&lq).mul(&vs);
            self.den = self.den.mul(&ls).mul(&vq);
            term.t = Some(t2);
        }
        self.steps += 1;
        Ok(())
    }

    /// `T <- T + P` for every term, with the chord through `T` and `P`.
    /// When `T = -P` the chord is the vertical `x - x_P` and the new
    /// vertical is trivial.
    pub fn add_step(&mut self) -> Result<()> {
        let f = Arc::clone(self.curve.fp());
        let fpk = Arc::clone(self.curve.fpk());
        for term in &mut self.terms {
            let t = term.t.as_ref().ok_or_else(degenerate)?;
            let (xp, yp) = &term.p;
            let pj = Jac::affine(xp.clone(), yp.clone());
            ledger::record(Op::EcAdd);
            let (lq, ls, vq, vs, next) = match jacobian::add(&f, t, &pj) {
                AddOutcome::Sum(t3, r) => {
                    let c0 = f.sub(&f.mul(&r, xp), &f.mul(&t3.z, yp));
                    let z3sq = f.sqr(&t3.z);
                    let line =
                        |x: &ExtFieldElement, y: &ExtFieldElement| y.mul_base(&t3.z).sub(&x.mul_base(&r)).add_base(&c0);
                    let vert = |x: &ExtFieldElement| x.mul_base(&z3sq).sub(&fpk.from_base(&t3.x));
                    let (xq, yq) = &term.eval.qs;
                    let (xs, ys) = &term.eval.s;
                    (line(xq, yq), line(xs, ys), vert(xq), vert(xs), Some(t3))
                }
                AddOutcome::Infinity => {
                    let neg_xp = f.neg(xp);
                    let lq = term.eval.qs.0.add_base(&neg_xp);
                    let ls = term.eval.s.0.add_base(&neg_xp);
                    (lq, ls, fpk.one(), fpk.one(), None)
                }
                // T = P cannot occur while fewer than r multiples are
                // accumulated.
                AddOutcome::Double => return Err(Error::OrderMismatch),
            };
            if lq.is_zero() || ls.is_zero() || vq.is_zero() || vs.is_zero() {
                return Err(degenerate());
            }
            self.num = self.num.mul(&lq).mul(&vs);
            self.den = self.den.mul(&ls).mul(&vq);
            term.t = next;
        }
        Ok(())
    }

    /// Doubling steps taken so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Current running points `T_i`.
    pub fn running(&self) -> Vec<Point> {
        self.terms
            .iter()
            .map(|t| Point::from_jac(&self.curve, t.t.clone()))
            .collect()
    }

    pub fn accumulator(&self) -> (&ExtFieldElement, &ExtFieldElement) {
        (&self.num, &self.den)
    }

    /// `num / den` (one `InvK`, one `MulK`).
    fn value(&self) -> Result<ExtFieldElement> {
        Ok(self.num.mul(&self.den.inv()?))
    }
}

// S = R1 + phi(R2) with R1, R2 uniform in E(F_p); reject S = O, Q + S = O.
fn aux_points(curve: &Arc<Curve>, q: &ExtPoint, rng: &mut dyn RngCore) -> Result<Eval> {
    let r1 = curve.random_point(rng)?;
    let r2 = curve.random_point(rng)?;
    let a4 = curve.a4_ext();
    let s = curve.embed(&r1).add(&curve.distort(&r2)?, a4);
    let qs = q.add(&s, a4);
    match (s.xy, qs.xy) {
        (Some(s), Some(qs)) => Ok(Eval { qs, s }),
        _ => Err(degenerate()),
    }
}

/// Run the loop for `r` over all terms, retrying with fresh auxiliary
/// points on any zero evaluation. Returns `f(D_Q)` and the final `T_i`.
pub(crate) fn run(
    curve: &Arc<Curve>,
    terms: &[(Point, ExtPoint)],
    r: &BigUint,
    rng: &mut dyn RngCore,
) -> Result<(ExtFieldElement, Vec<Point>)> {
    let bits = r.bits();
    for _ in 0..AUX_RETRIES {
        let attempt = MillerTrace::new(curve, terms, rng).and_then(|mut trace| {
            for i in (0..bits.saturating_sub(1)).rev() {
                trace.double_step()?;
                if r.bit(i) {
                    trace.add_step()?;
                }
            }
            Ok((trace.value()?, trace.running()))
        });
        match attempt {
            Err(e) if is_degenerate(&e) => continue,
            other => return other,
        }
    }
    Err(Error::PairingDegenerate(AUX_RETRIES))
}
