//! Closed-form adversary advantages per scheme.
//!
//! Values are `f64`: the comparisons that matter are many orders of
//! magnitude apart, and `(1 - 2/p)^{q_D}` is only meaningful as a float.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::schemes::SchemeId;

/// Query counts and sizes feeding the formulas.
#[derive(Clone, Debug, PartialEq)]
pub struct AdvantageInputs {
    pub eps: f64,
    /// Hash queries, the generic `q_H`.
    pub q_h: f64,
    pub q_h1: f64,
    pub q_h2: f64,
    pub q_h3: f64,
    pub q_h4: f64,
    /// Signature (key extraction) queries in the selective-to-full step.
    pub q_s: f64,
    pub q_d: f64,
    pub q_e: f64,
    /// Extraction queries in the SK reduction.
    pub q_1: f64,
    /// Challenge-side queries in the Gentry bound.
    pub q_c: f64,
    /// Queries in the Waters bound.
    pub q: f64,
    /// Identity length in bits; the identity space has `2^n` members.
    pub n: f64,
    pub p: f64,
}

impl AdvantageInputs {
    /// One hash-query count for every oracle.
    pub fn uniform(eps: f64, q_h: f64, q_s: f64, q_d: f64, n: f64, p: f64) -> AdvantageInputs {
        AdvantageInputs {
            eps,
            q_h,
            q_h1: q_h,
            q_h2: q_h,
            q_h3: q_h,
            q_h4: q_h,
            q_s,
            q_d,
            q_e: q_s,
            q_1: q_s,
            q_c: q_s,
            q: q_h,
            n,
            p,
        }
    }

    /// `q_S, q_D < q_H < 2^n << p`, with the per-scheme counts below
    /// `q_H` as well.
    pub fn satisfies_constraint(&self) -> bool {
        let two_n = self.n.exp2();
        self.q_s < self.q_h
            && self.q_d < self.q_h
            && self.q_1 + 1.0 < self.q_h3
            && self.q_c <= self.q_h
            && self.q_h < two_n - self.q_s
            && two_n < self.p
            && self.p > 2.0
    }

    /// A random point inside the constraint region.
    pub fn sample(rng: &mut dyn RngCore) -> AdvantageInputs {
        let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let eps = (-10.0 - 30.0 * unit()).exp2();
        let q_s = (5.0 + 7.0 * unit()).exp2().floor();
        let q_d = (5.0 + 7.0 * unit()).exp2().floor();
        let q_1 = (5.0 + 7.0 * unit()).exp2().floor();
        let floor = q_s.max(q_d).max(q_1) + 2.0;
        let q_h = (floor + (2f64.powi(20) - floor) * unit()).floor().max(floor);
        let q_c = (1.0 + (q_h - 1.0) * unit()).floor();
        let n = (32.0 + 224.0 * unit()).floor();
        let p = (n.max(160.0) + 1.0 + 352.0 * unit()).exp2();
        AdvantageInputs {
            q_1,
            q_c,
            ..AdvantageInputs::uniform(eps, q_h, q_s, q_d, n, p)
        }
    }
}

fn decryption_loss(x: &AdvantageInputs) -> f64 {
    (x.q_d * (-2.0 / x.p).ln_1p()).exp()
}

/// The simplified forms. [`Error::DivisionByZero`] on `q_H3 = 0` or
/// `2^n = q_S`.
pub fn advantage_eval(scheme: SchemeId, x: &AdvantageInputs) -> Result<f64> {
    if x.p <= 2.0 {
        return Err(Error::Config("p must exceed 2".into()));
    }
    let two_n = x.n.exp2();
    Ok(match scheme {
        SchemeId::Bf => {
            if x.q_h3 == 0.0 {
                return Err(Error::DivisionByZero("Adv_BF (q_H3 = 0)"));
            }
            x.eps / x.q_h3 * decryption_loss(x)
        }
        SchemeId::Sk => x.eps / (x.q_1 + 1.0) * decryption_loss(x),
        SchemeId::Bb1 => {
            if two_n == x.q_s {
                return Err(Error::DivisionByZero("Adv_BB1 (2^n = q_S)"));
            }
            x.eps * two_n * x.q_h / (two_n - x.q_s)
        }
        SchemeId::Bb2 => x.eps * two_n,
        SchemeId::Waters => {
            let den = 32.0 * (x.n + 1.0) * x.q;
            if den == 0.0 {
                return Err(Error::DivisionByZero("Adv_Water (q = 0)"));
            }
            x.eps / den
        }
        SchemeId::Gentry => x.eps + 4.0 * x.q_c / x.p,
    })
}

/// The unsimplified BF bound, optionally with its trailing `-3/6`.
///
/// Kept only to document that the trailing term cannot belong there: with
/// it the bound is negative for every realistic input.
pub fn bf_full_form(x: &AdvantageInputs, trailing_term: bool) -> f64 {
    // (1 + a)(1 - 2/p)^{q_D} - 1 through ln_1p / exp_m1, since `1 + a`
    // rounds to 1 for realistic `a`.
    let a = x.eps / x.q_h2 * (1.0 - x.q_e / x.q_h1);
    let inner = (a.ln_1p() + x.q_d * (-2.0 / x.p).ln_1p()).exp_m1();
    let v = inner / ((x.q_h3 + x.q_h4) * x.q_h2);
    if trailing_term {
        v - 3.0 / 6.0
    } else {
        v
    }
}

/// Schemes from smallest to largest advantage under `x`.
pub fn advantage_order(x: &AdvantageInputs) -> Result<Vec<(SchemeId, f64)>> {
    let mut v = SchemeId::ALL
        .iter()
        .map(|&s| advantage_eval(s, x).map(|a| (s, a)))
        .collect::<Result<Vec<_>>>()?;
    v.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(v)
}

/// Whether the ordering is strict at every step.
pub fn strictly_ordered(order: &[(SchemeId, f64)]) -> bool {
    order.windows(2).all(|w| w[0].1 < w[1].1)
}
