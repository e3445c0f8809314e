//! Instance generators for the bilinear Diffie-Hellman family.
//!
//! Every instance carries its hidden answer so tests can check it; nothing
//! here is meant for production use. With the symmetric pairing the two
//! source groups coincide and `P1 = psi(P2) = P2`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use rand_core::RngCore;

use super::{pairing, Gt};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assumption {
    /// `(P, aP, bP, cP)`, answer `e(P, P)^{abc}`.
    Bdh,
    /// `(P1, P2, x P2, ..., x^k P2)`, answer `e(P1, P2)^{1/x}`.
    KBdhi(usize),
    /// `(P1, P2, x P2, h0, (h_i, 1/(h_i + x) P2)_{i=1..k})`, answer
    /// `e(P1, P2)^{1/(x + h0)}`.
    KBcaa1(usize),
    /// `(P1, x^{k+2} P1, P2, x P2, ..., x^{2k} P2)` without `x^{k+1} P2`,
    /// answer `e(P1, P2)^{x^{k+1}}`.
    QAbdh(usize),
    /// `(g, h, g^x, ..., g^{x^k})`, answer `e(g, h)^{x^{k+1}}`.
    KWbdhiStar(usize),
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assumption::Bdh => write!(f, "bdh"),
            Assumption::KBdhi(k) => write!(f, "{k}-bdhi"),
            Assumption::KBcaa1(k) => write!(f, "{k}-bcaa1"),
            Assumption::QAbdh(k) => write!(f, "{k}-abdh"),
            Assumption::KWbdhiStar(k) => write!(f, "{k}-wbdhi*"),
        }
    }
}

impl FromStr for Assumption {
    type Err = Error;

    /// `bdh`, or `<k>-bdhi`, `<k>-bcaa1`, `<k>-abdh`, `<k>-wbdhi*`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Unknown {
            kind: "assumption",
            name: s.to_string(),
        };
        if s == "bdh" {
            return Ok(Assumption::Bdh);
        }
        let (k, name) = s.split_once('-').ok_or_else(unknown)?;
        let k: usize = k.parse().map_err(|_| unknown())?;
        match name {
            "bdhi" => Ok(Assumption::KBdhi(k)),
            "bcaa1" => Ok(Assumption::KBcaa1(k)),
            "abdh" => Ok(Assumption::QAbdh(k)),
            "wbdhi*" => Ok(Assumption::KWbdhiStar(k)),
            _ => Err(unknown()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Point(Point),
    Scalar(BigUint),
}

/// A public tuple, in the order the problem statement lists it, plus the
/// value an adversary would have to produce.
#[derive(Clone, Debug)]
pub struct Instance {
    pub kind: Assumption,
    pub public: Vec<(String, Entry)>,
    pub answer: Gt,
}

impl Instance {
    pub fn point(&self, name: &str) -> Option<&Point> {
        self.public.iter().find_map(|(n, e)| match e {
            Entry::Point(p) if n == name => Some(p),
            _ => None,
        })
    }

    pub fn scalar(&self, name: &str) -> Option<&BigUint> {
        self.public.iter().find_map(|(n, e)| match e {
            Entry::Scalar(s) if n == name => Some(s),
            _ => None,
        })
    }
}

/// Sample an instance of `kind` over `curve`.
pub fn instance(curve: &Arc<Curve>, kind: Assumption, rng: &mut dyn RngCore) -> Result<Instance> {
    let fr = curve.fr();
    let g = curve.generator().mul(&curve.random_scalar(rng));
    let base = pairing(&g, &g)?;
    let pt = |name: String, e: &BigUint| (name, Entry::Point(g.mul(e)));
    let powers = |x: &BigUint, n: usize| -> Vec<BigUint> {
        let mut out = vec![BigUint::from(1u8)];
        for i in 1..=n {
            out.push(fr.mul_raw(&out[i - 1], x));
        }
        out
    };
    let need_k = |k: usize| {
        if k == 0 {
            Err(Error::Config("assumption parameter k must be at least 1".into()))
        } else {
            Ok(())
        }
    };
    let mut public = Vec::new();
    let answer = match kind {
        Assumption::Bdh => {
            let (a, b, c) = (
                curve.random_scalar(rng),
                curve.random_scalar(rng),
                curve.random_scalar(rng),
            );
            public.push(("P".into(), Entry::Point(g.clone())));
            public.push(pt("aP".into(), &a));
            public.push(pt("bP".into(), &b));
            public.push(pt("cP".into(), &c));
            base.pow(&fr.mul_raw(&fr.mul_raw(&a, &b), &c))
        }
        Assumption::KBdhi(k) => {
            need_k(k)?;
            let x = curve.random_scalar(rng);
            let xs = powers(&x, k);
            public.push(("P1".into(), Entry::Point(g.clone())));
            for (i, xi) in xs.iter().enumerate() {
                public.push(pt(format!("x^{i}P2"), xi));
            }
            base.pow(&fr.inv_raw(&x).expect("x is nonzero"))
        }
        Assumption::KBcaa1(k) => {
            need_k(k)?;
            let x = curve.random_scalar(rng);
            let mut hs: Vec<BigUint> = Vec::with_capacity(k + 1);
            while hs.len() <= k {
                let h = fr.random(rng);
                let hx = fr.add(&h, &x);
                if hx != BigUint::from(0u8) && !hs.contains(&h) {
                    hs.push(h);
                }
            }
            public.push(("P1".into(), Entry::Point(g.clone())));
            public.push(("P2".into(), Entry::Point(g.clone())));
            public.push(pt("xP2".into(), &x));
            public.push(("h0".into(), Entry::Scalar(hs[0].clone())));
            for (i, h) in hs.iter().enumerate().skip(1) {
                let inv = fr.inv_raw(&fr.add(h, &x)).expect("h + x is nonzero");
                public.push((format!("h{i}"), Entry::Scalar(h.clone())));
                public.push(pt(format!("P2/(h{i}+x)"), &inv));
            }
            base.pow(&fr.inv_raw(&fr.add(&hs[0], &x)).expect("h0 + x is nonzero"))
        }
        Assumption::QAbdh(k) => {
            need_k(k)?;
            let x = curve.random_scalar(rng);
            let xs = powers(&x, 2 * k + 2);
            public.push(("P1".into(), Entry::Point(g.clone())));
            public.push(pt(format!("x^{}P1", k + 2), &xs[k + 2]));
            public.push(("P2".into(), Entry::Point(g.clone())));
            for (i, xi) in xs.iter().enumerate().take(2 * k + 1).skip(1) {
                if i != k + 1 {
                    public.push(pt(format!("x^{i}P2"), xi));
                }
            }
            base.pow(&xs[k + 1])
        }
        Assumption::KWbdhiStar(k) => {
            need_k(k)?;
            let x = curve.random_scalar(rng);
            let hexp = curve.random_scalar(rng);
            let xs = powers(&x, k + 1);
            public.push(("g".into(), Entry::Point(g.clone())));
            public.push(pt("h".into(), &hexp));
            for (i, xi) in xs.iter().enumerate().take(k + 1).skip(1) {
                public.push(pt(format!("g^x^{i}"), xi));
            }
            base.pow(&fr.mul_raw(&hexp, &xs[k + 1]))
        }
    };
    Ok(Instance { kind, public, answer })
}
