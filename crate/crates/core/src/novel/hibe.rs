//! Constant-ciphertext HIBE with identity components in `Z_r`.
//!
//! Params `(g, P_pub = g^l, x = e(g, g), y_i = x^{a_i}, g^{a_i})` for
//! `i = 1..v`. A level-`j` key for `(I_1, ..., I_j)` is
//!
//! ```text
//! d0   = g^{(sum_{i<j} (a_i + I_i) + s_j a_j + I_j + acc) / l}
//! corr = g^{sum_i (s_i - 1) a_i}
//! tail = g^{1/l}, g^{a_{j+1}/l}, ..., g^{a_v/l}
//! ```
//!
//! where `acc` collects the folded-in randomness of earlier levels. A
//! ciphertext `(g^{ls}, g^s, m (x^{sum I_i} y_1 ... y_j)^s)` opens as
//! `c e(u'', corr) / e(u', d0)`. Only the deepest level carries a live
//! `s_j`; delegation folds it in and draws a fresh one.
//!
//! Whoever knows `s_j` computes `corr` and ships it with the key. A key
//! without a tail (see [`extract_user`]) decrypts but cannot delegate.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand_core::RngCore;

use crate::codec::{Element, ElementMap, Envelope, Kind};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::identity::Identity;
use crate::ledger;
use crate::pairing::{pairing, Gt};

pub const SCHEME_NAME: &str = "our-hibe";

/// Fresh randomness drawn before a degenerate (identity) key component is
/// accepted anyway.
pub const RESAMPLE_LIMIT: usize = 16;

#[derive(Clone, Debug)]
pub struct HibeParams {
    pub curve: Arc<Curve>,
    pub g: Point,
    pub p_pub: Point,
    pub x: Gt,
    /// `y_i = x^{a_i}`, `i = 1..v`.
    pub y: Vec<Gt>,
    /// `g^{a_i}`, `i = 1..v`.
    pub g_a: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HibeMaster {
    pub l: BigUint,
    pub a: Vec<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HibeKey {
    /// `(I_1, ..., I_j)`.
    pub ids: Vec<BigUint>,
    pub d0: Point,
    /// `g^{sum (s_i - 1) a_i}`.
    pub corr: Point,
    /// `g^{1/l}`; absent on user-only keys.
    pub tail_one: Option<Point>,
    /// `g^{a_k/l}` for `k = j+1..v`.
    pub tail: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HibeCiphertext {
    pub depth: usize,
    pub u1: Point,
    pub u2: Point,
    pub c: Gt,
}

impl HibeParams {
    /// Maximum depth `v`.
    pub fn depth(&self) -> usize {
        self.y.len()
    }
}

impl HibeKey {
    pub fn level(&self) -> usize {
        self.ids.len()
    }

    pub fn can_delegate(&self) -> bool {
        self.tail_one.is_some()
    }
}

impl HibeCiphertext {
    /// Group elements carried: always three.
    pub fn arity(&self) -> usize {
        3
    }
}

/// Hash each component of an identity tuple into `Z_r`.
pub fn hash_identity(curve: &Curve, id: &Identity) -> Vec<BigUint> {
    id.components()
        .iter()
        .map(|c| curve.hash_to_scalar("hibe-I", &[c]))
        .collect()
}

pub fn setup(curve: &Arc<Curve>, v: usize, rng: &mut dyn RngCore) -> Result<(HibeParams, HibeMaster)> {
    if v == 0 {
        return Err(Error::Config("hierarchy depth must be at least 1".into()));
    }
    let l = curve.random_scalar(rng);
    let a: Vec<BigUint> = (0..v).map(|_| curve.random_scalar(rng)).collect();
    let g = curve.generator();
    let p_pub = g.mul(&l);
    let x = pairing(&g, &g)?;
    let y = a.iter().map(|ai| x.pow(ai)).collect();
    let g_a = a.iter().map(|ai| g.mul(ai)).collect();
    Ok((
        HibeParams {
            curve: Arc::clone(curve),
            g,
            p_pub,
            x,
            y,
            g_a,
        },
        HibeMaster { l, a },
    ))
}

fn check_depth(params: &HibeParams, j: usize) -> Result<()> {
    if j == 0 || j > params.depth() {
        return Err(Error::DepthOverflow {
            depth: j,
            max: params.depth(),
        });
    }
    Ok(())
}

// (d0, corr) for a PKG-issued key, resampling s_j while d0 is the identity.
fn pkg_core(
    params: &HibeParams,
    msk: &HibeMaster,
    ids: &[BigUint],
    linv: &BigUint,
    rng: &mut dyn RngCore,
) -> (Point, Point) {
    let fr = params.curve.fr();
    let j = ids.len();
    let mut base = BigUint::from(0u8);
    for (a, id) in msk.a.iter().zip(&ids[..j - 1]) {
        base = fr.add(&base, &fr.add(a, id));
    }
    base = fr.add(&base, &ids[j - 1]);
    let aj = &msk.a[j - 1];
    let mut attempt = 0;
    loop {
        let s = params.curve.random_scalar(rng);
        let e = fr.add(&base, &fr.mul_raw(&s, aj));
        let d0_exp = fr.mul_raw(&e, linv);
        let degenerate = d0_exp == BigUint::from(0u8);
        attempt += 1;
        if degenerate && attempt < RESAMPLE_LIMIT {
            continue;
        }
        let corr_exp = fr.mul_raw(&fr.sub(&s, &BigUint::one()), aj);
        return (params.g.mul(&d0_exp), params.g.mul(&corr_exp));
    }
}

/// Delegable key for `ids` straight from the master secret.
pub fn extract(params: &HibeParams, msk: &HibeMaster, ids: &[BigUint], rng: &mut dyn RngCore) -> Result<HibeKey> {
    check_depth(params, ids.len())?;
    let fr = params.curve.fr();
    let linv = fr.inv(&msk.l).ok_or(Error::ZeroInverse)?;
    let (d0, corr) = pkg_core(params, msk, ids, &linv, rng);
    let tail_one = params.g.mul(&linv);
    let tail = msk.a[ids.len()..]
        .iter()
        .map(|ak| params.g.mul(&fr.mul_raw(ak, &linv)))
        .collect();
    Ok(HibeKey {
        ids: ids.to_vec(),
        d0,
        corr,
        tail_one: Some(tail_one),
        tail,
    })
}

/// The user's decryption-only key `(d0, corr)`: two exponentiations in
/// `G1`.
pub fn extract_user(params: &HibeParams, msk: &HibeMaster, ids: &[BigUint], rng: &mut dyn RngCore) -> Result<HibeKey> {
    check_depth(params, ids.len())?;
    // 1/l depends only on the master secret, so a PKG computes it once.
    let linv = ledger::untracked(|| params.curve.fr().inv_raw(&msk.l)).ok_or(Error::ZeroInverse)?;
    let (d0, corr) = pkg_core(params, msk, ids, &linv, rng);
    Ok(HibeKey {
        ids: ids.to_vec(),
        d0,
        corr,
        tail_one: None,
        tail: Vec::new(),
    })
}

/// Child key for `(I_1, ..., I_j, id)` from a level-`j` key alone.
pub fn delegate(params: &HibeParams, parent: &HibeKey, id: &BigUint, rng: &mut dyn RngCore) -> Result<HibeKey> {
    let j = parent.level();
    check_depth(params, j + 1)?;
    let tail_one = parent
        .tail_one
        .as_ref()
        .ok_or_else(|| Error::MissingElement("tail_one".into()))?;
    let (tail_a, rest) = parent
        .tail
        .split_first()
        .ok_or_else(|| Error::MissingElement(format!("tail_a{}", j + 2)))?;
    let fr = params.curve.fr();
    let mut attempt = 0;
    let (d0, s) = loop {
        let s = params.curve.random_scalar(rng);
        let d0 = Point::msm(
            &params.curve,
            &[(&BigUint::one(), &parent.d0), (&s, tail_a), (id, tail_one)],
        )?;
        attempt += 1;
        if !d0.is_infinity() || attempt >= RESAMPLE_LIMIT {
            break (d0, s);
        }
    };
    let corr = parent.corr.add(&params.g_a[j].mul(&fr.sub(&s, &BigUint::one())));
    let mut ids = parent.ids.clone();
    ids.push(id.clone());
    Ok(HibeKey {
        ids,
        d0,
        corr,
        tail_one: Some(tail_one.clone()),
        tail: rest.to_vec(),
    })
}

/// `(u' = P_pub^s, u'' = g^s, c = m (x^{sum I_i})^s prod y_i^s)`.
pub fn encrypt(params: &HibeParams, ids: &[BigUint], m: &Gt, rng: &mut dyn RngCore) -> Result<HibeCiphertext> {
    check_depth(params, ids.len())?;
    let curve = &params.curve;
    if !m.curve().same(curve) {
        return Err(Error::ContextMismatch);
    }
    let fr = curve.fr();
    let s = curve.random_scalar(rng);
    let u1 = params.p_pub.mul(&s);
    let u2 = params.g.mul(&s);
    let sum = ids.iter().fold(BigUint::from(0u8), |acc, i| fr.add(&acc, i));
    let mut c = m.mul(&params.x.pow(&sum).pow(&s));
    for yi in &params.y[..ids.len()] {
        c = c.mul(&yi.pow(&s));
    }
    Ok(HibeCiphertext {
        depth: ids.len(),
        u1,
        u2,
        c,
    })
}

pub fn decrypt(params: &HibeParams, key: &HibeKey, ct: &HibeCiphertext) -> Result<Gt> {
    if key.level() != ct.depth {
        return Err(Error::DepthMismatch {
            key: key.level(),
            ct: ct.depth,
        });
    }
    if !ct.u1.curve().same(&params.curve) || !ct.u2.curve().same(&params.curve) {
        return Err(Error::ContextMismatch);
    }
    let num = ct.c.mul(&pairing(&ct.u2, &key.corr)?);
    Ok(num.div(&pairing(&ct.u1, &key.d0)?))
}

fn env(kind: Kind, curve: &Curve, elements: ElementMap) -> Envelope {
    Envelope {
        kind,
        scheme: SCHEME_NAME.into(),
        profile: curve.name().into(),
        identity: None,
        elements,
    }
}

impl HibeParams {
    pub fn to_envelope(&self) -> Envelope {
        let mut m = ElementMap::new()
            .with("g", Element::Point(self.g.clone()))
            .with("P_pub", Element::Point(self.p_pub.clone()))
            .with("x", Element::Gt(self.x.clone()));
        for (i, (y, ga)) in self.y.iter().zip(&self.g_a).enumerate() {
            m.set(format!("y{}", i + 1), Element::Gt(y.clone()));
            m.set(format!("g_a{}", i + 1), Element::Point(ga.clone()));
        }
        env(Kind::Params, &self.curve, m)
    }

    pub fn from_envelope(e: &Envelope, curve: &Arc<Curve>) -> Result<HibeParams> {
        e.expect(Kind::Params, SCHEME_NAME)?;
        let m = &e.elements;
        let v = (1..).take_while(|i| m.contains(&format!("y{i}"))).count();
        if v == 0 {
            return Err(Error::MissingElement("y1".into()));
        }
        Ok(HibeParams {
            curve: Arc::clone(curve),
            g: m.point("g")?.clone(),
            p_pub: m.point("P_pub")?.clone(),
            x: m.gt("x")?.clone(),
            y: (1..=v)
                .map(|i| m.gt(&format!("y{i}")).cloned())
                .collect::<Result<_>>()?,
            g_a: (1..=v)
                .map(|i| m.point(&format!("g_a{i}")).cloned())
                .collect::<Result<_>>()?,
        })
    }
}

impl HibeMaster {
    pub fn to_envelope(&self, curve: &Curve) -> Envelope {
        let mut m = ElementMap::new().with("l", Element::Scalar(self.l.clone()));
        for (i, a) in self.a.iter().enumerate() {
            m.set(format!("a{}", i + 1), Element::Scalar(a.clone()));
        }
        env(Kind::MasterSecret, curve, m)
    }

    pub fn from_envelope(e: &Envelope) -> Result<HibeMaster> {
        e.expect(Kind::MasterSecret, SCHEME_NAME)?;
        let m = &e.elements;
        let v = (1..).take_while(|i| m.contains(&format!("a{i}"))).count();
        if v == 0 {
            return Err(Error::MissingElement("a1".into()));
        }
        Ok(HibeMaster {
            l: m.scalar("l")?.clone(),
            a: (1..=v)
                .map(|i| m.scalar(&format!("a{i}")).cloned())
                .collect::<Result<_>>()?,
        })
    }
}

impl HibeKey {
    pub fn to_envelope(&self, curve: &Curve) -> Envelope {
        let mut m = ElementMap::new();
        for (i, id) in self.ids.iter().enumerate() {
            m.set(format!("I{}", i + 1), Element::Scalar(id.clone()));
        }
        m.set("d0", Element::Point(self.d0.clone()));
        m.set("corr", Element::Point(self.corr.clone()));
        if let Some(t) = &self.tail_one {
            m.set("tail_one", Element::Point(t.clone()));
        }
        let j = self.ids.len();
        for (k, t) in self.tail.iter().enumerate() {
            m.set(format!("tail_a{}", j + k + 1), Element::Point(t.clone()));
        }
        env(Kind::UserKey, curve, m)
    }

    pub fn from_envelope(e: &Envelope) -> Result<HibeKey> {
        e.expect(Kind::UserKey, SCHEME_NAME)?;
        let m = &e.elements;
        let j = (1..).take_while(|i| m.contains(&format!("I{i}"))).count();
        let ids = (1..=j)
            .map(|i| m.scalar(&format!("I{i}")).cloned())
            .collect::<Result<Vec<_>>>()?;
        let tail = (j + 1..)
            .take_while(|k| m.contains(&format!("tail_a{k}")))
            .map(|k| m.point(&format!("tail_a{k}")).cloned())
            .collect::<Result<Vec<_>>>()?;
        Ok(HibeKey {
            ids,
            d0: m.point("d0")?.clone(),
            corr: m.point("corr")?.clone(),
            tail_one: if m.contains("tail_one") {
                Some(m.point("tail_one")?.clone())
            } else {
                None
            },
            tail,
        })
    }
}

impl HibeCiphertext {
    pub fn to_envelope(&self, curve: &Curve) -> Envelope {
        env(
            Kind::Ciphertext,
            curve,
            ElementMap::new()
                .with("depth", Element::Int(self.depth as u64))
                .with("u1", Element::Point(self.u1.clone()))
                .with("u2", Element::Point(self.u2.clone()))
                .with("c", Element::Gt(self.c.clone())),
        )
    }

    pub fn from_envelope(e: &Envelope) -> Result<HibeCiphertext> {
        e.expect(Kind::Ciphertext, SCHEME_NAME)?;
        let m = &e.elements;
        Ok(HibeCiphertext {
            depth: m.int("depth")? as usize,
            u1: m.point("u1")?.clone(),
            u2: m.point("u2")?.clone(),
            c: m.gt("c")?.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha20Rng;
    use rand_core::SeedableRng;

    #[test]
    fn delegation_chain_decrypts() {
        let c = Curve::bench();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let (params, msk) = setup(&c, 3, &mut rng).unwrap();
        let ids: Vec<BigUint> = (0..3u32).map(BigUint::from).collect();
        let mut key = extract(&params, &msk, &ids[..1], &mut rng).unwrap();
        for j in 1..=3 {
            if j > 1 {
                key = delegate(&params, &key, &ids[j - 1], &mut rng).unwrap();
            }
            assert_eq!(key.tail.len(), 3 - j);
            let m = Gt::random(&c, &mut rng);
            let ct = encrypt(&params, &ids[..j], &m, &mut rng).unwrap();
            assert_eq!(decrypt(&params, &key, &ct).unwrap(), m);
        }
        assert!(matches!(
            delegate(&params, &key, &ids[0], &mut rng),
            Err(Error::DepthOverflow { .. })
        ));
    }
}
