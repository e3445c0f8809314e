//! Forward-secure HIBE: the constant-ciphertext HIBE crossed with a
//! binary time tree of depth `L` (`N = 2^L` periods).
//!
//! Every (time level `k`, identity level `j`) pair is a slot with public
//! weight `t_k + a_j` plus a hash `H(w|_k, ID_1..j)` of the tree word
//! prefix and the identity prefix. A node key for word `w` at identity
//! depth `h` covers the slots `k <= |w|, j <= h`:
//!
//! ```text
//! D = g^{(E + rho) / l},  C = g^rho,  E = sum over slots (t_k + a_j + H)
//! ```
//!
//! with `rho` the accumulated slot randomness. A ciphertext for period
//! `i` is `(g^{ls}, g^s, m z^s)` where `z = x^E` over the full leaf path,
//! so it stays three group elements whatever `v` and `N` are.
//!
//! A bundle for period `i` holds the leaf key for `i` plus the key of
//! every right sibling `w1` with `w0` a prefix of `i`, which is exactly
//! what later periods need. Updating drops the current leaf and expands
//! stored siblings downward. The root bundle (identity depth 0) acts as
//! the master secret: it holds the shared tail `g^{1/l}`, `g^{t_k/l}`,
//! `g^{a_j/l}` that all derivation needs.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_core::RngCore;

use crate::codec::{Element, ElementMap, Envelope, Kind};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::identity::Identity;
use crate::pairing::{pairing, Gt};

use super::hibe::RESAMPLE_LIMIT;

pub const SCHEME_NAME: &str = "fs-hibe";

/// Largest tree depth accepted; periods are indexed by `u64`.
pub const MAX_LEVELS: usize = 32;

#[derive(Clone, Debug)]
pub struct FsParams {
    pub curve: Arc<Curve>,
    pub g: Point,
    pub p_pub: Point,
    pub x: Gt,
    /// `x^{t_k}`, `k = 1..L`.
    pub x_t: Vec<Gt>,
    /// `g^{t_k}`.
    pub g_t: Vec<Point>,
    /// `x^{a_j}`, `j = 1..v`.
    pub x_a: Vec<Gt>,
    /// `g^{a_j}`.
    pub g_a: Vec<Point>,
}

impl FsParams {
    /// Tree depth `L`.
    pub fn levels(&self) -> usize {
        self.x_t.len()
    }

    /// Number of periods `N = 2^L`.
    pub fn periods(&self) -> u64 {
        1u64 << self.levels()
    }

    /// Maximum identity depth `v`.
    pub fn depth(&self) -> usize {
        self.x_a.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeKey {
    pub d: Point,
    pub c: Point,
}

/// Secret material for one identity tuple during one period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsKeyBundle {
    period: u64,
    identity: Vec<Vec<u8>>,
    nodes: BTreeMap<String, NodeKey>,
    tail_one: Point,
    tail_t: Vec<Point>,
    tail_a: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsCiphertext {
    pub period: u64,
    pub depth: usize,
    pub u1: Point,
    pub u2: Point,
    pub c: Gt,
}

impl FsCiphertext {
    /// Group elements carried: always three.
    pub fn arity(&self) -> usize {
        3
    }
}

/// Binary word of `period` with `levels` digits, most significant first.
pub fn leaf_word(period: u64, levels: usize) -> String {
    (0..levels)
        .rev()
        .map(|b| if period >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Node words a bundle for `period` must hold: the leaf plus every `w1`
/// with `w0` a prefix of the leaf.
pub fn required_words(period: u64, levels: usize) -> Vec<String> {
    let leaf = leaf_word(period, levels);
    let mut out: Vec<String> = leaf
        .char_indices()
        .filter(|&(_, b)| b == '0')
        .map(|(k, _)| format!("{}1", &leaf[..k]))
        .collect();
    out.push(leaf);
    out.sort();
    out
}

fn slot_hash(curve: &Curve, word: &str, ids: &[Vec<u8>]) -> BigUint {
    let mut parts: Vec<&[u8]> = vec![word.as_bytes()];
    parts.extend(ids.iter().map(Vec::as_slice));
    curve.hash_to_scalar("fs-H", &parts)
}

fn check_period(params: &FsParams, period: u64) -> Result<()> {
    if period >= params.periods() {
        return Err(Error::PeriodOutOfRange {
            period,
            periods: params.periods(),
        });
    }
    Ok(())
}

/// Public parameters and the root bundle (period 0, identity depth 0).
pub fn setup(curve: &Arc<Curve>, v: usize, levels: usize, rng: &mut dyn RngCore) -> Result<(FsParams, FsKeyBundle)> {
    if v == 0 {
        return Err(Error::Config("hierarchy depth must be at least 1".into()));
    }
    if levels == 0 || levels > MAX_LEVELS {
        return Err(Error::Config(format!("tree depth must be 1..={MAX_LEVELS}")));
    }
    let fr = curve.fr();
    let l = curve.random_scalar(rng);
    let t: Vec<BigUint> = (0..levels).map(|_| curve.random_scalar(rng)).collect();
    let a: Vec<BigUint> = (0..v).map(|_| curve.random_scalar(rng)).collect();
    let g = curve.generator();
    let x = pairing(&g, &g)?;
    let linv = fr.inv(&l).ok_or(Error::ZeroInverse)?;
    let params = FsParams {
        curve: Arc::clone(curve),
        p_pub: g.mul(&l),
        x_t: t.iter().map(|e| x.pow(e)).collect(),
        g_t: t.iter().map(|e| g.mul(e)).collect(),
        x_a: a.iter().map(|e| x.pow(e)).collect(),
        g_a: a.iter().map(|e| g.mul(e)).collect(),
        x,
        g: g.clone(),
    };
    let infinity = Point::infinity(curve);
    let nodes = required_words(0, levels)
        .into_iter()
        .map(|w| {
            (
                w,
                NodeKey {
                    d: infinity.clone(),
                    c: infinity.clone(),
                },
            )
        })
        .collect();
    let bundle = FsKeyBundle {
        period: 0,
        identity: Vec::new(),
        nodes,
        tail_one: g.mul(&linv),
        tail_t: t.iter().map(|e| g.mul(&fr.mul(e, &linv))).collect(),
        tail_a: a.iter().map(|e| g.mul(&fr.mul(e, &linv))).collect(),
    };
    Ok((params, bundle))
}

impl FsKeyBundle {
    pub fn period(&self) -> u64 {
        self.period
    }

    /// Identity depth `h`.
    pub fn depth(&self) -> usize {
        self.identity.len()
    }

    pub fn identity(&self) -> &[Vec<u8>] {
        &self.identity
    }

    /// Node words held, sorted.
    pub fn words(&self) -> Vec<&str> {
        self.nodes.keys().map(String::as_str).collect()
    }

    pub fn node(&self, word: &str) -> Option<&NodeKey> {
        self.nodes.get(word)
    }

    // Add the slots (k, j) for (k, j) in `slots` to `key` at `word`, one
    // fresh s per slot, batched into one multiplication for D and one
    // for C.
    fn add_slots(
        &self,
        params: &FsParams,
        key: &NodeKey,
        word: &str,
        ids: &[Vec<u8>],
        slots: &[(usize, usize)],
        rng: &mut dyn RngCore,
    ) -> Result<NodeKey> {
        let curve = &params.curve;
        let fr = curve.fr();
        let one = BigUint::one();
        let mut attempt = 0;
        loop {
            let mut h_sum = BigUint::zero();
            let mut coef_t = vec![BigUint::zero(); params.levels()];
            let mut coef_a = vec![BigUint::zero(); params.depth()];
            for &(k, j) in slots {
                let s = curve.random_scalar(rng);
                h_sum = fr.add(&h_sum, &slot_hash(curve, &word[..k], &ids[..j]));
                coef_t[k - 1] = fr.add(&coef_t[k - 1], &s);
                coef_a[j - 1] = fr.add(&coef_a[j - 1], &s);
            }
            let mut d_terms: Vec<(&BigUint, &Point)> = vec![(&one, &key.d), (&h_sum, &self.tail_one)];
            d_terms.extend(coef_t.iter().zip(&self.tail_t));
            d_terms.extend(coef_a.iter().zip(&self.tail_a));
            let d = Point::msm(curve, &d_terms)?;
            // C gains sum (s - 1)(t_k + a_j): per weight term, the sum of
            // its s values minus the number of slots using it.
            let n_t = per_index(slots, params.levels(), |(k, _)| k);
            let n_a = per_index(slots, params.depth(), |(_, j)| j);
            let ct: Vec<BigUint> = coef_t.iter().zip(&n_t).map(|(c, n)| fr.sub(c, &fr.reduce(n))).collect();
            let ca: Vec<BigUint> = coef_a.iter().zip(&n_a).map(|(c, n)| fr.sub(c, &fr.reduce(n))).collect();
            let mut c_terms: Vec<(&BigUint, &Point)> = vec![(&one, &key.c)];
            c_terms.extend(ct.iter().zip(&params.g_t));
            c_terms.extend(ca.iter().zip(&params.g_a));
            let c = Point::msm(curve, &c_terms)?;
            attempt += 1;
            if !d.is_infinity() || slots.is_empty() || attempt >= RESAMPLE_LIMIT {
                return Ok(NodeKey { d, c });
            }
        }
    }

    // Key for `child`, one level below the node `parent` (CompNext).
    fn comp_next(&self, params: &FsParams, parent: &NodeKey, child: &str, rng: &mut dyn RngCore) -> Result<NodeKey> {
        let k = child.len();
        let slots: Vec<(usize, usize)> = (1..=self.depth()).map(|j| (k, j)).collect();
        self.add_slots(params, parent, child, &self.identity, &slots, rng)
    }

    /// Bundle for the next period. Consumes `self`: keys for the current
    /// period must not outlive the update.
    pub fn update(self, params: &FsParams, rng: &mut dyn RngCore) -> Result<FsKeyBundle> {
        let next = self.period + 1;
        check_period(params, next)?;
        let mut work = self.nodes.clone();
        let required = required_words(next, params.levels());
        for w in &required {
            if work.contains_key(w) {
                continue;
            }
            let (anc, _) = work
                .iter()
                .filter(|(u, _)| w.starts_with(u.as_str()))
                .max_by_key(|(u, _)| u.len())
                .ok_or_else(|| Error::MissingElement(format!("ancestor of node {w}")))?;
            let mut cur = anc.clone();
            while cur.len() < w.len() {
                let child = w[..cur.len() + 1].to_string();
                let key = self.comp_next(params, &work[&cur], &child, rng)?;
                work.insert(child.clone(), key);
                cur = child;
            }
        }
        let nodes = required.into_iter().map(|w| {
            let key = work.remove(&w).expect("expanded above");
            (w, key)
        });
        Ok(FsKeyBundle {
            period: next,
            nodes: nodes.collect(),
            ..self
        })
    }

    /// Bundle for `(ID_1, ..., ID_h, component)` in the same period, from
    /// this bundle alone.
    pub fn derive(&self, params: &FsParams, component: &[u8], rng: &mut dyn RngCore) -> Result<FsKeyBundle> {
        let h = self.depth() + 1;
        if h > params.depth() {
            return Err(Error::DepthOverflow {
                depth: h,
                max: params.depth(),
            });
        }
        let mut ids = self.identity.clone();
        ids.push(component.to_vec());
        Identity::tuple(ids.clone())?;
        let mut nodes = BTreeMap::new();
        for (w, key) in &self.nodes {
            let slots: Vec<(usize, usize)> = (1..=w.len()).map(|k| (k, h)).collect();
            nodes.insert(w.clone(), self.add_slots(params, key, w, &ids, &slots, rng)?);
        }
        Ok(FsKeyBundle {
            period: self.period,
            identity: ids,
            nodes,
            tail_one: self.tail_one.clone(),
            tail_t: self.tail_t.clone(),
            tail_a: self.tail_a.clone(),
        })
    }
}

fn per_index(slots: &[(usize, usize)], len: usize, pick: impl Fn((usize, usize)) -> usize) -> Vec<BigUint> {
    let mut out = vec![0u64; len];
    for &slot in slots {
        out[pick(slot) - 1] += 1;
    }
    out.into_iter().map(BigUint::from).collect()
}

/// Encrypt to `identity` for `period`. Needs no join history: only the
/// period and the tuple enter.
pub fn encrypt(
    params: &FsParams,
    period: u64,
    identity: &[Vec<u8>],
    m: &Gt,
    rng: &mut dyn RngCore,
) -> Result<FsCiphertext> {
    check_period(params, period)?;
    let h = identity.len();
    if h == 0 || h > params.depth() {
        return Err(Error::DepthOverflow {
            depth: h,
            max: params.depth(),
        });
    }
    let curve = &params.curve;
    if !m.curve().same(curve) {
        return Err(Error::ContextMismatch);
    }
    let fr = curve.fr();
    let leaf = leaf_word(period, params.levels());
    let mut h_sum = BigUint::zero();
    for k in 1..=params.levels() {
        for j in 1..=h {
            h_sum = fr.add(&h_sum, &slot_hash(curve, &leaf[..k], &identity[..j]));
        }
    }
    let mut z = params.x.pow(&h_sum);
    let hh = BigUint::from(h);
    for xt in &params.x_t {
        z = z.mul(&xt.pow(&hh));
    }
    let ll = BigUint::from(params.levels());
    for xa in &params.x_a[..h] {
        z = z.mul(&xa.pow(&ll));
    }
    let s = curve.random_scalar(rng);
    Ok(FsCiphertext {
        period,
        depth: h,
        u1: params.p_pub.mul(&s),
        u2: params.g.mul(&s),
        c: m.mul(&z.pow(&s)),
    })
}

/// Open with one node key, whatever its word: `c e(u'', C) / e(u', D)`.
/// Gives the message only when the node is the ciphertext's leaf.
pub fn decrypt_with_node(ct: &FsCiphertext, node: &NodeKey) -> Result<Gt> {
    Ok(ct.c.mul(&pairing(&ct.u2, &node.c)?).div(&pairing(&ct.u1, &node.d)?))
}

pub fn decrypt(params: &FsParams, bundle: &FsKeyBundle, ct: &FsCiphertext) -> Result<Gt> {
    check_period(params, ct.period)?;
    if ct.period != bundle.period {
        return Err(Error::NoPeriodKey(ct.period));
    }
    if ct.depth != bundle.depth() {
        return Err(Error::DepthMismatch {
            key: bundle.depth(),
            ct: ct.depth,
        });
    }
    let leaf = leaf_word(ct.period, params.levels());
    let node = bundle.nodes.get(&leaf).ok_or(Error::NoPeriodKey(ct.period))?;
    decrypt_with_node(ct, node)
}

fn env(kind: Kind, curve: &Curve, identity: Option<Identity>, elements: ElementMap) -> Envelope {
    Envelope {
        kind,
        scheme: SCHEME_NAME.into(),
        profile: curve.name().into(),
        identity,
        elements,
    }
}

fn indexed_points(m: &ElementMap, prefix: &str) -> Result<Vec<Point>> {
    (1..)
        .take_while(|i| m.contains(&format!("{prefix}{i}")))
        .map(|i| m.point(&format!("{prefix}{i}")).cloned())
        .collect()
}

fn indexed_gts(m: &ElementMap, prefix: &str) -> Result<Vec<Gt>> {
    (1..)
        .take_while(|i| m.contains(&format!("{prefix}{i}")))
        .map(|i| m.gt(&format!("{prefix}{i}")).cloned())
        .collect()
}

impl FsParams {
    pub fn to_envelope(&self) -> Envelope {
        let mut m = ElementMap::new()
            .with("g", Element::Point(self.g.clone()))
            .with("P_pub", Element::Point(self.p_pub.clone()))
            .with("x", Element::Gt(self.x.clone()));
        for (k, (xt, gt)) in self.x_t.iter().zip(&self.g_t).enumerate() {
            m.set(format!("x_t{}", k + 1), Element::Gt(xt.clone()));
            m.set(format!("g_t{}", k + 1), Element::Point(gt.clone()));
        }
        for (j, (xa, ga)) in self.x_a.iter().zip(&self.g_a).enumerate() {
            m.set(format!("x_a{}", j + 1), Element::Gt(xa.clone()));
            m.set(format!("g_a{}", j + 1), Element::Point(ga.clone()));
        }
        env(Kind::Params, &self.curve, None, m)
    }

    pub fn from_envelope(e: &Envelope, curve: &Arc<Curve>) -> Result<FsParams> {
        e.expect(Kind::Params, SCHEME_NAME)?;
        let m = &e.elements;
        let p = FsParams {
            curve: Arc::clone(curve),
            g: m.point("g")?.clone(),
            p_pub: m.point("P_pub")?.clone(),
            x: m.gt("x")?.clone(),
            x_t: indexed_gts(m, "x_t")?,
            g_t: indexed_points(m, "g_t")?,
            x_a: indexed_gts(m, "x_a")?,
            g_a: indexed_points(m, "g_a")?,
        };
        if p.levels() == 0 || p.levels() > MAX_LEVELS || p.g_t.len() != p.levels() {
            return Err(Error::Malformed("time-level elements are inconsistent".into()));
        }
        if p.depth() == 0 || p.g_a.len() != p.depth() {
            return Err(Error::Malformed("identity-level elements are inconsistent".into()));
        }
        Ok(p)
    }
}

impl FsKeyBundle {
    pub fn to_envelope(&self, curve: &Curve) -> Envelope {
        let mut m = ElementMap::new()
            .with("period", Element::Int(self.period))
            .with("tail_one", Element::Point(self.tail_one.clone()));
        for (k, t) in self.tail_t.iter().enumerate() {
            m.set(format!("tail_t{}", k + 1), Element::Point(t.clone()));
        }
        for (j, t) in self.tail_a.iter().enumerate() {
            m.set(format!("tail_a{}", j + 1), Element::Point(t.clone()));
        }
        for (w, key) in &self.nodes {
            m.set(format!("node.{w}.D"), Element::Point(key.d.clone()));
            m.set(format!("node.{w}.C"), Element::Point(key.c.clone()));
        }
        let identity = if self.identity.is_empty() {
            None
        } else {
            Some(Identity::tuple(self.identity.clone()).expect("checked when derived"))
        };
        env(Kind::FsBundle, curve, identity, m)
    }

    /// Decode and check that the node words are exactly the set the
    /// period calls for.
    pub fn from_envelope(e: &Envelope) -> Result<FsKeyBundle> {
        e.expect(Kind::FsBundle, SCHEME_NAME)?;
        let m = &e.elements;
        let period = m.int("period")?;
        let tail_t = indexed_points(m, "tail_t")?;
        let levels = tail_t.len();
        if levels == 0 || levels > MAX_LEVELS || period >= 1u64 << levels {
            return Err(Error::Malformed("bundle period does not fit its tree".into()));
        }
        let mut nodes = BTreeMap::new();
        for (name, _) in m.iter() {
            if let Some(w) = name.strip_prefix("node.").and_then(|r| r.strip_suffix(".D")) {
                nodes.insert(
                    w.to_string(),
                    NodeKey {
                        d: m.point(name)?.clone(),
                        c: m.point(&format!("node.{w}.C"))?.clone(),
                    },
                );
            }
        }
        let words: Vec<&String> = nodes.keys().collect();
        let required = required_words(period, levels);
        if words.len() != required.len() || words.iter().zip(&required).any(|(a, b)| *a != b) {
            return Err(Error::Malformed(format!("node words do not match period {period}")));
        }
        Ok(FsKeyBundle {
            period,
            identity: e.identity.as_ref().map(|i| i.components().to_vec()).unwrap_or_default(),
            nodes,
            tail_one: m.point("tail_one")?.clone(),
            tail_t,
            tail_a: indexed_points(m, "tail_a")?,
        })
    }
}

impl FsCiphertext {
    pub fn to_envelope(&self, curve: &Curve) -> Envelope {
        env(
            Kind::Ciphertext,
            curve,
            None,
            ElementMap::new()
                .with("period", Element::Int(self.period))
                .with("depth", Element::Int(self.depth as u64))
                .with("u1", Element::Point(self.u1.clone()))
                .with("u2", Element::Point(self.u2.clone()))
                .with("c", Element::Gt(self.c.clone())),
        )
    }

    pub fn from_envelope(e: &Envelope) -> Result<FsCiphertext> {
        e.expect(Kind::Ciphertext, SCHEME_NAME)?;
        let m = &e.elements;
        Ok(FsCiphertext {
            period: m.int("period")?,
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
    fn words_for_period_zero() {
        assert_eq!(required_words(0, 3), vec!["000", "001", "01", "1"]);
        assert_eq!(required_words(5, 3), vec!["101", "11"]);
        assert_eq!(required_words(7, 3), vec!["111"]);
    }

    #[test]
    fn walk_small_tree() {
        let c = Curve::bench();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let (params, root) = setup(&c, 2, 2, &mut rng).unwrap();
        let ids = vec![b"org".to_vec(), b"eve".to_vec()];
        let mut b = root
            .derive(&params, &ids[0], &mut rng)
            .unwrap()
            .derive(&params, &ids[1], &mut rng)
            .unwrap();
        for i in 0..4 {
            let m = Gt::random(&c, &mut rng);
            let ct = encrypt(&params, i, &ids, &m, &mut rng).unwrap();
            assert_eq!(decrypt(&params, &b, &ct).unwrap(), m);
            assert_eq!(FsKeyBundle::from_envelope(&b.to_envelope(&c)).unwrap(), b);
            if i < 3 {
                b = b.update(&params, &mut rng).unwrap();
            }
        }
        assert!(matches!(
            b.update(&params, &mut rng),
            Err(Error::PeriodOutOfRange { .. })
        ));
    }
}
