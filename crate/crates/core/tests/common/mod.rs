//! Round-trip drivers shared by the scheme tests and the acceptance run.
//! Each returns a description of the first failure instead of panicking.
#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeSet;
use std::sync::Arc;

use ibekit::codec::Element;
use ibekit::curve::Curve;
use ibekit::error::Error;
use ibekit::identity::Identity;
use ibekit::novel::{fs, hibe, ibe};
use ibekit::pairing::{pairing, Gt};
use ibekit::schemes::{random_message, scheme_for, Message, MessageDomain, SchemeId};
use num_bigint::BigUint;
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

pub type Check = Result<(), String>;

pub const MSG_LEN: usize = 24;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// `trials` fresh setups, each with an extract, encrypt and decrypt.
pub fn benchmark_roundtrips(id: SchemeId, curve: &Arc<Curve>, trials: usize, seed: u64) -> Check {
    let s = scheme_for(id);
    let mut rng = rng(seed);
    for t in 0..trials {
        let (params, msk) = s
            .setup(curve, MSG_LEN, &mut rng)
            .map_err(|e| format!("{id} setup: {e}"))?;
        let ident = Identity::new(format!("user-{t}@example.com")).unwrap();
        let key = s
            .extract(&params, &msk, &ident, &mut rng)
            .map_err(|e| format!("{id} extract: {e}"))?;
        let m = random_message(&params, &mut rng).unwrap();
        let ct = s
            .encrypt(&params, &ident, &m, &mut rng)
            .map_err(|e| format!("{id} encrypt: {e}"))?;
        match s.decrypt(&params, &key, &ct) {
            Ok(got) if got == m => {}
            other => return Err(format!("{id} trial {t}: decrypt gave {other:?}")),
        }
    }
    Ok(())
}

pub fn our_ibe_roundtrips(curve: &Arc<Curve>, trials: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    for t in 0..trials {
        let (params, msk) = ibe::setup(curve, &mut rng).map_err(|e| e.to_string())?;
        let ident = Identity::new(format!("user-{t}@example.com")).unwrap();
        let key = ibe::extract(&params, &msk, &ident, &mut rng).map_err(|e| format!("our-ibe extract: {e}"))?;
        let m = Gt::random(curve, &mut rng);
        let ct = ibe::encrypt(&params, &ident, &m, &mut rng).map_err(|e| e.to_string())?;
        if ibe::decrypt(&params, &key, &ct).ok() != Some(m) {
            return Err(format!("our-ibe trial {t} failed"));
        }
    }
    Ok(())
}

fn tuple(depth: usize, tag: usize) -> Identity {
    Identity::tuple((1..=depth).map(|i| format!("org{i}-{tag}").into_bytes()).collect()).unwrap()
}

/// For each trial and each `v` up to `max_v`: one setup, then at every
/// depth a delegated key and a directly extracted user key must both
/// decrypt.
pub fn hibe_roundtrips(curve: &Arc<Curve>, max_v: usize, trials: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    for t in 0..trials {
        for v in 1..=max_v {
            let (params, msk) = hibe::setup(curve, v, &mut rng).map_err(|e| e.to_string())?;
            let ids = hibe::hash_identity(curve, &tuple(v, t));
            let mut key = hibe::extract(&params, &msk, &ids[..1], &mut rng).map_err(|e| e.to_string())?;
            for depth in 1..=v {
                if depth > 1 {
                    key = hibe::delegate(&params, &key, &ids[depth - 1], &mut rng).map_err(|e| e.to_string())?;
                }
                let user = hibe::extract_user(&params, &msk, &ids[..depth], &mut rng).map_err(|e| e.to_string())?;
                let m = Gt::random(curve, &mut rng);
                let ct = hibe::encrypt(&params, &ids[..depth], &m, &mut rng).map_err(|e| e.to_string())?;
                if ct.arity() != 3 {
                    return Err(format!("hibe v={v} depth {depth}: arity {}", ct.arity()));
                }
                for (what, k) in [("delegated", &key), ("extracted", &user)] {
                    if hibe::decrypt(&params, k, &ct).ok().as_ref() != Some(&m) {
                        return Err(format!("hibe trial {t} v={v} depth {depth}: {what} key failed"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A depth-2 identity walked through all `2^levels` periods.
pub fn fs_roundtrips(curve: &Arc<Curve>, levels: usize, trials: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    for t in 0..trials {
        let (params, root) = fs::setup(curve, 2, levels, &mut rng).map_err(|e| e.to_string())?;
        let ident = tuple(2, t);
        let mut bundle = root;
        for c in ident.components() {
            bundle = bundle.derive(&params, c, &mut rng).map_err(|e| e.to_string())?;
        }
        for period in 0..params.periods() {
            let m = Gt::random(curve, &mut rng);
            let ct = fs::encrypt(&params, period, ident.components(), &m, &mut rng).map_err(|e| e.to_string())?;
            if fs::decrypt(&params, &bundle, &ct).ok() != Some(m) {
                return Err(format!("fs trial {t} period {period} failed"));
            }
            if period + 1 < params.periods() {
                bundle = bundle.update(&params, &mut rng).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(())
}

/// Every element of `G_T` on a curve small enough to list them.
pub fn all_gt(curve: &Arc<Curve>) -> Vec<Gt> {
    let g = curve.generator();
    let x = pairing(&g, &g).unwrap();
    let r = curve.r().to_u64_digits()[0];
    (0..r).map(|i| x.pow(&BigUint::from(i))).collect()
}

fn tiny_messages(curve: &Arc<Curve>, domain: MessageDomain) -> Vec<Message> {
    match domain {
        MessageDomain::Gt => all_gt(curve).into_iter().map(Message::Gt).collect(),
        MessageDomain::Bytes => [vec![0u8; MSG_LEN], vec![0xff; MSG_LEN], (0..MSG_LEN as u8).collect()]
            .into_iter()
            .map(Message::Bytes)
            .collect(),
    }
}

const TINY_SEEDS: u64 = 300;
const TINY_IDENTITIES: usize = 6;

fn coverage(seen: &BTreeSet<Vec<BigUint>>, scalars: usize, curve: &Curve, what: &str) -> Check {
    let want = (curve.r() - 1u8).pow(scalars as u32);
    if BigUint::from(seen.len()) != want {
        return Err(format!("{what}: saw {} master secrets of {want}", seen.len()));
    }
    Ok(())
}

/// On the tiny curve: every master secret the setup can draw, several
/// identities, and every message in `G_T` (a few fixed ones for byte
/// schemes). Extraction aborts are skipped but must leave some identity
/// usable per setup.
pub fn benchmark_tiny_exhaustive(id: SchemeId) -> Check {
    let curve = Curve::tiny();
    let s = scheme_for(id);
    let mut seen = BTreeSet::new();
    let mut scalars = 0;
    for seed in 0..TINY_SEEDS {
        let mut rng = rng(seed);
        let (params, msk) = s.setup(&curve, MSG_LEN, &mut rng).map_err(|e| e.to_string())?;
        let values: Vec<BigUint> = msk
            .elements
            .iter()
            .filter_map(|(_, e)| match e {
                Element::Scalar(v) => Some(v.clone()),
                _ => None,
            })
            .collect();
        scalars = values.len();
        seen.insert(values);
        let mut usable = 0;
        for i in 0..TINY_IDENTITIES {
            let ident = Identity::new(format!("user{i}")).unwrap();
            let key = match s.extract(&params, &msk, &ident, &mut rng) {
                Err(Error::ExtractAbort) => continue,
                other => other.map_err(|e| e.to_string())?,
            };
            usable += 1;
            for m in tiny_messages(&curve, s.domain()) {
                let ct = s.encrypt(&params, &ident, &m, &mut rng).map_err(|e| e.to_string())?;
                match s.decrypt(&params, &key, &ct) {
                    Ok(got) if got == m => {}
                    other => return Err(format!("{id} seed {seed} user{i}: {other:?}")),
                }
            }
        }
        if usable == 0 {
            return Err(format!("{id} seed {seed}: every identity aborted"));
        }
    }
    coverage(&seen, scalars, &curve, id.name())
}

pub fn our_ibe_tiny_exhaustive() -> Check {
    let curve = Curve::tiny();
    let mut seen = BTreeSet::new();
    for seed in 0..TINY_SEEDS {
        let mut rng = rng(seed);
        let (params, msk) = ibe::setup(&curve, &mut rng).map_err(|e| e.to_string())?;
        seen.insert(vec![msk.l.clone(), msk.a.clone()]);
        for i in 0..TINY_IDENTITIES {
            let ident = Identity::new(format!("user{i}")).unwrap();
            let key = match ibe::extract(&params, &msk, &ident, &mut rng) {
                Err(Error::ExtractAbort) => continue,
                other => other.map_err(|e| e.to_string())?,
            };
            for m in all_gt(&curve) {
                let ct = ibe::encrypt(&params, &ident, &m, &mut rng).map_err(|e| e.to_string())?;
                if ibe::decrypt(&params, &key, &ct).ok() != Some(m) {
                    return Err(format!("our-ibe seed {seed} user{i} failed"));
                }
            }
        }
    }
    coverage(&seen, 2, &curve, "our-ibe")
}

pub fn hibe_tiny_exhaustive(max_v: usize) -> Check {
    let curve = Curve::tiny();
    for v in 1..=max_v {
        let mut seen = BTreeSet::new();
        for seed in 0..TINY_SEEDS {
            let mut rng = rng(seed);
            let (params, msk) = hibe::setup(&curve, v, &mut rng).map_err(|e| e.to_string())?;
            let mut vals = vec![msk.l.clone()];
            vals.extend(msk.a.iter().cloned());
            seen.insert(vals);
            for depth in 1..=v {
                let ids = hibe::hash_identity(&curve, &tuple(depth, seed as usize));
                let key = hibe::extract(&params, &msk, &ids, &mut rng).map_err(|e| e.to_string())?;
                for m in all_gt(&curve) {
                    let ct = hibe::encrypt(&params, &ids, &m, &mut rng).map_err(|e| e.to_string())?;
                    if hibe::decrypt(&params, &key, &ct).ok() != Some(m.clone()) {
                        return Err(format!("hibe tiny v={v} depth {depth} seed {seed} failed"));
                    }
                }
            }
        }
        coverage(&seen, v + 1, &curve, &format!("our-hibe v={v}"))?;
    }
    Ok(())
}

/// The forward-secure scheme on the tiny curve with `N = 8`. Master values
/// are not exposed, so coverage is counted over `(x_t, x_a)` instead.
pub fn fs_tiny_exhaustive() -> Check {
    let curve = Curve::tiny();
    let mut seen = BTreeSet::new();
    for seed in 0..TINY_SEEDS {
        let mut rng = rng(seed);
        let (params, root) = fs::setup(&curve, 1, 3, &mut rng).map_err(|e| e.to_string())?;
        seen.insert(
            params
                .x_t
                .iter()
                .chain(&params.x_a)
                .map(|g| BigUint::from_bytes_be(&g.to_bytes()))
                .collect::<Vec<_>>(),
        );
        let ident = vec![format!("user{seed}").into_bytes()];
        let mut bundle = root.derive(&params, &ident[0], &mut rng).map_err(|e| e.to_string())?;
        for period in 0..params.periods() {
            for m in all_gt(&curve) {
                let ct = fs::encrypt(&params, period, &ident, &m, &mut rng).map_err(|e| e.to_string())?;
                if fs::decrypt(&params, &bundle, &ct).ok() != Some(m) {
                    return Err(format!("fs tiny seed {seed} period {period} failed"));
                }
            }
            if period + 1 < params.periods() {
                bundle = bundle.update(&params, &mut rng).map_err(|e| e.to_string())?;
            }
        }
    }
    coverage(&seen, 4, &curve, "fs-hibe")
}

/// Encrypt to every period of an `N = 2^levels` tree, then walk the key
/// forward. At period `t` only the period-`t` ciphertext may open; once
/// updated, nothing earlier may open, and the bundle holds exactly the
/// nodes for its period.
pub fn fs_matrix(curve: &Arc<Curve>, levels: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let (params, root) = fs::setup(curve, 1, levels, &mut rng).map_err(|e| e.to_string())?;
    let ident = vec![b"alice".to_vec()];
    let n = params.periods();
    let msgs: Vec<Gt> = (0..n).map(|_| Gt::random(curve, &mut rng)).collect();
    let cts: Vec<fs::FsCiphertext> = (0..n)
        .map(|t| fs::encrypt(&params, t, &ident, &msgs[t as usize], &mut rng))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut bundle = root.derive(&params, &ident[0], &mut rng).map_err(|e| e.to_string())?;
    for now in 0..n {
        let words: Vec<String> = bundle.words().iter().map(|w| w.to_string()).collect();
        if words != fs::required_words(now, levels) {
            return Err(format!("period {now}: bundle holds {words:?}"));
        }
        for past in 0..now {
            let leaf = fs::leaf_word(past, levels);
            if let Some(w) = words.iter().find(|w| leaf.starts_with(w.as_str())) {
                return Err(format!("period {now}: node {w} still covers past period {past}"));
            }
        }
        for (t, ct) in cts.iter().enumerate() {
            let opened = fs::decrypt(&params, &bundle, ct).ok();
            let ok = opened.as_ref() == Some(&msgs[t]);
            if ok != (t as u64 == now) {
                return Err(format!("key at period {now} on ciphertext {t}: opened = {ok}"));
            }
            // No stored node may open an earlier ciphertext either.
            if (t as u64) < now {
                for w in &words {
                    let node = bundle.node(w).expect("listed word");
                    if fs::decrypt_with_node(ct, node).ok().as_ref() == Some(&msgs[t]) {
                        return Err(format!("node {w} at period {now} opens period {t}"));
                    }
                }
            }
        }
        if now + 1 < n {
            bundle = bundle.update(&params, &mut rng).map_err(|e| e.to_string())?;
        }
    }
    match bundle.update(&params, &mut rng) {
        Err(Error::PeriodOutOfRange { .. }) => Ok(()),
        other => Err(format!("update past the last period gave {other:?}")),
    }
}
