use std::fmt::Write as _;
use std::sync::Arc;

use clap::Args;
use ibekit::curve::Curve;
use ibekit::error::{Error, Result};
use ibekit::identity::Identity;
use ibekit::ledger::{measure, OpLedger};
use ibekit::novel::{fs, hibe, ibe};
use ibekit::pairing::Gt;
use ibekit::schemes::{kem, scheme_for, Message, MessageDomain, SchemeId};
use ibekit::scorecard::measure::{hibe_identity, DEMO_IDENTITY, DEMO_MSG_LEN};
use rand_chacha::ChaCha20Rng;

use crate::common::{grid, load_curve, retry_identity, seeded, select, suffixed, Outcome, Target};
use crate::{Format, RunOpts};

pub const DEMO_TEXT: &[u8] = b"attack at dawn, bring the pairings";

#[derive(Args, Debug)]
pub struct DemoArgs {
    /// `all`, or a comma-separated list of bf, sk, bb1, bb2, waters,
    /// gentry, our-ibe, our-hibe, fs-hibe.
    #[arg(long, default_value = "all")]
    pub scheme: String,
    #[command(flatten)]
    pub run: RunOpts,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    /// Send the demo text through the hybrid mode of the benchmark schemes.
    #[arg(long)]
    pub kem: bool,
    /// Hierarchy depth for our-hibe and fs-hibe.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Tree depth for fs-hibe; it runs 2^levels periods.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Identity to use; `/` separates hierarchy components.
    #[arg(long)]
    pub identity: Option<String>,
}

/// Ledger of every step in the first trial, labelled.
type Steps = Vec<(&'static str, OpLedger)>;

struct Trial {
    ok: bool,
    retries: usize,
    steps: Steps,
}

pub fn run(a: &DemoArgs) -> Result<Outcome> {
    if a.depth == 0 {
        return Err(Error::Config("--depth must be at least 1".into()));
    }
    let curve = load_curve(&a.run.profile)?;
    let (mut rng, seed) = seeded(a.run.seed)?;
    let targets = select(&a.scheme)?;
    let mut out = String::new();
    let mut csv_rows = Vec::new();
    let mut all_ok = true;
    if a.run.format == Format::Table {
        let _ = writeln!(out, "seed: {seed}");
        let _ = writeln!(out, "profile: {}", curve.name());
    }
    for t in targets {
        let mut passed = 0;
        let mut retries = 0;
        let mut first: Option<Steps> = None;
        for _ in 0..a.trials {
            let trial = match t {
                Target::Benchmark(id) => benchmark_trial(a, id, &curve, &mut rng)?,
                Target::OurIbe => our_ibe_trial(a, &curve, &mut rng)?,
                Target::OurHibe => hibe_trial(a, &curve, &mut rng)?,
                Target::FsHibe => fs_trial(a, &curve, &mut rng)?,
            };
            passed += usize::from(trial.ok);
            retries += trial.retries;
            first.get_or_insert(trial.steps);
        }
        let ok = passed == a.trials as usize;
        all_ok &= ok;
        let steps = first.unwrap_or_default();
        match a.run.format {
            Format::Table => {
                let _ = writeln!(out, "== {} ==", t.name());
                for (label, l) in &steps {
                    let _ = writeln!(out, "  {label:<9} {}", l.top);
                }
                let _ = write!(
                    out,
                    "{}: {passed}/{} {}",
                    t.name(),
                    a.trials,
                    if ok { "OK" } else { "FAILED" }
                );
                if retries > 0 {
                    let _ = write!(out, " ({retries} identity retries)");
                }
                out.push('\n');
            }
            Format::Csv => {
                for (label, l) in &steps {
                    for (op, n) in l.top.nonzero() {
                        csv_rows.push(vec![
                            t.name().to_string(),
                            label.to_string(),
                            op.name().to_string(),
                            n.to_string(),
                        ]);
                    }
                }
                csv_rows.push(vec![
                    t.name().to_string(),
                    "result".into(),
                    "passed".into(),
                    passed.to_string(),
                ]);
            }
        }
    }
    if a.run.format == Format::Csv {
        out = grid(Format::Csv, &["scheme", "step", "op", "count"], &csv_rows);
    }
    Ok(Outcome { text: out, ok: all_ok })
}

fn base_identity(a: &DemoArgs) -> String {
    a.identity.clone().unwrap_or_else(|| DEMO_IDENTITY.to_string())
}

fn benchmark_trial(a: &DemoArgs, id: SchemeId, curve: &Arc<Curve>, rng: &mut ChaCha20Rng) -> Result<Trial> {
    let s = scheme_for(id);
    let bytes_native = s.domain() == MessageDomain::Bytes && !a.kem;
    let msg_len = if bytes_native { DEMO_TEXT.len() } else { DEMO_MSG_LEN };
    let base = base_identity(a);
    // A fresh master per attempt: on small curves the collision is with
    // the master secret, not with the identity alone.
    let (retries, (params, ident, key, setup, extract)) = retry_identity(|i| {
        let ((params, msk), setup) = split(measure(|| s.setup(curve, msg_len, rng)))?;
        let ident = Identity::parse(&suffixed(&base, i))?;
        let (key, extract) = split(measure(|| s.extract(&params, &msk, &ident, rng)))?;
        Ok((params, ident, key, setup, extract))
    })?;
    let mut steps = vec![("setup", setup), ("extract", extract)];
    let ok = if a.kem {
        let (ct, enc) = split(measure(|| kem::encrypt(&params, &ident, DEMO_TEXT, rng)))?;
        let (got, dec) = measure(|| kem::decrypt(&params, &key, &ct));
        steps.extend([("encrypt", enc), ("decrypt", dec)]);
        got.is_ok_and(|g| g == DEMO_TEXT)
    } else {
        let m = if bytes_native {
            Message::Bytes(DEMO_TEXT.to_vec())
        } else {
            Message::Gt(Gt::random(curve, rng))
        };
        let (ct, enc) = split(measure(|| s.encrypt(&params, &ident, &m, rng)))?;
        let (got, dec) = measure(|| s.decrypt(&params, &key, &ct));
        steps.extend([("encrypt", enc), ("decrypt", dec)]);
        got.is_ok_and(|g| g == m)
    };
    Ok(Trial { ok, retries, steps })
}

fn our_ibe_trial(a: &DemoArgs, curve: &Arc<Curve>, rng: &mut ChaCha20Rng) -> Result<Trial> {
    let base = base_identity(a);
    let (retries, (params, ident, key, setup, extract)) = retry_identity(|i| {
        let ((params, msk), setup) = split(measure(|| ibe::setup(curve, rng)))?;
        let ident = Identity::parse(&suffixed(&base, i))?;
        let (key, extract) = split(measure(|| ibe::extract(&params, &msk, &ident, rng)))?;
        Ok((params, ident, key, setup, extract))
    })?;
    let m = Gt::random(curve, rng);
    let (ct, enc) = split(measure(|| ibe::encrypt(&params, &ident, &m, rng)))?;
    let (got, dec) = measure(|| ibe::decrypt(&params, &key, &ct));
    Ok(Trial {
        ok: got.is_ok_and(|g| g == m),
        retries,
        steps: vec![
            ("setup", setup),
            ("extract", extract),
            ("encrypt", enc),
            ("decrypt", dec),
        ],
    })
}

fn hierarchy_identity(a: &DemoArgs) -> Result<Identity> {
    match &a.identity {
        Some(s) => Identity::parse(s),
        None => hibe_identity(a.depth),
    }
}

fn hibe_trial(a: &DemoArgs, curve: &Arc<Curve>, rng: &mut ChaCha20Rng) -> Result<Trial> {
    let ident = hierarchy_identity(a)?;
    let ((params, msk), setup) = split(measure(|| hibe::setup(curve, a.depth, rng)))?;
    let ids = hibe::hash_identity(curve, &ident);
    let (mut key, extract) = split(measure(|| hibe::extract(&params, &msk, &ids[..1], rng)))?;
    let mut delegate = OpLedger::default();
    for id in &ids[1..] {
        let (k, l) = split(measure(|| hibe::delegate(&params, &key, id, rng)))?;
        key = k;
        delegate.merge(&l);
    }
    let m = Gt::random(curve, rng);
    let (ct, enc) = split(measure(|| hibe::encrypt(&params, &ids, &m, rng)))?;
    let (got, dec) = measure(|| hibe::decrypt(&params, &key, &ct));
    Ok(Trial {
        ok: got.is_ok_and(|g| g == m),
        retries: 0,
        steps: vec![
            ("setup", setup),
            ("extract", extract),
            ("delegate", delegate),
            ("encrypt", enc),
            ("decrypt", dec),
        ],
    })
}

fn fs_trial(a: &DemoArgs, curve: &Arc<Curve>, rng: &mut ChaCha20Rng) -> Result<Trial> {
    let ident = hierarchy_identity(a)?;
    let ((params, root), setup) = split(measure(|| fs::setup(curve, a.depth, a.levels, rng)))?;
    let mut derive = OpLedger::default();
    let mut bundle = root;
    for c in ident.components() {
        let (b, l) = split(measure(|| bundle.derive(&params, c, rng)))?;
        bundle = b;
        derive.merge(&l);
    }
    let mut steps = vec![("setup", setup), ("derive", derive)];
    let mut ok = true;
    for period in 0..params.periods() {
        let m = Gt::random(curve, rng);
        let (ct, enc) = split(measure(|| fs::encrypt(&params, period, ident.components(), &m, rng)))?;
        let (got, dec) = measure(|| fs::decrypt(&params, &bundle, &ct));
        ok &= got.is_ok_and(|g| g == m);
        if period == 0 {
            steps.extend([("encrypt", enc), ("decrypt", dec)]);
        }
        if period + 1 < params.periods() {
            let (b, upd) = split(measure(|| bundle.update(&params, rng)))?;
            bundle = b;
            if period == 0 {
                steps.push(("update", upd));
            }
        }
    }
    Ok(Trial { ok, retries: 0, steps })
}

fn split<T>((r, l): (Result<T>, OpLedger)) -> Result<(T, OpLedger)> {
    r.map(|v| (v, l))
}
