//! Seeded end-to-end runs that record one ledger per phase.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::identity::Identity;
use crate::ledger::{measure, measure_phase, OpLedger, Phase, PhaseProfile};
use crate::novel::{hibe, ibe};
use crate::pairing::Gt;
use crate::schemes::{random_message, scheme_for, SchemeId};

pub const DEMO_IDENTITY: &str = "alice@example.com";

/// Byte length used for byte-message schemes.
pub const DEMO_MSG_LEN: usize = 32;

/// Label of the one-pairing IBE in tables.
pub const OUR_LABEL: &str = "Our";

/// One phase's ledger and wall-clock time.
#[derive(Clone, Debug)]
pub struct PhaseRun {
    pub profile: PhaseProfile,
    pub elapsed: Duration,
}

impl PhaseRun {
    pub fn phase(&self) -> Phase {
        self.profile.phase
    }

    pub fn ledger(&self) -> &OpLedger {
        &self.profile.ledger
    }
}

fn timed<T>(phase: Phase, f: impl FnOnce() -> T) -> (T, PhaseRun) {
    let start = Instant::now();
    let (out, profile) = measure_phase(phase, f);
    (
        out,
        PhaseRun {
            profile,
            elapsed: start.elapsed(),
        },
    )
}

/// One run of a benchmark scheme, checked for a correct round trip.
pub fn measure_benchmark(id: SchemeId, curve: &Arc<Curve>, rng: &mut dyn RngCore) -> Result<Vec<PhaseRun>> {
    let s = scheme_for(id);
    let ident = Identity::new(DEMO_IDENTITY)?;
    let (r, setup) = timed(Phase::Setup, || s.setup(curve, DEMO_MSG_LEN, rng));
    let (params, msk) = r?;
    let (r, extract) = timed(Phase::Extract, || s.extract(&params, &msk, &ident, rng));
    let key = r?;
    let m = random_message(&params, rng)?;
    let (r, encrypt) = timed(Phase::Encrypt, || s.encrypt(&params, &ident, &m, rng));
    let ct = r?;
    let (r, decrypt) = timed(Phase::Decrypt, || s.decrypt(&params, &key, &ct));
    if r? != m {
        return Err(Error::Rejected);
    }
    Ok(vec![setup, extract, encrypt, decrypt])
}

pub fn measure_our(curve: &Arc<Curve>, rng: &mut dyn RngCore) -> Result<Vec<PhaseRun>> {
    let ident = Identity::new(DEMO_IDENTITY)?;
    let (r, setup) = timed(Phase::Setup, || ibe::setup(curve, rng));
    let (params, msk) = r?;
    let (r, extract) = timed(Phase::Extract, || ibe::extract(&params, &msk, &ident, rng));
    let key = r?;
    let m = Gt::random(curve, rng);
    let (r, encrypt) = timed(Phase::Encrypt, || ibe::encrypt(&params, &ident, &m, rng));
    let ct = r?;
    let (r, decrypt) = timed(Phase::Decrypt, || ibe::decrypt(&params, &key, &ct));
    if r? != m {
        return Err(Error::Rejected);
    }
    Ok(vec![setup, extract, encrypt, decrypt])
}

/// Per-level costs of the constant-ciphertext HIBE.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HibeLevel {
    pub level: usize,
    pub extract_user: OpLedger,
    pub encrypt: OpLedger,
    pub decrypt: OpLedger,
    pub arity: usize,
}

/// Identity `(org1, ..., org{k})` used for level `k`.
pub fn hibe_identity(k: usize) -> Result<Identity> {
    Identity::tuple((1..=k).map(|i| format!("org{i}").into_bytes()).collect())
}

pub fn measure_hibe(curve: &Arc<Curve>, v: usize, rng: &mut dyn RngCore) -> Result<Vec<HibeLevel>> {
    let (params, msk) = hibe::setup(curve, v, rng)?;
    let mut out = Vec::new();
    for k in 1..=v {
        let ids = hibe::hash_identity(curve, &hibe_identity(k)?);
        let (key, extract_user) = measure(|| hibe::extract_user(&params, &msk, &ids, rng));
        let key = key?;
        let m = Gt::random(curve, rng);
        let (ct, encrypt) = measure(|| hibe::encrypt(&params, &ids, &m, rng));
        let ct = ct?;
        let (got, decrypt) = measure(|| hibe::decrypt(&params, &key, &ct));
        if got? != m {
            return Err(Error::Rejected);
        }
        out.push(HibeLevel {
            level: k,
            extract_user,
            encrypt,
            decrypt,
            arity: ct.arity(),
        });
    }
    Ok(out)
}

/// Ledgers for every benchmark scheme, the one-pairing IBE and the HIBE
/// levels `1..=hibe_depth`.
#[derive(Clone, Debug)]
pub struct Measured {
    pub schemes: Vec<(String, Vec<PhaseRun>)>,
    pub hibe: Vec<HibeLevel>,
}

impl Measured {
    pub fn run(curve: &Arc<Curve>, seed: u64, hibe_depth: usize) -> Result<Measured> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut schemes = Vec::new();
        for id in SchemeId::ALL {
            schemes.push((id.label().to_string(), measure_benchmark(id, curve, &mut rng)?));
        }
        schemes.push((OUR_LABEL.to_string(), measure_our(curve, &mut rng)?));
        let hibe = measure_hibe(curve, hibe_depth, &mut rng)?;
        Ok(Measured { schemes, hibe })
    }

    pub fn ledger(&self, label: &str, phase: Phase) -> Option<&OpLedger> {
        self.schemes
            .iter()
            .find(|(l, _)| l == label)?
            .1
            .iter()
            .find(|p| p.phase() == phase)
            .map(PhaseRun::ledger)
    }
}
