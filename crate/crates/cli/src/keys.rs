use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use ibekit::codec::{armor, Envelope, RawEnvelope};
use ibekit::curve::Curve;
use ibekit::error::{Error, Result};
use ibekit::identity::Identity;
use ibekit::novel::{fs, hibe, ibe};
use ibekit::pairing::Gt;
use ibekit::schemes::{scheme_for, MasterSecret, Params, UserKey};
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

use crate::common::{load_curve, read_envelope, read_envelope_bytes, seeded, write_envelope, Outcome, Target};

#[derive(Subcommand, Debug)]
pub enum KeysCmd {
    /// Run setup and write params.ibk and master.ibk.
    Gen(GenArgs),
    /// Derive a user key from the master secret.
    Extract(ExtractArgs),
    /// Describe a key file; with --params, also check a user key.
    Inspect(InspectArgs),
    /// Rewrite a key file as binary or armored text.
    Convert(ConvertArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub scheme: String,
    #[arg(long, default_value = "bench")]
    pub profile: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub armor: bool,
    /// Hierarchy depth for our-hibe and fs-hibe.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Tree depth for fs-hibe.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Message length in bytes for bf and sk.
    #[arg(long, default_value_t = 32)]
    pub msg_len: usize,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub master: PathBuf,
    /// `/` separates hierarchy components.
    #[arg(long)]
    pub identity: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub armor: bool,
    /// Curve profile file, for envelopes made on a custom curve.
    #[arg(long)]
    pub profile: Option<String>,
}

#[derive(Args, Debug)]
pub struct InspectArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub profile: Option<String>,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub armor: bool,
}

pub fn run(cmd: &KeysCmd) -> Result<Outcome> {
    match cmd {
        KeysCmd::Gen(a) => gen(a),
        KeysCmd::Extract(a) => extract(a),
        KeysCmd::Inspect(a) => inspect(a),
        KeysCmd::Convert(a) => convert(a),
    }
}

fn gen(a: &GenArgs) -> Result<Outcome> {
    let curve = load_curve(&a.profile)?;
    let (mut rng, seed) = seeded(a.seed)?;
    let (params, master) = match Target::parse(&a.scheme)? {
        Target::Benchmark(id) => {
            let (p, m) = scheme_for(id).setup(&curve, a.msg_len, &mut rng)?;
            (p.to_envelope(), m.to_envelope(&curve))
        }
        Target::OurIbe => {
            let (p, m) = ibe::setup(&curve, &mut rng)?;
            (p.to_envelope(), m.to_envelope(&curve))
        }
        Target::OurHibe => {
            let (p, m) = hibe::setup(&curve, a.depth, &mut rng)?;
            (p.to_envelope(), m.to_envelope(&curve))
        }
        Target::FsHibe => {
            let (p, root) = fs::setup(&curve, a.depth, a.levels, &mut rng)?;
            (p.to_envelope(), root.to_envelope(&curve))
        }
    };
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::Io(format!("{}: {e}", a.out_dir.display())))?;
    let mut text = String::new();
    if a.seed.is_none() {
        let _ = writeln!(text, "seed: {seed}");
    }
    for (name, env) in [("params.ibk", &params), ("master.ibk", &master)] {
        let path = a.out_dir.join(name);
        write_envelope(&path, env, a.armor)?;
        let _ = writeln!(text, "wrote {}", path.display());
    }
    Ok(Outcome { text, ok: true })
}

fn extract(a: &ExtractArgs) -> Result<Outcome> {
    let (penv, curve) = read_envelope(&a.params, a.profile.as_deref())?;
    let (menv, _) = read_envelope(&a.master, Some(a.profile.as_deref().unwrap_or(curve.name())))?;
    let (mut rng, seed) = seeded(a.seed)?;
    let id = Identity::parse(&a.identity)?;
    let key = match Target::parse(&penv.scheme)? {
        Target::Benchmark(_) => {
            let params = Params::from_envelope(penv, &curve)?;
            let msk = MasterSecret::from_envelope(menv)?;
            scheme_for(params.scheme)
                .extract(&params, &msk, &id, &mut rng)?
                .to_envelope(&curve)
        }
        Target::OurIbe => {
            let params = ibe::OurParams::from_envelope(&penv, &curve)?;
            let msk = ibe::OurMaster::from_envelope(&menv)?;
            ibe::extract(&params, &msk, &id, &mut rng)?.to_envelope(&curve)
        }
        Target::OurHibe => {
            let params = hibe::HibeParams::from_envelope(&penv, &curve)?;
            let msk = hibe::HibeMaster::from_envelope(&menv)?;
            let ids = hibe::hash_identity(&curve, &id);
            let mut env = hibe::extract(&params, &msk, &ids, &mut rng)?.to_envelope(&curve);
            env.identity = Some(id);
            env
        }
        Target::FsHibe => {
            let params = fs::FsParams::from_envelope(&penv, &curve)?;
            let mut bundle = fs::FsKeyBundle::from_envelope(&menv)?;
            for c in id.components() {
                bundle = bundle.derive(&params, c, &mut rng)?;
            }
            bundle.to_envelope(&curve)
        }
    };
    write_envelope(&a.out, &key, a.armor)?;
    let mut text = String::new();
    if a.seed.is_none() {
        let _ = writeln!(text, "seed: {seed}");
    }
    let _ = writeln!(text, "wrote {}", a.out.display());
    Ok(Outcome { text, ok: true })
}

fn inspect(a: &InspectArgs) -> Result<Outcome> {
    let raw = RawEnvelope::decode(&read_envelope_bytes(&a.file)?)?;
    let curve = load_curve(a.profile.as_deref().unwrap_or(&raw.profile))?;
    let env = raw.clone().resolve(&curve)?;
    let mut text = String::new();
    let _ = writeln!(text, "kind: {}", env.kind);
    let _ = writeln!(text, "scheme: {}", env.scheme);
    let _ = writeln!(text, "profile: {}", env.profile);
    if let Some(id) = &env.identity {
        let _ = writeln!(text, "identity: {id}");
    }
    let _ = writeln!(text, "elements: {}", raw.entries.len());
    let width = raw.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in &raw.entries {
        let _ = writeln!(
            text,
            "  {:<width$}  {:<6}  {} bytes",
            e.name,
            format!("{:?}", e.tag),
            e.payload.len()
        );
    }
    let mut ok = true;
    if let Some(p) = &a.params {
        let (penv, _) = read_envelope(p, Some(a.profile.as_deref().unwrap_or(curve.name())))?;
        if penv.scheme != env.scheme {
            return Err(Error::SchemeMismatch {
                expected: penv.scheme,
                found: env.scheme,
            });
        }
        ok = validate(&curve, penv, env)?;
        text.push_str(if ok { "key valid\n" } else { "key INVALID\n" });
    }
    Ok(Outcome { text, ok })
}

/// Check a user key against the parameters. Schemes without a public key
/// check get a round trip under a fixed seed instead.
fn validate(curve: &std::sync::Arc<Curve>, penv: Envelope, env: Envelope) -> Result<bool> {
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    match Target::parse(&env.scheme)? {
        Target::Benchmark(_) => {
            let params = Params::from_envelope(penv, curve)?;
            let key = UserKey::from_envelope(env)?;
            scheme_for(params.scheme).validate_key(&params, &key)
        }
        Target::OurIbe => {
            let params = ibe::OurParams::from_envelope(&penv, curve)?;
            ibe::validate_key(&params, &ibe::OurKey::from_envelope(&env)?)
        }
        Target::OurHibe => {
            let params = hibe::HibeParams::from_envelope(&penv, curve)?;
            let key = hibe::HibeKey::from_envelope(&env)?;
            let m = Gt::random(curve, &mut rng);
            let ct = hibe::encrypt(&params, &key.ids, &m, &mut rng)?;
            Ok(hibe::decrypt(&params, &key, &ct).is_ok_and(|g| g == m))
        }
        Target::FsHibe => {
            let params = fs::FsParams::from_envelope(&penv, curve)?;
            let mut bundle = fs::FsKeyBundle::from_envelope(&env)?;
            if bundle.depth() == 0 {
                bundle = bundle.derive(&params, b"probe", &mut rng)?;
            }
            let m = Gt::random(curve, &mut rng);
            let ct = fs::encrypt(&params, bundle.period(), bundle.identity(), &m, &mut rng)?;
            Ok(fs::decrypt(&params, &bundle, &ct).is_ok_and(|g| g == m))
        }
    }
}

fn convert(a: &ConvertArgs) -> Result<Outcome> {
    let bytes = read_envelope_bytes(&a.input)?;
    let raw = RawEnvelope::decode(&bytes)?;
    let out = if a.armor {
        armor(raw.kind, &bytes).into_bytes()
    } else {
        bytes
    };
    write(&a.out, &out)?;
    Ok(Outcome {
        text: format!(
            "wrote {} ({})\n",
            a.out.display(),
            if a.armor { "armored" } else { "binary" }
        ),
        ok: true,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
