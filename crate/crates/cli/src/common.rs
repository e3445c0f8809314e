use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use ibekit::codec::{dearmor, Envelope, RawEnvelope};
use ibekit::curve::{Curve, CurveProfile};
use ibekit::error::{Error, Result};
use ibekit::novel::{fs, hibe, ibe};
use ibekit::schemes::SchemeId;
use rand_chacha::ChaCha20Rng;
use rand_core::{OsRng, SeedableRng, TryRngCore};

use crate::Format;

/// Retries with a suffixed identity when extraction aborts. Only small
/// curves ever get near this bound.
pub const IDENTITY_RETRIES: usize = 64;

/// What a command prints and whether its checks held.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

pub fn load_curve(spec: &str) -> Result<Arc<Curve>> {
    Curve::new(CurveProfile::resolve(spec)?)
}

/// Generator seeded from `seed`, or from the OS. The seed is returned so
/// it can be printed and the run repeated.
pub fn seeded(seed: Option<u64>) -> Result<(ChaCha20Rng, u64)> {
    let seed = match seed {
        Some(s) => s,
        None => OsRng.try_next_u64().map_err(|e| Error::Io(format!("os rng: {e}")))?,
    };
    Ok((ChaCha20Rng::seed_from_u64(seed), seed))
}

/// `base`, then `base#1`, `base#2`, ... while `f` aborts extraction.
/// Returns the attempt index that succeeded with its value.
pub fn retry_identity<T>(mut f: impl FnMut(usize) -> Result<T>) -> Result<(usize, T)> {
    for attempt in 0..IDENTITY_RETRIES {
        match f(attempt) {
            Err(Error::ExtractAbort) => continue,
            other => return other.map(|v| (attempt, v)),
        }
    }
    Err(Error::ExtractAbort)
}

pub fn suffixed(base: &str, attempt: usize) -> String {
    if attempt == 0 {
        base.to_string()
    } else {
        format!("{base}#{attempt}")
    }
}

/// Render rows as an aligned table or as CSV.
pub fn grid(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
        }
        Format::Table => {
            let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for r in rows {
                for (w, c) in width.iter_mut().zip(r) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cells: Vec<&str>| {
                let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
                parts.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(header.to_vec()));
            for r in rows {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
    }
    out
}

pub fn is_armored(bytes: &[u8]) -> bool {
    bytes.trim_ascii_start().starts_with(b"-----BEGIN")
}

/// File contents as envelope bytes, undoing armor when present.
pub fn read_envelope_bytes(path: &Path) -> Result<Vec<u8>> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if is_armored(&bytes) {
        let text = std::str::from_utf8(&bytes).map_err(|_| Error::Malformed("armor is not UTF-8".into()))?;
        Ok(dearmor(text)?.1)
    } else {
        Ok(bytes)
    }
}

/// Decode a key file. The curve comes from `profile` when given, otherwise
/// from the profile name the envelope carries.
pub fn read_envelope(path: &Path, profile: Option<&str>) -> Result<(Envelope, Arc<Curve>)> {
    let raw = RawEnvelope::decode(&read_envelope_bytes(path)?)?;
    let curve = load_curve(profile.unwrap_or(&raw.profile))?;
    let env = raw.resolve(&curve)?;
    Ok((env, curve))
}

pub fn write_envelope(path: &Path, env: &Envelope, armor: bool) -> Result<()> {
    let bytes = if armor {
        env.to_armor().into_bytes()
    } else {
        env.encode()
    };
    std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A scheme selectable on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Benchmark(SchemeId),
    OurIbe,
    OurHibe,
    FsHibe,
}

impl Target {
    pub fn parse(s: &str) -> Result<Target> {
        Ok(match s {
            ibe::SCHEME_NAME => Target::OurIbe,
            hibe::SCHEME_NAME => Target::OurHibe,
            fs::SCHEME_NAME => Target::FsHibe,
            other => Target::Benchmark(other.parse()?),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::Benchmark(id) => id.name(),
            Target::OurIbe => ibe::SCHEME_NAME,
            Target::OurHibe => hibe::SCHEME_NAME,
            Target::FsHibe => fs::SCHEME_NAME,
        }
    }
}

/// `all` expands to the six benchmark schemes, the one-pairing IBE and
/// the HIBE. The forward-secure scheme only runs when named.
pub fn select(spec: &str) -> Result<Vec<Target>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        if part == "all" {
            out.extend(SchemeId::ALL.into_iter().map(Target::Benchmark));
            out.extend([Target::OurIbe, Target::OurHibe]);
        } else {
            out.push(Target::parse(part)?);
        }
    }
    out.dedup();
    Ok(out)
}
