use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};

/// Curve parameters as stored in a profile file.
///
/// The file format is one `key = value` per line with decimal integers,
/// `#` comments and blank lines ignored:
///
/// ```text
/// name = tiny
/// p = 11
/// a4 = 0
/// a6 = 1
/// r = 3
/// cof = 4
/// k = 2
/// ext = 1 0
/// gx = 0
/// gy = 1
/// ```
///
/// `ext` lists the low coefficients `m_0 .. m_{k-1}` of the monic reduction
/// polynomial `x^k + m_{k-1} x^{k-1} + ... + m_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveProfile {
    pub name: String,
    pub p: BigUint,
    pub a4: BigUint,
    pub a6: BigUint,
    pub r: BigUint,
    pub cof: BigUint,
    pub k: usize,
    pub ext: Vec<BigUint>,
    pub gx: BigUint,
    pub gy: BigUint,
}

const TINY: &str = include_str!("../../data/curves/tiny.curve");
const BENCH: &str = include_str!("../../data/curves/bench.curve");

const KEYS: [&str; 10] = ["name", "p", "a4", "a6", "r", "cof", "k", "ext", "gx", "gy"];

impl CurveProfile {
    /// The 12-point curve over `F_11` used for brute-force oracles.
    pub fn tiny() -> CurveProfile {
        CurveProfile::parse(TINY).expect("built-in tiny profile parses")
    }

    /// The pinned 256-bit benchmark curve.
    pub fn bench() -> CurveProfile {
        CurveProfile::parse(BENCH).expect("built-in bench profile parses")
    }

    /// `tiny`, `bench`, or a path to a profile file.
    pub fn resolve(spec: &str) -> Result<CurveProfile> {
        match spec {
            "tiny" => Ok(CurveProfile::tiny()),
            "bench" => Ok(CurveProfile::bench()),
            path => CurveProfile::load(Path::new(path)),
        }
    }

    pub fn load(path: &Path) -> Result<CurveProfile> {
        let text = std::fs::read_to_string(path)?;
        CurveProfile::parse(&text)
    }

    pub fn parse(text: &str) -> Result<CurveProfile> {
        let mut vals: [Option<(usize, String)>; 10] = Default::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let slot = KEYS.iter().position(|k| *k == key).ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("unknown key `{key}`"),
            })?;
            if vals[slot].is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            vals[slot] = Some((line_no, value.trim().to_string()));
        }
        let take = |i: usize| -> Result<(usize, String)> {
            vals[i].clone().ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("missing key `{}`", KEYS[i]),
            })
        };
        let int = |i: usize| -> Result<BigUint> {
            let (line, v) = take(i)?;
            parse_decimal(&v).ok_or_else(|| Error::Parse {
                line,
                msg: format!("`{}` is not a decimal integer", KEYS[i]),
            })
        };
        let (_, name) = take(0)?;
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::Parse {
                line: 0,
                msg: "name must be a nonempty word".into(),
            });
        }
        let (k_line, k_text) = take(6)?;
        let k = parse_decimal(&k_text)
            .and_then(|v| v.to_usize())
            .filter(|k| (1..=64).contains(k))
            .ok_or(Error::Parse {
                line: k_line,
                msg: "`k` must be an integer in 1..=64".into(),
            })?;
        let (ext_line, ext_text) = take(7)?;
        let ext = ext_text
            .split_whitespace()
            .map(parse_decimal)
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Parse {
                line: ext_line,
                msg: "`ext` must be decimal integers".into(),
            })?;
        if ext.len() != k {
            return Err(Error::Parse {
                line: ext_line,
                msg: format!("`ext` needs {k} coefficients"),
            });
        }
        Ok(CurveProfile {
            name,
            p: int(1)?,
            a4: int(2)?,
            a6: int(3)?,
            r: int(4)?,
            cof: int(5)?,
            k,
            ext,
            gx: int(8)?,
            gy: int(9)?,
        })
    }

    /// Canonical text form; `parse(to_text())` is the identity.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ext: Vec<String> = self.ext.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "p = {}", self.p);
        let _ = writeln!(out, "a4 = {}", self.a4);
        let _ = writeln!(out, "a6 = {}", self.a6);
        let _ = writeln!(out, "r = {}", self.r);
        let _ = writeln!(out, "cof = {}", self.cof);
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "ext = {}", ext.join(" "));
        let _ = writeln!(out, "gx = {}", self.gx);
        let _ = writeln!(out, "gy = {}", self.gy);
        out
    }
}

// Canonical decimal only: no sign, no leading zeros, at most 4096 digits.
fn parse_decimal(s: &str) -> Option<BigUint> {
    if s.is_empty() || s.len() > 4096 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if s.len() > 1 && s.starts_with('0') {
        return None;
    }
    BigUint::from_str_radix(s, 10).ok()
}
