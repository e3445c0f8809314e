//! Binary envelope and hex armor for every serialized key-material type.
//!
//! Layout, all integers big-endian:
//!
//! ```text
//! "IBEK" | version u8 | kind u8 | scheme str8 | profile str8
//!        | identity: u16 count, then (u32 len, bytes)*
//!        | entries:  u32 count, then (name str8, tag u8, u32 len, payload)*
//!        | crc32 u32 over everything before it
//! ```
//!
//! `str8` is a one-byte length followed by UTF-8. Decoding happens in two
//! stages: [`RawEnvelope::decode`] checks framing and the checksum without
//! any curve, then [`RawEnvelope::resolve`] turns payloads into typed
//! elements against a curve, checking subgroup membership.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::identity::Identity;
use crate::pairing::Gt;

pub const MAGIC: &[u8; 4] = b"IBEK";
pub const VERSION: u8 = 1;
const ARMOR_WIDTH: usize = 64;

/// What an envelope holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Params,
    MasterSecret,
    UserKey,
    Ciphertext,
    FsBundle,
}

impl Kind {
    fn code(self) -> u8 {
        match self {
            Kind::Params => 1,
            Kind::MasterSecret => 2,
            Kind::UserKey => 3,
            Kind::Ciphertext => 4,
            Kind::FsBundle => 5,
        }
    }

    fn from_code(c: u8) -> Result<Kind> {
        Ok(match c {
            1 => Kind::Params,
            2 => Kind::MasterSecret,
            3 => Kind::UserKey,
            4 => Kind::Ciphertext,
            5 => Kind::FsBundle,
            _ => return Err(Error::Malformed(format!("unknown envelope kind {c}"))),
        })
    }

    /// Label used in armor lines.
    pub fn label(self) -> &'static str {
        match self {
            Kind::Params => "PARAMS",
            Kind::MasterSecret => "MASTER SECRET",
            Kind::UserKey => "USER KEY",
            Kind::Ciphertext => "CIPHERTEXT",
            Kind::FsBundle => "FS KEY BUNDLE",
        }
    }

    fn from_label(s: &str) -> Result<Kind> {
        [
            Kind::Params,
            Kind::MasterSecret,
            Kind::UserKey,
            Kind::Ciphertext,
            Kind::FsBundle,
        ]
        .into_iter()
        .find(|k| k.label() == s)
        .ok_or_else(|| Error::Malformed(format!("unknown armor label `{s}`")))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    Point = 1,
    Gt = 2,
    Scalar = 3,
    Bytes = 4,
    Int = 5,
}

impl Tag {
    fn from_code(c: u8) -> Result<Tag> {
        Ok(match c {
            1 => Tag::Point,
            2 => Tag::Gt,
            3 => Tag::Scalar,
            4 => Tag::Bytes,
            5 => Tag::Int,
            _ => return Err(Error::Malformed(format!("unknown element tag {c}"))),
        })
    }
}

/// A typed value inside key material.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Point(Point),
    Gt(Gt),
    /// An exponent or other residue modulo `r`.
    Scalar(BigUint),
    Bytes(Vec<u8>),
    Int(u64),
}

impl Element {
    pub fn tag(&self) -> Tag {
        match self {
            Element::Point(_) => Tag::Point,
            Element::Gt(_) => Tag::Gt,
            Element::Scalar(_) => Tag::Scalar,
            Element::Bytes(_) => Tag::Bytes,
            Element::Int(_) => Tag::Int,
        }
    }

    fn payload(&self) -> Vec<u8> {
        match self {
            Element::Point(p) => p.to_bytes(),
            Element::Gt(g) => g.to_bytes(),
            Element::Scalar(s) => s.to_bytes_be(),
            Element::Bytes(b) => b.clone(),
            Element::Int(n) => n.to_be_bytes().to_vec(),
        }
    }
}

/// Named elements in insertion order. Names are unique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElementMap {
    entries: Vec<(String, Element)>,
}

impl ElementMap {
    pub fn new() -> ElementMap {
        ElementMap::default()
    }

    /// Insert or replace.
    pub fn set(&mut self, name: impl Into<String>, e: Element) {
        let name = name.into();
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = e,
            None => self.entries.push((name, e)),
        }
    }

    pub fn with(mut self, name: impl Into<String>, e: Element) -> ElementMap {
        self.set(name, e);
        self
    }

    pub fn remove(&mut self, name: &str) -> Option<Element> {
        let i = self.entries.iter().position(|(n, _)| n == name)?;
        Some(self.entries.remove(i).1)
    }

    pub fn get(&self, name: &str) -> Result<&Element> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::MissingElement(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|(n, _)| n == name)
    }

    pub fn point(&self, name: &str) -> Result<&Point> {
        match self.get(name)? {
            Element::Point(p) => Ok(p),
            _ => Err(Error::ElementType(name.to_string())),
        }
    }

    pub fn gt(&self, name: &str) -> Result<&Gt> {
        match self.get(name)? {
            Element::Gt(g) => Ok(g),
            _ => Err(Error::ElementType(name.to_string())),
        }
    }

    pub fn scalar(&self, name: &str) -> Result<&BigUint> {
        match self.get(name)? {
            Element::Scalar(s) => Ok(s),
            _ => Err(Error::ElementType(name.to_string())),
        }
    }

    pub fn bytes(&self, name: &str) -> Result<&[u8]> {
        match self.get(name)? {
            Element::Bytes(b) => Ok(b),
            _ => Err(Error::ElementType(name.to_string())),
        }
    }

    pub fn int(&self, name: &str) -> Result<u64> {
        match self.get(name)? {
            Element::Int(n) => Ok(*n),
            _ => Err(Error::ElementType(name.to_string())),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Element)> {
        self.entries.iter().map(|(n, e)| (n.as_str(), e))
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = (&str, &mut Element)> {
        self.entries.iter_mut().map(|(n, e)| (n.as_str(), e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A fully typed envelope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub kind: Kind,
    pub scheme: String,
    pub profile: String,
    pub identity: Option<Identity>,
    pub elements: ElementMap,
}

impl Envelope {
    pub fn encode(&self) -> Vec<u8> {
        let raw = RawEnvelope {
            kind: self.kind,
            scheme: self.scheme.clone(),
            profile: self.profile.clone(),
            identity: self
                .identity
                .as_ref()
                .map(|i| i.components().to_vec())
                .unwrap_or_default(),
            entries: self
                .elements
                .iter()
                .map(|(n, e)| RawEntry {
                    name: n.to_string(),
                    tag: e.tag(),
                    payload: e.payload(),
                })
                .collect(),
        };
        raw.encode()
    }

    /// Both decoding stages against `curve`.
    pub fn decode(bytes: &[u8], curve: &Arc<Curve>) -> Result<Envelope> {
        RawEnvelope::decode(bytes)?.resolve(curve)
    }

    pub fn to_armor(&self) -> String {
        armor(self.kind, &self.encode())
    }

    pub fn from_armor(text: &str, curve: &Arc<Curve>) -> Result<Envelope> {
        let (kind, bytes) = dearmor(text)?;
        let env = Envelope::decode(&bytes, curve)?;
        if env.kind != kind {
            return Err(Error::Malformed(format!(
                "armor says {kind}, envelope holds {}",
                env.kind
            )));
        }
        Ok(env)
    }

    /// Fail unless this envelope is `kind` for `scheme`.
    pub fn expect(&self, kind: Kind, scheme: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Malformed(format!("expected {kind}, found {}", self.kind)));
        }
        if self.scheme != scheme {
            return Err(Error::SchemeMismatch {
                expected: scheme.to_string(),
                found: self.scheme.clone(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEntry {
    pub name: String,
    pub tag: Tag,
    pub payload: Vec<u8>,
}

/// Framing-level view of an envelope: checksum verified, payloads untyped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEnvelope {
    pub kind: Kind,
    pub scheme: String,
    pub profile: String,
    pub identity: Vec<Vec<u8>>,
    pub entries: Vec<RawEntry>,
}

impl RawEnvelope {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend(MAGIC);
        out.push(VERSION);
        out.push(self.kind.code());
        put_str8(&mut out, &self.scheme);
        put_str8(&mut out, &self.profile);
        out.extend((self.identity.len() as u16).to_be_bytes());
        for c in &self.identity {
            out.extend((c.len() as u32).to_be_bytes());
            out.extend(c);
        }
        out.extend((self.entries.len() as u32).to_be_bytes());
        for e in &self.entries {
            put_str8(&mut out, &e.name);
            out.push(e.tag as u8);
            out.extend((e.payload.len() as u32).to_be_bytes());
            out.extend(&e.payload);
        }
        let crc = crc32fast::hash(&out);
        out.extend(crc.to_be_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<RawEnvelope> {
        if bytes.len() < MAGIC.len() + 2 + 4 {
            return Err(Error::Malformed("envelope truncated".into()));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::Malformed("bad magic".into()));
        }
        let (body, trailer) = bytes.split_at(bytes.len() - 4);
        let crc = u32::from_be_bytes(trailer.try_into().expect("4 bytes"));
        if crc32fast::hash(body) != crc {
            return Err(Error::Checksum);
        }
        let mut r = Reader { buf: body, pos: 4 };
        let version = r.u8()?;
        if version != VERSION {
            return Err(Error::Version(version));
        }
        let kind = Kind::from_code(r.u8()?)?;
        let scheme = r.str8()?;
        let profile = r.str8()?;
        let n_id = r.u16()? as usize;
        let mut identity = Vec::with_capacity(n_id.min(64));
        for _ in 0..n_id {
            let len = r.u32()? as usize;
            identity.push(r.take(len)?.to_vec());
        }
        let n = r.u32()? as usize;
        let mut entries: Vec<RawEntry> = Vec::with_capacity(n.min(1024));
        for _ in 0..n {
            let name = r.str8()?;
            let tag = Tag::from_code(r.u8()?)?;
            let len = r.u32()? as usize;
            let payload = r.take(len)?.to_vec();
            if entries.iter().any(|e| e.name == name) {
                return Err(Error::Malformed(format!("duplicate element `{name}`")));
            }
            entries.push(RawEntry { name, tag, payload });
        }
        if r.pos != body.len() {
            return Err(Error::Malformed("trailing bytes before checksum".into()));
        }
        Ok(RawEnvelope {
            kind,
            scheme,
            profile,
            identity,
            entries,
        })
    }

    /// Second stage: type every payload against `curve`.
    pub fn resolve(self, curve: &Arc<Curve>) -> Result<Envelope> {
        if self.profile != curve.name() {
            return Err(Error::Malformed(format!(
                "envelope is for curve `{}`, not `{}`",
                self.profile,
                curve.name()
            )));
        }
        let identity = if self.identity.is_empty() {
            None
        } else {
            Some(Identity::tuple(self.identity)?)
        };
        let mut elements = ElementMap::new();
        for e in self.entries {
            let value = match e.tag {
                Tag::Point => Element::Point(curve.point_from_bytes(&e.payload)?),
                Tag::Gt => Element::Gt(Gt::from_bytes(curve, &e.payload)?),
                Tag::Scalar => {
                    let s = BigUint::from_bytes_be(&e.payload);
                    if &s >= curve.r() || (e.payload.len() > 1 && e.payload[0] == 0) {
                        return Err(Error::Malformed(format!("scalar `{}` not canonical", e.name)));
                    }
                    Element::Scalar(s)
                }
                Tag::Bytes => Element::Bytes(e.payload),
                Tag::Int => {
                    let b: [u8; 8] = e
                        .payload
                        .as_slice()
                        .try_into()
                        .map_err(|_| Error::Malformed(format!("integer `{}` must be 8 bytes", e.name)))?;
                    Element::Int(u64::from_be_bytes(b))
                }
            };
            elements.set(e.name, value);
        }
        Ok(Envelope {
            kind: self.kind,
            scheme: self.scheme,
            profile: self.profile,
            identity,
            elements,
        })
    }
}

fn put_str8(out: &mut Vec<u8>, s: &str) {
    assert!(s.len() <= u8::MAX as usize, "name too long for str8");
    out.push(s.len() as u8);
    out.extend(s.as_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Malformed("envelope truncated".into()))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn str8(&mut self) -> Result<String> {
        let n = self.u8()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| Error::Malformed("name is not UTF-8".into()))
    }
}

/// Hex armor, 64 characters per line between BEGIN/END markers.
pub fn armor(kind: Kind, bytes: &[u8]) -> String {
    let hex = hex::encode(bytes);
    let mut out = format!("-----BEGIN IBEKIT {}-----\n", kind.label());
    for line in hex.as_bytes().chunks(ARMOR_WIDTH) {
        out.push_str(std::str::from_utf8(line).expect("hex is ASCII"));
        out.push('\n');
    }
    out.push_str(&format!("-----END IBEKIT {}-----\n", kind.label()));
    out
}

/// Inverse of [`armor`]. Whitespace around lines is ignored.
pub fn dearmor(text: &str) -> Result<(Kind, Vec<u8>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let bad = |m: &str| Error::Malformed(format!("armor: {m}"));
    let begin = lines.next().ok_or_else(|| bad("empty input"))?;
    let label = begin
        .strip_prefix("-----BEGIN IBEKIT ")
        .and_then(|l| l.strip_suffix("-----"))
        .ok_or_else(|| bad("missing BEGIN line"))?;
    let kind = Kind::from_label(label)?;
    let end = format!("-----END IBEKIT {label}-----");
    let mut hex_text = String::new();
    let mut closed = false;
    for line in lines.by_ref() {
        if line == end {
            closed = true;
            break;
        }
        if line.len() > ARMOR_WIDTH {
            return Err(bad("line longer than 64 characters"));
        }
        hex_text.push_str(line);
    }
    if !closed {
        return Err(bad("missing END line"));
    }
    if lines.next().is_some() {
        return Err(bad("text after END line"));
    }
    let bytes = hex::decode(&hex_text).map_err(|e| bad(&e.to_string()))?;
    Ok((kind, bytes))
}
