use std::fmt;

use crate::error::{Error, Result};

/// An identity: one byte string for flat IBE, a tuple of components for
/// the hierarchical schemes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    components: Vec<Vec<u8>>,
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Identity({self})")
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| match std::str::from_utf8(c) {
                Ok(s) if !s.contains('/') => s.to_string(),
                _ => format!("0x{}", hex::encode(c)),
            })
            .collect();
        f.write_str(&parts.join("/"))
    }
}

impl Identity {
    pub fn new(raw: impl Into<Vec<u8>>) -> Result<Identity> {
        Identity::tuple(vec![raw.into()])
    }

    /// A hierarchical identity `(I_1, ..., I_j)`. Components may be empty
    /// byte strings but the tuple may not.
    pub fn tuple(components: Vec<Vec<u8>>) -> Result<Identity> {
        if components.is_empty() || (components.len() == 1 && components[0].is_empty()) {
            return Err(Error::EmptyIdentity);
        }
        Ok(Identity { components })
    }

    /// Parse `a/b/c` into a three-component tuple.
    pub fn parse(s: &str) -> Result<Identity> {
        Identity::tuple(s.split('/').map(|c| c.as_bytes().to_vec()).collect())
    }

    pub fn components(&self) -> &[Vec<u8>] {
        &self.components
    }

    pub fn depth(&self) -> usize {
        self.components.len()
    }

    /// Prefix of the first `j` components.
    pub fn prefix(&self, j: usize) -> Result<Identity> {
        if j == 0 || j > self.depth() {
            return Err(Error::DepthOverflow {
                depth: j,
                max: self.depth(),
            });
        }
        Identity::tuple(self.components[..j].to_vec())
    }

    /// Canonical bytes: the raw string for a single component, a
    /// length-prefixed concatenation otherwise.
    pub fn to_bytes(&self) -> Vec<u8> {
        if self.components.len() == 1 {
            return self.components[0].clone();
        }
        let mut out = Vec::new();
        for c in &self.components {
            out.extend((c.len() as u32).to_be_bytes());
            out.extend(c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_rejected() {
        assert_eq!(Identity::new(""), Err(Error::EmptyIdentity));
        assert_eq!(Identity::tuple(vec![]), Err(Error::EmptyIdentity));
    }

    #[test]
    fn tuple_encoding_is_unambiguous() {
        let a = Identity::tuple(vec![b"ab".to_vec(), b"c".to_vec()]).unwrap();
        let b = Identity::tuple(vec![b"a".to_vec(), b"bc".to_vec()]).unwrap();
        assert_ne!(a.to_bytes(), b.to_bytes());
    }

    #[test]
    fn parse_and_display() {
        let id = Identity::parse("com/example/alice").unwrap();
        assert_eq!(id.depth(), 3);
        assert_eq!(id.to_string(), "com/example/alice");
        assert_eq!(id.prefix(2).unwrap().to_string(), "com/example");
    }
}
