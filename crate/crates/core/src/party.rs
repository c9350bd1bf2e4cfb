//! Party and qubit identifiers.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::Error;

/// A party `v_k`, stored by its 1-based index `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Party(pub u16);

impl Party {
    /// `Party::v(3)` is `v3`. Panics on 0.
    pub fn v(k: u16) -> Self {
        assert!(k >= 1, "parties are numbered from 1");
        Party(k)
    }

    pub fn index(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let digits = s
            .strip_prefix('v')
            .ok_or_else(|| Error::InvalidInput(format!("party `{s}` must look like v1, v2, ...")))?;
        match digits.parse::<u16>() {
            Ok(k) if k >= 1 => Ok(Party(k)),
            _ => Err(Error::InvalidInput(format!("bad party index in `{s}`"))),
        }
    }
}

impl Serialize for Party {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One qubit: slot `slot` of party `party`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitLabel {
    pub party: Party,
    pub slot: u8,
}

impl QubitLabel {
    pub fn new(party: Party, slot: u8) -> Self {
        Self { party, slot }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.party, self.slot)
    }
}

impl FromStr for QubitLabel {
    type Err = Error;

    /// `v3:1`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let (p, slot) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("qubit `{s}` must look like v3:1")))?;
        let slot = slot
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad slot in `{s}`")))?;
        Ok(Self::new(p.parse()?, slot))
    }
}

impl Serialize for QubitLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `v1 … vn`.
pub fn parties(n: u16) -> Vec<Party> {
    (1..=n).map(Party).collect()
}
