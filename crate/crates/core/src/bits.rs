//! Owned bit strings with a `"0101"` textual form.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit string {0:?}: expected only '0' and '1'")]
pub struct ParseBitsError(pub String);

/// A finite bit string in reading order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }

    /// Bits of `bytes`, most significant bit of each byte first.
    pub fn from_bytes_msb(bytes: &[u8]) -> Self {
        Self(
            bytes
                .iter()
                .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
                .collect(),
        )
    }

    /// Minimal big-endian binary form of `n` (`"0"` for zero).
    pub fn binary_of(n: u64) -> Self {
        if n == 0 {
            return Self(vec![false]);
        }
        let len = 64 - n.leading_zeros();
        Self((0..len).rev().map(|i| (n >> i) & 1 == 1).collect())
    }

    /// Reads the bits as a big-endian unsigned integer, if it fits in 64 bits.
    pub fn to_u64_be(&self) -> Option<u64> {
        let significant = self.0.iter().skip_while(|&&b| !b).count();
        if significant > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl Deref for BitString {
    type Target = [bool];
    fn deref(&self) -> &[bool] {
        &self.0
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        Self(bits.to_vec())
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ParseBitsError(s.to_owned())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: parses a `"0101"` literal, panicking on bad input.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("bit string literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let b: BitString = "1011".parse().unwrap();
        assert_eq!(&*b, &[true, false, true, true]);
        assert_eq!(b.to_string(), "1011");
        assert!("10a1".parse::<BitString>().is_err());
        assert_eq!("".parse::<BitString>().unwrap().len(), 0);
    }

    #[test]
    fn bytes_are_msb_first() {
        assert_eq!(BitString::from_bytes_msb(&[0b1000_0001]).to_string(), "10000001");
        assert_eq!(BitString::from_bytes_msb(&[0xa0, 0x01]).to_string(), "1010000000000001");
    }

    #[test]
    fn binary_of_is_minimal() {
        assert_eq!(BitString::binary_of(4).to_string(), "100");
        assert_eq!(BitString::binary_of(1).to_string(), "1");
        assert_eq!(BitString::binary_of(0).to_string(), "0");
        assert_eq!(BitString::binary_of(u64::MAX).len(), 64);
        assert_eq!(BitString::binary_of(12345).to_u64_be(), Some(12345));
    }
}
