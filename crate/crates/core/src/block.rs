use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A 128-bit word. Message blocks, keys, chain state and the final digest all
/// live in this type. Bit 0 is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Block128(pub u128);

impl Block128 {
    pub const ZERO: Block128 = Block128(0);
    pub const ONES: Block128 = Block128(u128::MAX);
    pub const BITS: u32 = 128;

    pub fn from_be_bytes(bytes: [u8; 16]) -> Self {
        Block128(u128::from_be_bytes(bytes))
    }

    pub fn to_be_bytes(self) -> [u8; 16] {
        self.0.to_be_bytes()
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    pub fn rotate_left(self, n: u32) -> Self {
        Block128(self.0.rotate_left(n))
    }

    pub fn rotate_right(self, n: u32) -> Self {
        Block128(self.0.rotate_right(n))
    }

    /// Bit at `index`, counting from the most significant end.
    pub fn bit(self, index: u32) -> bool {
        assert!(index < Self::BITS, "bit index {index} out of range");
        (self.0 >> (127 - index)) & 1 == 1
    }

    pub fn hamming_distance(self, other: Block128) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// 32 lowercase hex digits.
    pub fn to_hex(self) -> String {
        format!("{:032x}", self.0)
    }

    /// 128 characters of `0` / `1`, most significant first.
    pub fn to_binary(self) -> String {
        format!("{:0128b}", self.0)
    }

    /// Parses exactly 32 hex digits (either case), no prefix.
    pub fn from_hex(text: &str) -> Result<Self> {
        if text.len() != 32 || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::InvalidHex(text.to_owned()));
        }
        u128::from_str_radix(text, 16)
            .map(Block128)
            .map_err(|_| Error::InvalidHex(text.to_owned()))
    }
}

impl BitXor for Block128 {
    type Output = Block128;

    fn bitxor(self, rhs: Block128) -> Block128 {
        Block128(self.0 ^ rhs.0)
    }
}

impl FromStr for Block128 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Block128::from_hex(s)
    }
}

impl fmt::Display for Block128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:032x}", self.0)
    }
}

impl fmt::LowerHex for Block128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}
