//! Byte messages to bitstrings, two-stage padding, and 128-bit blocking.
//!
//! Padding first appends copies of `01` until the length is 448 mod 512
//! (at least one copy, even when the message already sits on the
//! congruence), then appends a 64-bit tail copied out of that stage-one
//! string starting at `floor(len / 3)`.

use std::fmt;

use crate::block::Block128;
use crate::error::{Error, Result};

const STAGE1_MODULUS: usize = 512;
const STAGE1_RESIDUE: usize = 448;
const TAIL_BITS: usize = 64;
const FILL: [bool; 2] = [false, true];

/// Ordered bit sequence, bit 0 is the leftmost (most significant) bit.
///
/// Bits are packed MSB-first into bytes; trailing bits of the last byte
/// beyond `len` are always zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    /// Parses a string of `0`/`1` characters. Anything else yields `None`.
    pub fn from_bit_str(text: &str) -> Option<Self> {
        let mut out = BitString::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let offset = self.len % 8;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("byte reserved above") |= 0x80 >> offset;
        }
        self.len += 1;
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        (index < self.len).then(|| self.bytes[index / 8] & (0x80 >> (index % 8)) != 0)
    }

    pub fn extend_from(&mut self, other: &BitString) {
        if self.len.is_multiple_of(8) {
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
        } else {
            for bit in other.iter() {
                self.push(bit);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bytes[i / 8] & (0x80 >> (i % 8)) != 0)
    }

    /// Reassembles bytes from 8-bit groups. `None` unless the length is a
    /// multiple of 8.
    pub fn to_bytes(&self) -> Option<Vec<u8>> {
        self.len.is_multiple_of(8).then(|| self.bytes.clone())
    }

    /// The 128 bits starting at `start`. Panics if they run past the end.
    pub fn block_at(&self, start: usize) -> Block128 {
        assert!(
            start + 128 <= self.len,
            "block at {start} overruns bitstring of length {}",
            self.len
        );
        if start.is_multiple_of(8) {
            let first = start / 8;
            let mut word = [0u8; 16];
            word.copy_from_slice(&self.bytes[first..first + 16]);
            Block128::from_be_bytes(word)
        } else {
            let mut value = 0u128;
            for i in start..start + 128 {
                value = (value << 1) | u128::from(self.bytes[i / 8] >> (7 - i % 8) & 1);
            }
            Block128(value)
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({}: ", self.len)?;
        for bit in self.iter().take(64) {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        if self.len > 64 {
            f.write_str("...")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A fully padded message together with the bookkeeping needed to audit it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedMessage {
    bits: BitString,
    original_bit_length: usize,
    stage1_length: usize,
    tail_offset: usize,
}

impl PaddedMessage {
    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn original_bit_length(&self) -> usize {
        self.original_bit_length
    }

    pub fn stage1_length(&self) -> usize {
        self.stage1_length
    }

    pub fn tail_offset(&self) -> usize {
        self.tail_offset
    }

    pub fn block_count(&self) -> usize {
        self.bits.len() / 128
    }

    /// Walks the padded bits 128 at a time without materializing the blocks.
    pub fn blocks(&self) -> impl ExactSizeIterator<Item = Block128> + '_ {
        (0..self.block_count()).map(move |i| self.bits.block_at(i * 128))
    }
}

/// Each byte becomes 8 bits, most significant first. Any byte value is accepted.
pub fn encode_ascii(message: &[u8]) -> BitString {
    BitString {
        bytes: message.to_vec(),
        len: message.len() * 8,
    }
}

/// Appends the minimal number `k >= 1` of `01` pairs that brings the length
/// to 448 mod 512.
pub fn pad_stage1(m: &BitString) -> Result<BitString> {
    if !m.len().is_multiple_of(2) {
        return Err(Error::OddLength(m.len()));
    }
    let first = m.len() + FILL.len();
    let target =
        first + (STAGE1_RESIDUE + STAGE1_MODULUS - first % STAGE1_MODULUS) % STAGE1_MODULUS;
    let mut out = BitString::with_capacity(target + TAIL_BITS);
    out.extend_from(m);
    while out.len() < target {
        for bit in FILL {
            out.push(bit);
        }
    }
    debug_assert_eq!(out.len() % STAGE1_MODULUS, STAGE1_RESIDUE);
    Ok(out)
}

/// 64 consecutive bits of `s` starting at `floor(len / 3)`, wrapping around
/// the end if the window overruns.
pub fn extract_tail64(s: &BitString) -> Result<BitString> {
    if s.len() < TAIL_BITS {
        return Err(Error::TooShortForTail(s.len()));
    }
    let start = s.len() / 3;
    let mut tail = BitString::with_capacity(TAIL_BITS);
    for i in 0..TAIL_BITS {
        tail.push(s.get((start + i) % s.len()).expect("index reduced mod len"));
    }
    Ok(tail)
}

pub fn pad(m: &BitString) -> Result<PaddedMessage> {
    let mut bits = pad_stage1(m)?;
    let stage1_length = bits.len();
    let tail = extract_tail64(&bits)?;
    bits.extend_from(&tail);
    Ok(PaddedMessage {
        bits,
        original_bit_length: m.len(),
        stage1_length,
        tail_offset: stage1_length / 3,
    })
}

pub fn split_blocks(p: &PaddedMessage) -> Vec<Block128> {
    p.blocks().collect()
}
