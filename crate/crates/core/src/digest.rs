//! Compression, chaining and rendering for the 128-bit block digest.
//!
//! Each block is XORed with its key and rotated left by the key's popcount;
//! the stepwise results are XOR-folded into a chain that starts at a public
//! IV. The whole construction is affine over GF(2) in the message bits, which
//! the analysis harness measures rather than hides.

use std::fmt;
use std::str::FromStr;

use crate::block::Block128;
use crate::codec::{encode_ascii, pad};
use crate::error::{Error, Result};
use crate::keys::{KeySchedule, KeyState, DEFAULT_SEED};

/// Chain value before the first block.
pub const DEFAULT_IV: Block128 = Block128(0x0123_4567_89ab_cdef_fedc_ba98_7654_3210);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgorithmParams {
    seed: u16,
    iv: Block128,
}

impl AlgorithmParams {
    pub fn new(seed: u64, iv: Block128) -> Result<Self> {
        let seed = KeyState::new(seed)?.value();
        Ok(AlgorithmParams { seed, iv })
    }

    pub fn with_seed(seed: u64) -> Result<Self> {
        Self::new(seed, DEFAULT_IV)
    }

    pub fn seed(&self) -> u16 {
        self.seed
    }

    pub fn iv(&self) -> Block128 {
        self.iv
    }
}

impl Default for AlgorithmParams {
    fn default() -> Self {
        AlgorithmParams {
            seed: DEFAULT_SEED,
            iv: DEFAULT_IV,
        }
    }
}

/// Finalized digest, carrying the parameters it was computed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Digest {
    value: Block128,
    params: AlgorithmParams,
}

impl Digest {
    pub fn value(&self) -> Block128 {
        self.value
    }

    pub fn params(&self) -> AlgorithmParams {
        self.params
    }

    pub fn render(&self, format: RenderFormat) -> String {
        render(self.value, format)
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RenderFormat {
    /// 32 lowercase hex digits.
    #[default]
    Hex,
    /// 16 characters, one Latin-1 code point per byte.
    Paper,
    /// 128 `0`/`1` characters.
    Binary,
}

impl RenderFormat {
    pub fn name(self) -> &'static str {
        match self {
            RenderFormat::Hex => "hex",
            RenderFormat::Paper => "paper",
            RenderFormat::Binary => "binary",
        }
    }
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hex" => Ok(RenderFormat::Hex),
            "paper" => Ok(RenderFormat::Paper),
            "binary" => Ok(RenderFormat::Binary),
            other => Err(Error::UnknownFormat(other.to_owned())),
        }
    }
}

impl fmt::Display for RenderFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

pub fn render(value: Block128, format: RenderFormat) -> String {
    match format {
        RenderFormat::Hex => value.to_hex(),
        RenderFormat::Paper => value.to_be_bytes().iter().map(|&b| char::from(b)).collect(),
        RenderFormat::Binary => value.to_binary(),
    }
}

/// `rotl(block ^ key, popcount(key) mod 128)`. A bijection in `block` for
/// a fixed key; see [`decompress`].
pub fn compress(block: Block128, key: Block128) -> Block128 {
    (block ^ key).rotate_left(rotation(key))
}

/// Inverse of [`compress`] for a fixed key.
pub fn decompress(stepwise: Block128, key: Block128) -> Block128 {
    stepwise.rotate_right(rotation(key)) ^ key
}

fn rotation(key: Block128) -> u32 {
    key.count_ones() % Block128::BITS
}

pub fn chain(prev: Block128, stepwise: Block128) -> Block128 {
    prev ^ stepwise
}

pub fn digest(message: &[u8], params: &AlgorithmParams) -> Digest {
    let padded = pad(&encode_ascii(message)).expect("byte-encoded messages have even length");
    let keys = KeySchedule::new(u64::from(params.seed)).expect("params hold a validated seed");
    let value = padded
        .blocks()
        .zip(keys)
        .fold(params.iv, |acc, (block, key)| {
            chain(acc, compress(block, key.block()))
        });
    Digest {
        value,
        params: *params,
    }
}

/// Digest under the default seed and IV.
pub fn digest_default(message: &[u8]) -> Digest {
    digest(message, &AlgorithmParams::default())
}
