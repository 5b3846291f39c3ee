//! A 128-bit block digest keyed by factorials of a multiplicative
//! congruential sequence, an in-tree MD5 for comparison, and a harness that
//! measures both.
//!
//! ```
//! use digestlab_core::{digest, AlgorithmParams, RenderFormat};
//!
//! let d = digest(b"ab", &AlgorithmParams::default());
//! assert_eq!(d.render(RenderFormat::Hex).len(), 32);
//! ```
//!
//! The construction is not a secure hash. Its chaining is linear, so
//! collisions are easy to produce; the `analysis` module exists to show that.

pub mod analysis;
pub mod block;
pub mod codec;
pub mod digest;
pub mod error;
pub mod keys;
pub mod md5;

pub use block::Block128;
pub use codec::{
    encode_ascii, extract_tail64, pad, pad_stage1, split_blocks, BitString, PaddedMessage,
};
pub use digest::{
    chain, compress, decompress, digest, digest_default, render, AlgorithmParams, Digest,
    RenderFormat, DEFAULT_IV,
};
pub use error::{Error, Result};
pub use keys::{
    expand_key, key_for_block, next_state, schedule_period, KeyBlock, KeySchedule, KeyState,
};
pub use md5::{md5, Md5Digest};
