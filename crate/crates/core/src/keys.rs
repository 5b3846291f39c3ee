//! Per-block key generation.
//!
//! The state walks the multiplicative congruential recurrence
//! `k' = 39 k mod 967`; each state is expanded to 128 bits by taking the top
//! 128 bits of `k!`. The seed itself is never expanded: block `n` uses the
//! state reached after `n + 1` steps.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::block::Block128;
use crate::error::{Error, Result};

pub const MODULUS: u16 = 967;
pub const MULTIPLIER: u16 = 39;
pub const MIN_STATE: u16 = 1;
pub const MAX_STATE: u16 = MODULUS - 1;
pub const DEFAULT_SEED: u16 = 1;

/// Generator state, always in `[1, 966]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyState {
    value: u16,
    step_index: u64,
}

impl KeyState {
    pub fn new(seed: u64) -> Result<Self> {
        Ok(KeyState {
            value: check_range(seed)?,
            step_index: 0,
        })
    }

    pub fn value(self) -> u16 {
        self.value
    }

    /// Number of transitions taken since the seed.
    pub fn step_index(self) -> u64 {
        self.step_index
    }
}

/// A 128-bit key derived from a factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyBlock(pub Block128);

impl KeyBlock {
    pub fn block(self) -> Block128 {
        self.0
    }
}

fn check_range(raw: u64) -> Result<u16> {
    if (u64::from(MIN_STATE)..=u64::from(MAX_STATE)).contains(&raw) {
        Ok(raw as u16)
    } else {
        Err(Error::KeyOutOfRange(raw))
    }
}

pub fn next_state(s: KeyState) -> KeyState {
    KeyState {
        value: ((u32::from(s.value) * u32::from(MULTIPLIER)) % u32::from(MODULUS)) as u16,
        step_index: s.step_index + 1,
    }
}

/// The 128 most significant bits of `n`, left-padded with zeros when `n` is
/// narrower than 128 bits.
fn leading_128(n: &BigUint) -> Block128 {
    let width = n.bits();
    let top = if width <= 128 {
        n.clone()
    } else {
        n >> (width - 128)
    };
    Block128(top.to_u128().expect("at most 128 bits remain"))
}

// Only 966 distinct factorials are ever needed, so they are built once,
// incrementally, and shared.
fn factorial_table() -> &'static [Block128] {
    static TABLE: OnceLock<Vec<Block128>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(usize::from(MODULUS));
        let mut acc = BigUint::one();
        table.push(leading_128(&acc));
        for n in 1..MODULUS {
            acc *= n;
            table.push(leading_128(&acc));
        }
        table
    })
}

pub fn expand_key(raw: u64) -> Result<KeyBlock> {
    let n = check_range(raw)?;
    Ok(KeyBlock(factorial_table()[usize::from(n)]))
}

/// Key for block `block_index`: advance `block_index + 1` times, then expand.
pub fn key_for_block(seed: u64, block_index: u64) -> Result<KeyBlock> {
    let mut state = KeyState::new(seed)?;
    // every orbit length divides 966, so only the residue matters
    let steps = (block_index % u64::from(MAX_STATE)) + 1;
    for _ in 0..steps {
        state = next_state(state);
    }
    expand_key(u64::from(state.value))
}

/// Endless stream of block keys from a seed, in block order.
#[derive(Debug, Clone)]
pub struct KeySchedule {
    state: KeyState,
}

impl KeySchedule {
    pub fn new(seed: u64) -> Result<Self> {
        Ok(KeySchedule {
            state: KeyState::new(seed)?,
        })
    }

    pub fn state(&self) -> KeyState {
        self.state
    }
}

impl Iterator for KeySchedule {
    type Item = KeyBlock;

    fn next(&mut self) -> Option<KeyBlock> {
        self.state = next_state(self.state);
        Some(KeyBlock(factorial_table()[usize::from(self.state.value)]))
    }
}

/// Length of the cycle the state sequence from `seed` falls into (Brent's
/// cycle detection).
pub fn schedule_period(seed: u64) -> Result<u64> {
    let start = KeyState::new(seed)?;
    let mut power = 1u64;
    let mut period = 1u64;
    let mut tortoise = start;
    let mut hare = next_state(start);
    while tortoise.value != hare.value {
        if power == period {
            tortoise = hare;
            power *= 2;
            period = 0;
        }
        hare = next_state(hare);
        period += 1;
    }
    Ok(period)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state_values(seed: u64, n: usize) -> Vec<u16> {
        let mut s = KeyState::new(seed).unwrap();
        (0..n)
            .map(|_| {
                s = next_state(s);
                s.value()
            })
            .collect()
    }

    #[test]
    fn first_transitions() {
        assert_eq!(state_values(1, 4), vec![39, 554, 332, 377]);
        let s = next_state(KeyState::new(39).unwrap());
        assert_eq!(s.value(), 554);
        assert_eq!(s.step_index(), 1);
    }

    #[test]
    fn seeds_out_of_range_rejected() {
        assert_eq!(KeyState::new(0), Err(Error::KeyOutOfRange(0)));
        assert_eq!(KeyState::new(967), Err(Error::KeyOutOfRange(967)));
        assert!(expand_key(0).is_err());
        assert!(expand_key(967).is_err());
        assert!(key_for_block(0, 3).is_err());
        assert!(KeySchedule::new(0).is_err());
    }

    #[test]
    fn small_factorials() {
        assert_eq!(expand_key(1).unwrap().block(), Block128(1));
        assert_eq!(expand_key(5).unwrap().block(), Block128(0b1111000));
        assert_eq!(
            expand_key(34).unwrap().block().0,
            (1..=34u128).product::<u128>()
        );
    }

    #[test]
    fn key_for_block_follows_the_walk() {
        assert_eq!(key_for_block(1, 0).unwrap(), expand_key(39).unwrap());
        assert_eq!(key_for_block(1, 2).unwrap(), expand_key(332).unwrap());
        assert_eq!(key_for_block(5, 17).unwrap(), key_for_block(5, 17).unwrap());
    }

    #[test]
    fn schedule_iterator_agrees_with_indexed_keys() {
        let keys: Vec<_> = KeySchedule::new(42).unwrap().take(2500).collect();
        for (i, k) in keys.iter().enumerate() {
            assert_eq!(*k, key_for_block(42, i as u64).unwrap(), "block {i}");
        }
    }

    #[test]
    fn period_divides_group_order() {
        for seed in 1..=966 {
            let p = schedule_period(seed).unwrap();
            assert_eq!(966 % p, 0, "seed {seed}");
        }
        assert_eq!(schedule_period(1).unwrap(), 69);
    }
}
