//! A deliberately naive re-implementation of the whole pipeline (bits as a
//! `Vec<u8>` of 0/1, factorials as schoolbook limb arithmetic) checked
//! against the library, plus golden values frozen from an independent
//! arbitrary-precision script.

use digestlab_core::{digest, expand_key, next_state, AlgorithmParams, Block128, KeyState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IV_HEX: &str = "0123456789abcdeffedcba9876543210";

fn factorial_bits(n: u32) -> Vec<u8> {
    // little-endian base 2^32 limbs
    let mut limbs: Vec<u32> = vec![1];
    for k in 2..=n {
        let mut carry = 0u64;
        for limb in limbs.iter_mut() {
            let v = u64::from(*limb) * u64::from(k) + carry;
            *limb = v as u32;
            carry = v >> 32;
        }
        if carry > 0 {
            limbs.push(carry as u32);
        }
    }
    let mut bits = Vec::new();
    for limb in limbs.iter().rev() {
        for i in (0..32).rev() {
            bits.push(((limb >> i) & 1) as u8);
        }
    }
    let first_one = bits.iter().position(|&b| b == 1).unwrap();
    bits.split_off(first_one)
}

fn oracle_key(raw: u32) -> Vec<u8> {
    let bits = factorial_bits(raw);
    if bits.len() >= 128 {
        bits[..128].to_vec()
    } else {
        let mut out = vec![0u8; 128 - bits.len()];
        out.extend(bits);
        out
    }
}

fn hex_bits(hex: &str) -> Vec<u8> {
    hex.chars()
        .flat_map(|c| {
            let v = c.to_digit(16).unwrap();
            (0..4).rev().map(move |i| ((v >> i) & 1) as u8)
        })
        .collect()
}

fn bits_hex(bits: &[u8]) -> String {
    bits.chunks(4)
        .map(|n| {
            let v = n.iter().fold(0u32, |acc, &b| acc * 2 + u32::from(b));
            std::char::from_digit(v, 16).unwrap()
        })
        .collect()
}

fn oracle_digest(message: &[u8], seed: u32, iv_hex: &str) -> String {
    // message -> bits, MSB first
    let mut s: Vec<u8> = Vec::new();
    for byte in message {
        for i in (0..8).rev() {
            s.push((byte >> i) & 1);
        }
    }
    // "01" at least once, until 448 mod 512
    loop {
        s.push(0);
        s.push(1);
        if s.len() % 512 == 448 {
            break;
        }
    }
    let start = s.len() / 3;
    let tail: Vec<u8> = (0..64).map(|i| s[(start + i) % s.len()]).collect();
    s.extend(tail);

    let mut chain = hex_bits(iv_hex);
    let mut state = seed;
    for block in s.chunks(128) {
        state = state * 39 % 967;
        let key = oracle_key(state);
        let mixed: Vec<u8> = block.iter().zip(&key).map(|(a, b)| a ^ b).collect();
        let r = key.iter().filter(|&&b| b == 1).count() % 128;
        let rotated: Vec<u8> = (0..128).map(|i| mixed[(i + r) % 128]).collect();
        for (c, b) in chain.iter_mut().zip(rotated) {
            *c ^= b;
        }
    }
    bits_hex(&chain)
}

#[test]
fn frozen_key_sequence_from_seed_one() {
    let golden = [
        39, 554, 332, 377, 198, 953, 421, 947, 187, 524, 129, 196, 875, 280, 283, 400,
    ];
    let mut s = KeyState::new(1).unwrap();
    let mut oracle = 1u32;
    for expected in golden {
        s = next_state(s);
        oracle = oracle * 39 % 967;
        assert_eq!(u32::from(s.value()), expected);
        assert_eq!(oracle, expected);
    }
}

#[test]
fn frozen_wide_factorial_keys() {
    assert_eq!(factorial_bits(966).len(), 8192);
    assert_eq!(
        expand_key(966).unwrap().block().to_hex(),
        "a68ee6e9058ffeeb10d064c18d0d491f"
    );
    assert_eq!(
        expand_key(39).unwrap().block().to_hex(),
        "e4ab0cf8d4731d96734c9707fe6ea200"
    );
}

#[test]
fn every_expanded_key_matches_limb_oracle() {
    for raw in 1..=966u32 {
        let expected = bits_hex(&oracle_key(raw));
        assert_eq!(
            expand_key(u64::from(raw)).unwrap().block().to_hex(),
            expected,
            "{raw}!"
        );
    }
}

#[test]
fn frozen_digests() {
    let cases: [(&[u8], &str); 6] = [
        (b"", "49f045e6123de2e204a9baf04b15c292"),
        (b"a", "49f045e6123de2e230a9baf04b15c292"),
        (b"ab", "49f045e6123de2e2309ebaf04b15c292"),
        (b"abc", "49f045e6123de2e2309e8cf04b15c292"),
        (&[b'A'; 56], "ae908bb32772e47df8fac375cfe3519e"),
        (
            b"The quick brown fox jumps over the lazy dog",
            "23699a3da2cee7646f7298771650909c",
        ),
    ];
    for (msg, hex) in cases {
        assert_eq!(
            digest(msg, &AlgorithmParams::default()).value().to_hex(),
            hex
        );
        assert_eq!(oracle_digest(msg, 1, IV_HEX), hex);
    }
    let seven = AlgorithmParams::with_seed(7).unwrap();
    assert_eq!(
        digest(b"ab", &seven).value().to_hex(),
        "b4830a2ed215fcb92da06037b23586c9"
    );
}

#[test]
fn random_messages_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..150 {
        let len = rng.random_range(0..400);
        let msg: Vec<u8> = (0..len).map(|_| rng.random()).collect();
        let seed = rng.random_range(1..=966u32);
        let iv = Block128(rng.random());
        let params = AlgorithmParams::new(u64::from(seed), iv).unwrap();
        assert_eq!(
            digest(&msg, &params).value().to_hex(),
            oracle_digest(&msg, seed, &iv.to_hex()),
            "len {len} seed {seed}"
        );
    }
}
