//! Statistical harness: distinctiveness tables, the alphabet/length
//! randomness ratio, avalanche and per-bit bias measurements, and exhaustive
//! collision scans over small message spaces.
//!
//! Random inputs come from ChaCha8 streams keyed by `(rng_seed, trial)`, so
//! results do not depend on how rayon schedules trials. All reductions are
//! integer sums, so parallel and sequential runs agree bit for bit.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::block::Block128;
use crate::digest::{digest, AlgorithmParams, RenderFormat};
use crate::error::{Error, Result};
use crate::md5::md5;

/// Largest message space `collision_scan` will enumerate.
pub const COLLISION_SCAN_LIMIT: u128 = 10_000_000;

/// The five inputs of the published distinctiveness table.
pub const TABLE_I_INPUTS: [&str; 5] = [
    "ab",
    "system simulation",
    "cd",
    "project reports",
    "niharjyoti",
];

/// Published MD5 column, then its AVERAGE row.
pub const TABLE_I_MD5: [f64; 6] = [62.5, 50.0, 46.87, 50.0, 40.62, 49.99];

/// Published column for the factorial-keyed digest, then its AVERAGE row.
pub const TABLE_I_PROPOSED: [f64; 6] = [65.6, 59.37, 65.62, 70.3, 76.56, 67.49];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmId {
    Md5,
    Dl128,
}

impl AlgorithmId {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Md5 => "md5",
            AlgorithmId::Dl128 => "dl128",
        }
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md5" => Ok(AlgorithmId::Md5),
            "dl128" => Ok(AlgorithmId::Dl128),
            other => Err(Error::UnknownAlgorithm(other.to_owned())),
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// A digest algorithm under test, with whatever parameters it needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Md5,
    Dl128(AlgorithmParams),
}

impl Algorithm {
    pub fn from_id(id: AlgorithmId, params: AlgorithmParams) -> Self {
        match id {
            AlgorithmId::Md5 => Algorithm::Md5,
            AlgorithmId::Dl128 => Algorithm::Dl128(params),
        }
    }

    pub fn id(&self) -> AlgorithmId {
        match self {
            Algorithm::Md5 => AlgorithmId::Md5,
            Algorithm::Dl128(_) => AlgorithmId::Dl128,
        }
    }

    pub fn hash(&self, message: &[u8]) -> Block128 {
        match self {
            Algorithm::Md5 => Block128(md5(message).value()),
            Algorithm::Dl128(params) => digest(message, params).value(),
        }
    }
}

/// One measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub algorithm: String,
    pub input: String,
    pub digest: String,
    pub metric: String,
    pub value: f64,
}

/// Rows of measurements plus per-(algorithm, metric) averages.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnalysisReport {
    rows: Vec<ReportRow>,
}

impl AnalysisReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rejects non-finite values, and percentages (metrics ending in `_pct`)
    /// outside `[0, 100]`.
    pub fn push(&mut self, row: ReportRow) -> Result<()> {
        let bad_pct = row.metric.ends_with("_pct") && !(0.0..=100.0).contains(&row.value);
        if !row.value.is_finite() || bad_pct {
            return Err(Error::InvalidMetric {
                metric: row.metric,
                value: row.value,
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    /// Mean of every `(algorithm, metric)` group, in first-seen order.
    pub fn aggregate(&self) -> Vec<(String, String, f64)> {
        let mut groups: Vec<(String, String, f64, usize)> = Vec::new();
        for row in &self.rows {
            match groups
                .iter_mut()
                .find(|(a, m, _, _)| *a == row.algorithm && *m == row.metric)
            {
                Some(group) => {
                    group.2 += row.value;
                    group.3 += 1;
                }
                None => groups.push((row.algorithm.clone(), row.metric.clone(), row.value, 1)),
            }
        }
        groups
            .into_iter()
            .map(|(a, m, sum, n)| (a, m, sum / n as f64))
            .collect()
    }

    pub fn average(&self, algorithm: &str, metric: &str) -> Option<f64> {
        self.aggregate()
            .into_iter()
            .find(|(a, m, _)| a == algorithm && m == metric)
            .map(|(_, _, v)| v)
    }
}

/// `100 * distinct / total` over the characters of `text`.
pub fn distinct_char_pct(text: &str) -> Result<f64> {
    let total = text.chars().count();
    if total == 0 {
        return Err(Error::EmptyText);
    }
    let distinct = text.chars().collect::<HashSet<_>>().len();
    Ok(100.0 * distinct as f64 / total as f64)
}

/// How each algorithm's digest is rendered before counting characters. MD5
/// is always hex; the factorial-keyed digest uses `dl128_format`.
pub fn distinctiveness_rendering(
    algorithm: &Algorithm,
    dl128_format: RenderFormat,
) -> RenderFormat {
    match algorithm {
        Algorithm::Md5 => RenderFormat::Hex,
        Algorithm::Dl128(_) => dl128_format,
    }
}

pub fn distinctiveness_table<S: AsRef<str>>(
    strings: &[S],
    algorithms: &[Algorithm],
    dl128_format: RenderFormat,
) -> Result<AnalysisReport> {
    if strings.is_empty() {
        return Err(Error::EmptyInput("string list"));
    }
    if algorithms.is_empty() {
        return Err(Error::EmptyInput("algorithm list"));
    }
    let mut report = AnalysisReport::new();
    for algorithm in algorithms {
        let format = distinctiveness_rendering(algorithm, dl128_format);
        for input in strings {
            let input = input.as_ref();
            let rendered = crate::digest::render(algorithm.hash(input.as_bytes()), format);
            report.push(ReportRow {
                algorithm: algorithm.id().name().to_owned(),
                input: input.to_owned(),
                value: distinct_char_pct(&rendered)?,
                digest: rendered,
                metric: "distinct_pct".to_owned(),
            })?;
        }
    }
    Ok(report)
}

/// Text table in the published layout: one line per input with measured and
/// published values for both algorithms, then the AVERAGE line.
///
/// Published values and deltas are only shown when `strings` is the default
/// five-input set.
pub fn table_i_text(report: &AnalysisReport) -> String {
    let inputs: Vec<&str> = {
        let mut seen = Vec::new();
        for row in report.rows() {
            if !seen.contains(&row.input.as_str()) {
                seen.push(row.input.as_str());
            }
        }
        seen
    };
    let with_reference = inputs == TABLE_I_INPUTS;
    let measured = |alg: &str, input: &str| {
        report
            .rows()
            .iter()
            .find(|r| r.algorithm == alg && r.input == input && r.metric == "distinct_pct")
            .map(|r| r.value)
    };
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), |v| format!("{v:.2}"));
    let delta = |v: Option<f64>, paper: f64| {
        v.map_or_else(|| "-".to_owned(), |v| format!("{:+.2}", v - paper))
    };

    let mut out = String::new();
    if with_reference {
        let _ = writeln!(
            out,
            "{:<20} {:>8} {:>10} {:>8} {:>8} {:>10} {:>8}",
            "Input String", "MD5", "MD5(pub)", "delta", "DL128", "DL128(pub)", "delta"
        );
    } else {
        let _ = writeln!(out, "{:<20} {:>8} {:>8}", "Input String", "MD5", "DL128");
    }
    let labels = inputs.iter().map(|s| Some(*s)).chain(std::iter::once(None));
    for (i, label) in labels.enumerate() {
        let (name, md5_v, dl_v) = match label {
            Some(input) => (input, measured("md5", input), measured("dl128", input)),
            None => (
                "AVERAGE",
                report.average("md5", "distinct_pct"),
                report.average("dl128", "distinct_pct"),
            ),
        };
        if with_reference {
            let _ = writeln!(
                out,
                "{:<20} {:>8} {:>10.2} {:>8} {:>8} {:>10.2} {:>8}",
                name,
                cell(md5_v),
                TABLE_I_MD5[i],
                delta(md5_v, TABLE_I_MD5[i]),
                cell(dl_v),
                TABLE_I_PROPOSED[i],
                delta(dl_v, TABLE_I_PROPOSED[i]),
            );
        } else {
            let _ = writeln!(out, "{:<20} {:>8} {:>8}", name, cell(md5_v), cell(dl_v));
        }
    }
    out
}

/// Ratio of "characters per position" between two renderings:
/// `(alpha_new / len_new) / (alpha_base / len_base)`.
pub fn randomness_ratio(
    alpha_base: u64,
    len_base: u64,
    alpha_new: u64,
    len_new: u64,
) -> Result<f64> {
    for (name, v) in [
        ("base alphabet size", alpha_base),
        ("base length", len_base),
        ("new alphabet size", alpha_new),
        ("new length", len_new),
    ] {
        if v == 0 {
            return Err(Error::NonPositive(name));
        }
    }
    Ok((alpha_new as f64 / len_new as f64) / (alpha_base as f64 / len_base as f64))
}

/// Percentage rendering truncated (not rounded) to two decimals, matching how
/// the published ratio is quoted.
pub fn ratio_percent_text(ratio: f64) -> String {
    let hundredths = (ratio * 10_000.0 + 1e-9).floor() as i64;
    format!("{}.{:02}%", hundredths / 100, hundredths % 100)
}

/// RNG for one trial: a ChaCha8 stream selected by the trial index.
pub fn trial_rng(rng_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(trial);
    rng
}

fn random_message(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    let mut buf = vec![0u8; len];
    rng.fill_bytes(&mut buf);
    buf
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvalancheStats {
    pub trials: u64,
    /// Mean fraction of the 128 digest bits that flipped.
    pub mean: f64,
    /// Population standard deviation of that fraction.
    pub stddev: f64,
}

/// Flip one uniformly chosen input bit per trial and measure how many digest
/// bits change.
pub fn avalanche(
    algorithm: &Algorithm,
    trials: u64,
    input_len: usize,
    rng_seed: u64,
) -> Result<AvalancheStats> {
    if trials == 0 {
        return Err(Error::NonPositive("trials"));
    }
    if input_len == 0 {
        return Err(Error::NonPositive("input length"));
    }
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(rng_seed, trial);
            let mut message = random_message(&mut rng, input_len);
            let before = algorithm.hash(&message);
            let bit = rng.random_range(0..input_len * 8);
            message[bit / 8] ^= 0x80 >> (bit % 8);
            let d = u64::from(before.hamming_distance(algorithm.hash(&message)));
            (d, d * d)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = trials as f64;
    let width = f64::from(Block128::BITS);
    let mean_bits = sum as f64 / n;
    let var_bits = (sum_sq as f64 / n - mean_bits * mean_bits).max(0.0);
    Ok(AvalancheStats {
        trials,
        mean: mean_bits / width,
        stddev: var_bits.sqrt() / width,
    })
}

/// Fraction of trials in which each digest bit (MSB first) is set.
pub fn bit_bias(
    algorithm: &Algorithm,
    trials: u64,
    input_len: usize,
    rng_seed: u64,
) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::NonPositive("trials"));
    }
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; 128],
            |mut acc, trial| {
                let mut rng = trial_rng(rng_seed, trial);
                let d = algorithm.hash(&random_message(&mut rng, input_len));
                for (i, slot) in acc.iter_mut().enumerate() {
                    *slot += u64::from(d.bit(i as u32));
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; 128],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / trials as f64)
        .collect())
}

/// Two distinct messages sharing a digest. `input_a < input_b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CollisionRecord {
    pub input_a: Vec<u8>,
    pub input_b: Vec<u8>,
    pub shared_digest: String,
}

/// Messages of length `1..=max_len` over `alphabet`.
pub fn message_space_size(alphabet_len: usize, max_len: usize) -> u128 {
    let a = alphabet_len as u128;
    let mut total = 0u128;
    let mut layer = 1u128;
    for _ in 0..max_len {
        layer = layer.saturating_mul(a);
        total = total.saturating_add(layer);
    }
    total
}

// Index -> message in shortlex order over the sorted alphabet.
fn nth_message(alphabet: &[u8], mut index: u128) -> Vec<u8> {
    let a = alphabet.len() as u128;
    let mut len = 1;
    let mut layer = a;
    while index >= layer {
        index -= layer;
        layer *= a;
        len += 1;
    }
    let mut out = vec![0u8; len];
    for slot in out.iter_mut().rev() {
        *slot = alphabet[(index % a) as usize];
        index /= a;
    }
    out
}

/// Hashes every message of length `1..=max_len` over `alphabet` and returns
/// every colliding unordered pair, sorted lexicographically.
pub fn collision_scan(
    alphabet: &[u8],
    max_len: usize,
    algorithm: &Algorithm,
) -> Result<Vec<CollisionRecord>> {
    let mut symbols = alphabet.to_vec();
    symbols.sort_unstable();
    symbols.dedup();
    let total = message_space_size(symbols.len(), max_len);
    if total > COLLISION_SCAN_LIMIT {
        return Err(Error::EnumerationTooLarge {
            requested: total,
            limit: COLLISION_SCAN_LIMIT,
        });
    }

    let mut hashed: Vec<(Block128, u64)> = (0..total as u64)
        .into_par_iter()
        .map(|i| (algorithm.hash(&nth_message(&symbols, u128::from(i))), i))
        .collect();
    hashed.par_sort_unstable();

    let mut records = Vec::new();
    for group in hashed.chunk_by(|a, b| a.0 == b.0).filter(|g| g.len() > 1) {
        let mut members: Vec<Vec<u8>> = group
            .iter()
            .map(|&(_, i)| nth_message(&symbols, u128::from(i)))
            .collect();
        members.sort();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                records.push(CollisionRecord {
                    input_a: a.clone(),
                    input_b: b.clone(),
                    shared_digest: group[0].0.to_hex(),
                });
            }
        }
    }
    records.sort();
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_pct_basics() {
        assert_eq!(distinct_char_pct("aaaa").unwrap(), 25.0);
        assert_eq!(distinct_char_pct("abcd").unwrap(), 100.0);
        assert_eq!(distinct_char_pct("z").unwrap(), 100.0);
        assert_eq!(distinct_char_pct("qqqqq").unwrap(), 20.0);
        assert_eq!(distinct_char_pct(""), Err(Error::EmptyText));
    }

    #[test]
    fn distinct_pct_counts_characters_not_bytes() {
        assert_eq!(distinct_char_pct("\u{ff}\u{ff}").unwrap(), 50.0);
    }

    #[test]
    fn ratio_examples() {
        assert!((randomness_ratio(36, 32, 256, 64).unwrap() - 3.5556).abs() < 1e-4);
        assert_eq!(randomness_ratio(36, 32, 36, 32).unwrap(), 1.0);
        assert_eq!(randomness_ratio(1, 1, 2, 1).unwrap(), 2.0);
        assert!(randomness_ratio(36, 0, 256, 64).is_err());
        assert!(randomness_ratio(0, 32, 256, 64).is_err());
    }

    #[test]
    fn ratio_percent_truncates() {
        assert_eq!(ratio_percent_text(256.0 / 64.0 / (36.0 / 32.0)), "355.55%");
        assert_eq!(ratio_percent_text(1.0), "100.00%");
        assert_eq!(ratio_percent_text(2.0), "200.00%");
    }

    #[test]
    fn report_rejects_bad_values() {
        let row = |metric: &str, value| ReportRow {
            algorithm: "md5".into(),
            input: "x".into(),
            digest: String::new(),
            metric: metric.into(),
            value,
        };
        let mut r = AnalysisReport::new();
        assert!(r.push(row("distinct_pct", 101.0)).is_err());
        assert!(r.push(row("distinct_pct", -0.5)).is_err());
        assert!(r.push(row("ratio", f64::NAN)).is_err());
        assert!(r.push(row("ratio", 3.5)).is_ok());
        assert_eq!(r.rows().len(), 1);
    }

    #[test]
    fn single_row_table_average() {
        let r = distinctiveness_table(&["hello"], &[Algorithm::Md5], RenderFormat::Paper).unwrap();
        assert_eq!(r.rows().len(), 1);
        assert_eq!(r.average("md5", "distinct_pct"), Some(r.rows()[0].value));
    }

    #[test]
    fn table_rejects_empty_lists() {
        let none: [&str; 0] = [];
        assert!(distinctiveness_table(&none, &[Algorithm::Md5], RenderFormat::Hex).is_err());
        assert!(distinctiveness_table(&["a"], &[], RenderFormat::Hex).is_err());
    }

    #[test]
    fn shortlex_enumeration() {
        let msgs: Vec<_> = (0..6).map(|i| nth_message(b"ab", i)).collect();
        assert_eq!(
            msgs,
            vec![
                b"a".to_vec(),
                b"b".to_vec(),
                b"aa".to_vec(),
                b"ab".to_vec(),
                b"ba".to_vec(),
                b"bb".to_vec()
            ]
        );
        assert_eq!(message_space_size(26, 2), 702);
        assert_eq!(message_space_size(0, 3), 0);
    }

    #[test]
    fn collision_guard() {
        let err = collision_scan(b"abcdefghijklmnopqrstuvwxyz", 6, &Algorithm::Md5).unwrap_err();
        assert!(matches!(err, Error::EnumerationTooLarge { .. }));
    }

    #[test]
    fn single_message_space_has_no_collisions() {
        assert!(collision_scan(b"x", 1, &Algorithm::Md5).unwrap().is_empty());
        let dl = Algorithm::Dl128(AlgorithmParams::default());
        assert!(collision_scan(b"x", 1, &dl).unwrap().is_empty());
    }

    #[test]
    fn bit_bias_single_trial_is_binary() {
        let bias = bit_bias(&Algorithm::Md5, 1, 16, 3).unwrap();
        assert_eq!(bias.len(), 128);
        assert!(bias.iter().all(|&f| f == 0.0 || f == 1.0));
    }

    #[test]
    fn trial_parameters_validated() {
        assert!(avalanche(&Algorithm::Md5, 0, 8, 1).is_err());
        assert!(avalanche(&Algorithm::Md5, 8, 0, 1).is_err());
        assert!(bit_bias(&Algorithm::Md5, 0, 8, 1).is_err());
    }

    #[test]
    fn algorithm_ids_parse() {
        assert_eq!("md5".parse::<AlgorithmId>().unwrap(), AlgorithmId::Md5);
        assert_eq!("dl128".parse::<AlgorithmId>().unwrap(), AlgorithmId::Dl128);
        assert!("sha1".parse::<AlgorithmId>().is_err());
    }
}
