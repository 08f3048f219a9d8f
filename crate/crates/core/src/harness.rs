//! Channel simulation and error accounting for the full frame chain.
//!
//! Each frame draws its payload and its channel errors from a ChaCha8
//! stream keyed by `(seed, frame index)`, so a run is reproducible and its
//! result does not depend on how frames are spread across threads.

use std::fmt::Write as _;
use std::ops::{Add, AddAssign};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use thiserror::Error;

use crate::code::{Codeword, SystematicEncoder, N};
use crate::decoder::{decode, DecodeStatus};
use crate::framing::{deinterleave, DataBits, Frame, Framer, FRAME_BITS};
use crate::gf32::Gf32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("ber must be within [0, 1], got {0}")]
    Ber(f64),
    #[error("burst rate must be finite and non-negative, got {0}")]
    BurstRate(f64),
    #[error("burst length {0} exceeds the {FRAME_BITS}-bit frame")]
    BurstLen(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Independent per-bit flip probability.
    pub ber: f64,
    /// Bits flipped by each burst.
    pub burst_len: usize,
    /// Mean number of bursts per frame (Poisson).
    pub burst_rate: f64,
    pub seed: u64,
    pub frames: u64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig { ber: 0.0, burst_len: 0, burst_rate: 0.0, seed: 0, frames: 0 }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.ber) {
            return Err(ConfigError::Ber(self.ber));
        }
        if !self.burst_rate.is_finite() || self.burst_rate < 0.0 {
            return Err(ConfigError::BurstRate(self.burst_rate));
        }
        if self.burst_len > FRAME_BITS {
            return Err(ConfigError::BurstLen(self.burst_len));
        }
        Ok(())
    }
}

/// The RNG stream for one frame of a run.
pub fn frame_rng(seed: u64, frame_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame_index);
    rng
}

/// Flips each bit with probability `ber`, then applies a Poisson number of
/// bursts at uniform offsets. The header is exposed like the payload.
pub fn apply_channel(frame: &Frame, cfg: &ChannelConfig, rng: &mut impl Rng) -> Frame {
    let mut out = *frame;
    if cfg.ber > 0.0 {
        for i in 0..FRAME_BITS {
            if rng.random_bool(cfg.ber) {
                out.flip(i);
            }
        }
    }
    if cfg.burst_rate > 0.0 && cfg.burst_len > 0 {
        let bursts = Poisson::new(cfg.burst_rate).expect("validated rate").sample(rng) as u64;
        for _ in 0..bursts {
            let start = rng.random_range(0..=FRAME_BITS - cfg.burst_len);
            for i in start..start + cfg.burst_len {
                out.flip(i);
            }
        }
    }
    out
}

/// Error counters for a run. Frame-level "pre" means at least one of the
/// 310 payload bits arrived flipped; "post" means at least one of the 270
/// delivered information bits is wrong. Codeword-level counters and the
/// decoder outcome counters are per codeword (two per frame).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialStats {
    pub frames_total: u64,
    pub frames_err_pre: u64,
    pub frames_err_post: u64,
    /// Pre-error frames delivered with correct information.
    pub frames_recovered: u64,
    /// Pre-error frames still wrong after decoding.
    pub frames_unrecovered: u64,
    pub header_errors: u64,
    pub codewords_total: u64,
    pub codewords_err_pre: u64,
    pub codewords_err_post: u64,
    /// Codewords reported ok or corrected whose information is wrong.
    pub miscorrections: u64,
    pub detected_uncorrectable: u64,
    /// Flipped payload bits before decoding.
    pub bit_err_pre: u64,
    /// Wrong information bits after decoding.
    pub bit_err_post: u64,
}

impl TrialStats {
    pub const FIELDS: [&'static str; 13] = [
        "frames_total",
        "frames_err_pre",
        "frames_err_post",
        "frames_recovered",
        "frames_unrecovered",
        "header_errors",
        "codewords_total",
        "codewords_err_pre",
        "codewords_err_post",
        "miscorrections",
        "detected_uncorrectable",
        "bit_err_pre",
        "bit_err_post",
    ];

    pub fn values(&self) -> [u64; 13] {
        [
            self.frames_total,
            self.frames_err_pre,
            self.frames_err_post,
            self.frames_recovered,
            self.frames_unrecovered,
            self.header_errors,
            self.codewords_total,
            self.codewords_err_pre,
            self.codewords_err_post,
            self.miscorrections,
            self.detected_uncorrectable,
            self.bit_err_pre,
            self.bit_err_post,
        ]
    }

    fn from_values(v: [u64; 13]) -> TrialStats {
        let [frames_total, frames_err_pre, frames_err_post, frames_recovered, frames_unrecovered, header_errors, codewords_total, codewords_err_pre, codewords_err_post, miscorrections, detected_uncorrectable, bit_err_pre, bit_err_post] =
            v;
        TrialStats {
            frames_total,
            frames_err_pre,
            frames_err_post,
            frames_recovered,
            frames_unrecovered,
            header_errors,
            codewords_total,
            codewords_err_pre,
            codewords_err_post,
            miscorrections,
            detected_uncorrectable,
            bit_err_pre,
            bit_err_post,
        }
    }

    /// The accounting identities every run must satisfy.
    pub fn is_consistent(&self) -> bool {
        self.frames_err_pre == self.frames_recovered + self.frames_unrecovered
            && self.frames_unrecovered == self.frames_err_post
            && self.frames_err_pre <= self.frames_total
            && self.header_errors <= self.frames_total
            && self.codewords_total == 2 * self.frames_total
            && self.codewords_err_pre <= self.codewords_total
            && self.codewords_err_post <= self.codewords_err_pre
            && self.miscorrections + self.detected_uncorrectable <= self.codewords_err_pre
    }
}

impl Add for TrialStats {
    type Output = TrialStats;
    fn add(self, rhs: TrialStats) -> TrialStats {
        let (a, b) = (self.values(), rhs.values());
        TrialStats::from_values(std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl AddAssign for TrialStats {
    fn add_assign(&mut self, rhs: TrialStats) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for TrialStats {
    fn sum<I: Iterator<Item = TrialStats>>(iter: I) -> TrialStats {
        iter.fold(TrialStats::default(), Add::add)
    }
}

/// Transmits one random frame through the channel and scores it.
pub fn run_frame<E: SystematicEncoder>(framer: &Framer<E>, cfg: &ChannelConfig, index: u64) -> TrialStats {
    let mut rng = frame_rng(cfg.seed, index);
    let data = DataBits::from_words(rng.random());
    let sent = framer.build_frame(&data);
    let received = apply_channel(&sent, cfg, &mut rng);
    let out = framer.unframe(&received);

    let sent_words = <[Codeword; 2]>::from(deinterleave(&sent.payload()));
    let recv_words = <[Codeword; 2]>::from(deinterleave(&received.payload()));
    let bit_err_pre = (sent.payload() ^ received.payload()).count_ones() as u64;
    let bit_err_post = (data ^ out.data).count_ones() as u64;

    let mut s = TrialStats {
        frames_total: 1,
        codewords_total: 2,
        header_errors: (sent.header() != received.header()) as u64,
        bit_err_pre,
        bit_err_post,
        ..Default::default()
    };
    if bit_err_pre > 0 {
        s.frames_err_pre = 1;
        if bit_err_post > 0 {
            s.frames_unrecovered = 1;
        } else {
            s.frames_recovered = 1;
        }
    }
    s.frames_err_post = (bit_err_post > 0) as u64;
    for c in 0..2 {
        let info_wrong = out.decoded[c].message != sent_words[c].message();
        s.codewords_err_pre += (recv_words[c] != sent_words[c]) as u64;
        s.codewords_err_post += info_wrong as u64;
        match out.decoded[c].status {
            DecodeStatus::Uncorrectable => s.detected_uncorrectable += 1,
            _ if info_wrong => s.miscorrections += 1,
            _ => {}
        }
    }
    s
}

/// Runs `cfg.frames` frames. `jobs == 0` uses rayon's default pool size.
pub fn run_trials<E: SystematicEncoder + Sync>(framer: &Framer<E>, cfg: &ChannelConfig, jobs: usize) -> TrialStats {
    let work = || (0..cfg.frames).into_par_iter().map(|i| run_frame(framer, cfg, i)).sum();
    if jobs == 1 {
        return (0..cfg.frames).map(|i| run_frame(framer, cfg, i)).sum();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// One [`TrialStats`] per config, in order.
pub fn run_sweep(cfgs: &[ChannelConfig], jobs: usize) -> Result<Vec<TrialStats>, ConfigError> {
    let framer = Framer::default();
    cfgs.iter()
        .map(|cfg| {
            cfg.validate()?;
            Ok(run_trials(&framer, cfg, jobs))
        })
        .collect()
}

const CONFIG_FIELDS: [&str; 5] = ["ber", "burst_len", "burst_rate", "seed", "frames"];

fn config_values(cfg: &ChannelConfig) -> [String; 5] {
    [
        cfg.ber.to_string(),
        cfg.burst_len.to_string(),
        cfg.burst_rate.to_string(),
        cfg.seed.to_string(),
        cfg.frames.to_string(),
    ]
}

/// Line-delimited `key=value` records, or CSV with a header row.
pub fn emit_stats(records: &[(ChannelConfig, TrialStats)], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        let header: Vec<&str> = CONFIG_FIELDS.iter().chain(TrialStats::FIELDS.iter()).copied().collect();
        out.push_str(&header.join(","));
        out.push('\n');
    }
    for (cfg, stats) in records {
        let values = config_values(cfg).into_iter().chain(stats.values().map(|v| v.to_string()));
        let keys = CONFIG_FIELDS.iter().chain(TrialStats::FIELDS.iter());
        let line: Vec<String> = if csv {
            values.collect()
        } else {
            keys.zip(values).map(|(k, v)| format!("{k}={v}")).collect()
        };
        let _ = writeln!(out, "{}", line.join(if csv { "," } else { " " }));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad stats record: {0}")]
pub struct RecordParseError(pub String);

/// Parses one `key=value` line produced by [`emit_stats`].
pub fn parse_stats_record(line: &str) -> Result<(ChannelConfig, TrialStats), RecordParseError> {
    let pairs: Vec<(&str, &str)> = line
        .split_whitespace()
        .map(|kv| kv.split_once('=').ok_or_else(|| RecordParseError(format!("`{kv}` is not key=value"))))
        .collect::<Result<_, _>>()?;
    let get = |key: &str| {
        pairs
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| RecordParseError(format!("missing field `{key}`")))
    };
    let num = |key: &str| -> Result<u64, RecordParseError> {
        get(key)?.parse().map_err(|_| RecordParseError(format!("field `{key}` is not an integer")))
    };
    let float = |key: &str| -> Result<f64, RecordParseError> {
        get(key)?.parse().map_err(|_| RecordParseError(format!("field `{key}` is not a number")))
    };
    let cfg = ChannelConfig {
        ber: float("ber")?,
        burst_len: num("burst_len")? as usize,
        burst_rate: float("burst_rate")?,
        seed: num("seed")?,
        frames: num("frames")?,
    };
    let mut values = [0u64; 13];
    for (v, key) in values.iter_mut().zip(TrialStats::FIELDS) {
        *v = num(key)?;
    }
    Ok((cfg, TrialStats::from_values(values)))
}

/// Outcome counts for codewords hit by exactly `weight` symbol errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ForcedStats {
    pub trials: u64,
    pub corrected_right: u64,
    /// Reported ok or corrected, but decoded to a different codeword.
    pub miscorrected: u64,
    pub detected: u64,
}

/// Decodes random codewords with `weight` distinct symbols corrupted by
/// random nonzero magnitudes.
pub fn forced_symbol_errors(weight: usize, trials: u64, seed: u64) -> ForcedStats {
    assert!(weight <= N);
    let encoder = crate::parallel::ParallelEncoder::default();
    let mut stats = ForcedStats { trials, ..Default::default() };
    for t in 0..trials {
        let mut rng = frame_rng(seed, t);
        let msg = crate::code::Message(std::array::from_fn(|_| Gf32::from_low_bits(rng.random())));
        let sent = encoder.encode(&msg);
        let mut received = sent;
        for pos in rand::seq::index::sample(&mut rng, N, weight) {
            received.0[pos] += Gf32::from_low_bits(rng.random_range(1..32));
        }
        let res = decode(&received);
        match res.status {
            DecodeStatus::Uncorrectable => stats.detected += 1,
            _ if res.codeword == sent => stats.corrected_right += 1,
            _ => stats.miscorrected += 1,
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(ber: f64, frames: u64) -> ChannelConfig {
        ChannelConfig { ber, frames, seed: 7, ..Default::default() }
    }

    #[test]
    fn noiseless_channel_is_identity() {
        let framer = Framer::default();
        let frame = framer.build_frame(&DataBits::ones());
        let mut rng = frame_rng(1, 0);
        assert_eq!(apply_channel(&frame, &cfg(0.0, 1), &mut rng), frame);
        let stats = run_trials(&framer, &cfg(0.0, 200), 1);
        assert_eq!(stats.frames_err_pre, 0);
        assert_eq!(stats.frames_err_post, 0);
        assert_eq!(stats.frames_total, 200);
        assert!(stats.is_consistent());
    }

    #[test]
    fn ber_one_flips_everything() {
        let frame = Framer::default().build_frame(&DataBits::zero());
        let out = apply_channel(&frame, &cfg(1.0, 1), &mut frame_rng(1, 0));
        assert_eq!((frame.0 ^ out.0).count_ones(), FRAME_BITS);
    }

    #[test]
    fn replay_is_deterministic() {
        let frame = Framer::default().build_frame(&DataBits::zero());
        let c = ChannelConfig { ber: 0.01, burst_len: 12, burst_rate: 0.5, seed: 99, frames: 1 };
        let a = apply_channel(&frame, &c, &mut frame_rng(99, 3));
        let b = apply_channel(&frame, &c, &mut frame_rng(99, 3));
        assert_eq!(a, b);
        let framer = Framer::default();
        let c = ChannelConfig { frames: 500, ..c };
        assert_eq!(run_trials(&framer, &c, 1), run_trials(&framer, &c, 4));
    }

    #[test]
    fn bursts_flip_consecutive_bits() {
        let frame = Frame::default();
        let c = ChannelConfig { burst_len: 9, burst_rate: 1.0, seed: 5, frames: 1, ..Default::default() };
        let mut seen_single = false;
        for i in 0..200 {
            let diff = apply_channel(&frame, &c, &mut frame_rng(5, i)).0;
            let ones: Vec<_> = diff.ones_iter().collect();
            if ones.len() == 9 {
                seen_single = true;
                assert_eq!(ones[8] - ones[0], 8);
            }
        }
        assert!(seen_single);
    }

    #[test]
    fn stats_accounting() {
        let framer = Framer::default();
        let c = ChannelConfig { ber: 0.004, seed: 3, frames: 2000, ..Default::default() };
        let s = run_trials(&framer, &c, 0);
        assert!(s.is_consistent(), "{s:?}");
        assert!(s.frames_err_pre > 0);
        assert!(s.frames_recovered > 0);
        assert!(s.frames_err_post < s.frames_err_pre);
    }

    #[test]
    fn record_format() {
        let c = ChannelConfig { ber: 0.001, burst_len: 4, burst_rate: 0.25, seed: 11, frames: 50 };
        let s = run_trials(&Framer::default(), &c, 2);
        let text = emit_stats(&[(c, s), (c, s)], false);
        assert_eq!(text.lines().count(), 2);
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("ber=0.001 burst_len=4 burst_rate=0.25 seed=11 frames=50 frames_total=50 "));
        assert_eq!(parse_stats_record(first), Ok((c, s)));
        let csv = emit_stats(&[(c, s)], true);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), 18);
        assert!(lines[1].starts_with("0.001,4,0.25,11,50,50,"));
        assert!(parse_stats_record("ber=x").is_err());
    }

    #[test]
    fn config_validation() {
        assert_eq!(cfg(1.5, 1).validate(), Err(ConfigError::Ber(1.5)));
        let c = ChannelConfig { burst_rate: -1.0, ..Default::default() };
        assert_eq!(c.validate(), Err(ConfigError::BurstRate(-1.0)));
        let c = ChannelConfig { burst_len: 400, ..Default::default() };
        assert_eq!(c.validate(), Err(ConfigError::BurstLen(400)));
        assert!(run_sweep(&[cfg(2.0, 1)], 1).is_err());
    }

    #[test]
    fn forced_weights() {
        for w in 1..=2 {
            let s = forced_symbol_errors(w, 300, 4);
            assert_eq!(s.corrected_right, 300);
        }
        let s = forced_symbol_errors(3, 2000, 4);
        assert_eq!(s.corrected_right, 0);
        assert!(s.miscorrected > 0 && s.detected > 0);
    }
}
