//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p rs3127-cli --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rs3127_core::code::{encode_reference, Message, INFO_BITS, N};
use rs3127_core::decoder::{decode, DecodeStatus};
use rs3127_core::framing::{burst_hits, DataBits, Framer, FRAME_BITS, FRAME_BYTES, HEADER_BITS, PAYLOAD_BITS};
use rs3127_core::gf32::Gf32;
use rs3127_core::harness::{forced_symbol_errors, run_trials, ChannelConfig};
use rs3127_core::parallel::{encode_parallel, encode_via_network, message_to_bits, parity_to_bits, ParityBits};
use rs3127_core::serial::{lfsr_run, CYCLES_PER_CODEWORD};
use rs3127_core::unroll::{emit_netlist, parse_netlist, ParityMatrix, XorNetwork};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_message(rng: &mut impl Rng) -> Message {
    Message(std::array::from_fn(|_| Gf32::from_low_bits(rng.random())))
}

fn test_messages(count: usize, seed: u64) -> Vec<Message> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..INFO_BITS).map(Message::unit_bit).chain((0..count).map(|_| random_message(&mut rng))).collect()
}

fn c1_triple_equivalence() -> Outcome {
    let start = Instant::now();
    let matrix = ParityMatrix::derive();
    // the network under test goes through the emitted text, as a tool user would
    let net = parse_netlist(&emit_netlist(&XorNetwork::build(&matrix))).map_err(|e| e.to_string())?;
    let msgs = test_messages(100_000, 1);
    let mismatches = msgs
        .par_iter()
        .filter(|m| {
            let reference = encode_reference(m);
            let info = message_to_bits(m);
            lfsr_run(m).codeword != reference
                || encode_parallel(&info, &matrix) != reference
                || encode_via_network(&info, &net) != reference
        })
        .count();
    let elapsed = start.elapsed();
    check(mismatches == 0, format!("{mismatches} of {} messages disagree", msgs.len()))?;
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{} messages (135 basis + 100000 random), 4 encoders agree, {elapsed:.2?}", msgs.len()))
}

fn c2_cycle_count() -> Outcome {
    let msgs = test_messages(10_000, 2);
    let bad = msgs.iter().filter(|m| lfsr_run(m).cycles != 31).count();
    check(CYCLES_PER_CODEWORD == 31 && bad == 0, format!("{bad} runs not 31 cycles"))?;
    Ok(format!("{} encodes, each exactly 31 cycles (27 shift-in + 4 shift-out)", msgs.len()))
}

fn c3_matrix_vs_probes() -> Outcome {
    let m = ParityMatrix::derive();
    let mut wrong = 0;
    for c in 0..INFO_BITS {
        let probe: ParityBits = parity_to_bits(&encode_reference(&Message::unit_bit(c)).parity());
        for r in 0..20 {
            wrong += (m.entry(r, c) != probe.get(r)) as usize;
        }
    }
    check(wrong == 0, format!("{wrong} of 2700 entries differ"))?;
    check(m.rank() == 20, format!("rank {}", m.rank()))?;
    Ok("all 20x135 entries match unit-bit probes; rank 20".into())
}

fn c4_tree_law() -> Outcome {
    let m = ParityMatrix::derive();
    let net = XorNetwork::build(&m);
    for k in 0..20 {
        let fan_in = m.row(k).fan_in();
        // smallest d with 3^d >= fan_in
        let expect = (0..).find(|&d| 3usize.pow(d) >= fan_in).unwrap() as usize;
        check(net.depths()[k] == expect, format!("p{k}: fan-in {fan_in}, depth {}", net.depths()[k]))?;
    }
    let max_fan_in = m.max_fan_in();
    if max_fan_in <= 81 {
        check(net.max_depth() <= 4, format!("max depth {}", net.max_depth()))?;
    }
    Ok(format!(
        "depth = ceil(log3 fan-in) for all 20 outputs; max fan-in {max_fan_in} (reference design: 70), max depth {}",
        net.max_depth()
    ))
}

fn c5_correction_exhaustive() -> Outcome {
    let start = Instant::now();
    let c = encode_reference(&random_message(&mut ChaCha8Rng::seed_from_u64(5)));
    let mags: Vec<Gf32> = Gf32::nonzero().collect();
    let mut singles = 0;
    for j in 0..N {
        for &e in &mags {
            let mut r = c;
            r.0[j] += e;
            let res = decode(&r);
            check(res.codeword == c && res.status == DecodeStatus::Corrected, format!("single j={j} e={e}"))?;
            singles += 1;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..N).flat_map(|a| (a + 1..N).map(move |b| (a, b))).collect();
    let failures: usize = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut bad = 0;
            for &ea in &mags {
                for &eb in &mags {
                    let mut r = c;
                    r.0[a] += ea;
                    r.0[b] += eb;
                    let res = decode(&r);
                    bad += (res.codeword != c || res.corrected_symbols != 2) as usize;
                }
            }
            bad
        })
        .sum();
    let doubles = pairs.len() * mags.len() * mags.len();
    let elapsed = start.elapsed();
    check(failures == 0, format!("{failures} double-error patterns not corrected"))?;
    check(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("{singles} single + {doubles} double patterns ({} pairs) corrected, {elapsed:.2?}", pairs.len()))
}

fn c6_bursts() -> Outcome {
    let framer = Framer::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let payloads: Vec<DataBits> = (0..3).map(|_| DataBits::from_words(rng.random())).collect();
    let recovered = |data: &DataBits, offset: usize, len: usize| {
        let mut f = framer.build_frame(data);
        for i in 0..len {
            f.flip(HEADER_BITS + offset + i);
        }
        framer.unframe(&f).data == *data
    };
    let mut short = 0;
    for data in &payloads {
        for len in 1..=16 {
            for offset in 0..=PAYLOAD_BITS - len {
                check(recovered(data, offset, len), format!("len {len} at offset {offset} not recovered"))?;
                short += 1;
            }
        }
    }
    let mut aligned = 0;
    for data in &payloads {
        for offset in (0..=PAYLOAD_BITS - 20).step_by(5) {
            check(recovered(data, offset, 20), format!("aligned 20-bit burst at {offset} not recovered"))?;
            aligned += 1;
        }
    }
    let mut report = Vec::new();
    for len in 17..=20 {
        let (mut ok, mut total) = (0, 0);
        for data in &payloads {
            for offset in (0..=PAYLOAD_BITS - len).filter(|o| !(len == 20 && o % 5 == 0)) {
                total += 1;
                ok += recovered(data, offset, len) as usize;
            }
        }
        let geometric = (0..=PAYLOAD_BITS - len)
            .filter(|o| !(len == 20 && o % 5 == 0))
            .filter(|&o| burst_hits(o, len).iter().all(|&h| h <= 2))
            .count();
        report.push(format!(
            "L={len}: {:.1}% ({ok}/{total}; {geometric}/{} offsets hit <=2 symbols per codeword)",
            100.0 * ok as f64 / total as f64,
            total / payloads.len()
        ));
    }
    Ok(format!(
        "{short} bursts of 1..16 bits and {aligned} aligned 20-bit bursts recovered; misaligned recovery {}",
        report.join(", ")
    ))
}

fn c7_frame_format() -> Outcome {
    let framer = Framer::default();
    let bad = (0..100_000u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            rng.set_stream(i);
            let data = DataBits::from_words(rng.random());
            let frame = framer.build_frame(&data);
            let bytes = frame.to_bytes();
            let out = framer.unframe(&frame);
            bytes.len() != 40 || frame.0.len() != 320 || out.data != data || !out.all_ok()
        })
        .count();
    check(FRAME_BITS == 320 && FRAME_BYTES == 40, "frame constants")?;
    check(bad == 0, format!("{bad} frames failed"))?;
    Ok("100000 random payloads: 320-bit / 40-byte frames, unframe(build_frame(x)) = x".into())
}

/// P(at least `k` of `n` trials succeed), probability `p` each.
fn binomial_tail(n: u64, k: u64, p: f64) -> f64 {
    let mut total = 0.0;
    let mut coeff = 1.0f64;
    for i in 0..=n {
        if i > 0 {
            coeff *= (n - i + 1) as f64 / i as f64;
        }
        if i >= k {
            total += coeff * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32);
        }
    }
    total
}

fn c8_correction_gain() -> Outcome {
    const BER: f64 = 1e-3;
    const FRAMES: u64 = 500_000;
    const Z95: f64 = 1.96;
    let p_symbol = 1.0 - (1.0 - BER).powi(5);
    let pre_pred = 1.0 - (1.0 - BER).powi(155);
    let post_bound = binomial_tail(31, 3, p_symbol);
    // frozen from an independent calculation before the build
    check((pre_pred - 0.143_651_236_398_683_5).abs() < 1e-12, "pre-correction model drifted")?;
    check((post_bound - 5.030_304_973_078_83e-4).abs() < 1e-12, "post-correction model drifted")?;
    let ratio_pred = post_bound / pre_pred;

    let cfg = ChannelConfig { ber: BER, burst_len: 0, burst_rate: 0.0, seed: 8, frames: FRAMES };
    let s = run_trials(&Framer::default(), &cfg, 0);
    let n = s.codewords_total as f64;
    let pre = s.codewords_err_pre as f64 / n;
    let post = s.codewords_err_post as f64 / n;
    let pre_half = Z95 * (pre_pred * (1.0 - pre_pred) / n).sqrt();
    let post_half = Z95 * (post_bound * (1.0 - post_bound) / n).sqrt();
    let ratio_upper = (post + post_half) / (pre - pre_half);

    check(s.codewords_total >= 1_000_000, "fewer than 10^6 codewords")?;
    check((pre - pre_pred).abs() <= pre_half, format!("pre rate {pre:.5} outside {pre_pred:.5} ± {pre_half:.5}"))?;
    check(post <= post_bound + post_half, format!("post rate {post:.3e} above binomial bound {post_bound:.3e}"))?;
    check(ratio_upper <= 1.0 / 20.0, format!("ratio upper bound {ratio_upper:.4} > 0.05"))?;
    Ok(format!(
        "{} codewords at BER 1e-3: pre {pre:.5} (model {pre_pred:.5}), post {post:.3e} (bound {post_bound:.3e}), \
         ratio {:.4} (model {ratio_pred:.4}, 95% upper {ratio_upper:.4} <= 0.05)",
        s.codewords_total,
        post / pre
    ))
}

fn c9_miscorrection() -> Outcome {
    let s = forced_symbol_errors(3, 10_000, 9);
    check(s.miscorrected >= 1, "no miscorrection observed")?;
    Ok(format!(
        "weight-3 errors over 10000 trials: {} miscorrected (reported corrected, wrong payload), {} detected",
        s.miscorrected, s.detected
    ))
}

fn c10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_rs3127");
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        check(out.status.success(), format!("{args:?} exited {}", out.status))?;
        Ok(out.stdout)
    };
    let sim = ["simulate", "--ber", "0.002", "--burst-len", "12", "--burst-rate", "0.3", "--frames", "20000", "--seed", "42"];
    let sweep = ["sweep", "--ber-list", "0.0005,0.002,0.008", "--frames", "5000", "--seed", "7", "--csv"];
    for base in [&sim[..], &sweep[..]] {
        let mut outputs = Vec::new();
        for jobs in ["1", "1", "4", "0"] {
            let mut args = base.to_vec();
            args.extend(["--jobs", jobs]);
            outputs.push(run(&args)?);
        }
        check(outputs.windows(2).all(|w| w[0] == w[1]), format!("{} output differs between runs", base[0]))?;
        check(!outputs[0].is_empty(), "empty output")?;
    }
    Ok("simulate and sweep byte-identical across replays and --jobs 1/4/0".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("C1 encoder triple equivalence", c1_triple_equivalence),
        ("C2 serial cycle count", c2_cycle_count),
        ("C3 parity matrix vs basis probes", c3_matrix_vs_probes),
        ("C4 XOR3 tree depth law", c4_tree_law),
        ("C5 exhaustive 1- and 2-symbol correction", c5_correction_exhaustive),
        ("C6 burst geometry", c6_bursts),
        ("C7 frame format and round trip", c7_frame_format),
        ("C8 correction gain at BER 1e-3", c8_correction_gain),
        ("C9 miscorrection exists", c9_miscorrection),
        ("C10 simulate/sweep determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
