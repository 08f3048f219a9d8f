//! `rs3127` command-line tool.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data or format
//! errors (including a netlist that fails the equivalence check).

mod payload;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rs3127_core::code::PARITY_BITS;
use rs3127_core::framing::{Frame, Framer, FRAME_BYTES};
use rs3127_core::harness::{emit_stats, run_sweep, ChannelConfig};
use rs3127_core::parallel::InfoBits;
use rs3127_core::unroll::{emit_netlist, parse_netlist, ParityMatrix, XorNetwork};
use rs3127_core::Encoder;

/// Fan-in of the longest XOR chain reported for the original hardware.
const REFERENCE_MAX_FAN_IN: usize = 70;

#[derive(Debug, Parser)]
#[command(name = "rs3127", version, about = "RS(31,27) codec, parallel-encoder generator and channel simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive the 20x135 parity matrix and write it.
    GenMatrix {
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build the XOR3 network and write its netlist.
    EmitNetlist {
        /// Matrix file to use instead of deriving one.
        #[arg(short, long)]
        matrix: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a netlist against the parity matrix on basis and random inputs.
    CheckNetlist {
        #[arg(short, long)]
        netlist: PathBuf,
        #[arg(short, long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Encode a byte stream into 40-byte frames.
    Encode {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value = "parallel", value_parser = ["ref", "lfsr", "parallel"])]
        encoder: String,
        /// 10-bit sync header.
        #[arg(long, value_parser = parse_sync)]
        sync: Option<u16>,
    },
    /// Decode 40-byte frames back into the original byte stream.
    Decode {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Per-frame status records.
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, value_parser = parse_sync)]
        sync: Option<u16>,
    },
    /// Run frames through a simulated channel and print error statistics.
    Simulate {
        #[arg(long)]
        ber: f64,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Like `simulate`, one record per BER value.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        ber_list: Vec<f64>,
        #[command(flatten)]
        sim: SimArgs,
    },
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, default_value_t = 0)]
    burst_len: usize,
    #[arg(long, default_value_t = 0.0)]
    burst_rate: f64,
    #[arg(long)]
    frames: u64,
    #[arg(long)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    csv: bool,
}

fn parse_sync(s: &str) -> Result<u16, String> {
    let v = match s.strip_prefix("0b") {
        Some(bin) => u16::from_str_radix(bin, 2),
        None => match s.strip_prefix("0x") {
            Some(hex) => u16::from_str_radix(hex, 16),
            None => s.parse(),
        },
    }
    .map_err(|e| e.to_string())?;
    if v >= 1 << 10 {
        return Err(format!("{s} does not fit in 10 bits"));
    }
    Ok(v)
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    if path == Path::new("-") {
        io::stdout().write_all(bytes).context("writing stdout")
    } else {
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
    }
}

fn load_matrix(path: Option<&Path>) -> Result<ParityMatrix> {
    match path {
        Some(p) => {
            let text = String::from_utf8(read_input(p)?).context("matrix file is not UTF-8")?;
            ParityMatrix::parse(&text).with_context(|| format!("parsing {}", p.display()))
        }
        None => Ok(ParityMatrix::derive()),
    }
}

fn framer(encoder: Encoder, sync: Option<u16>) -> Framer {
    let f = Framer::new(encoder);
    match sync {
        Some(s) => f.with_sync(s),
        None => f,
    }
}

fn simulate(bers: &[f64], sim: &SimArgs) -> Result<()> {
    let cfgs: Vec<ChannelConfig> = bers
        .iter()
        .map(|&ber| ChannelConfig {
            ber,
            burst_len: sim.burst_len,
            burst_rate: sim.burst_rate,
            seed: sim.seed,
            frames: sim.frames,
        })
        .collect();
    let stats = run_sweep(&cfgs, sim.jobs)?;
    let records: Vec<_> = cfgs.into_iter().zip(stats).collect();
    print!("{}", emit_stats(&records, sim.csv));
    Ok(())
}

/// `Ok(false)` means the command ran but its check failed.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::GenMatrix { output } => {
            write_output(&output, ParityMatrix::derive().to_text().as_bytes())?;
        }
        Command::EmitNetlist { matrix, output } => {
            let m = load_matrix(matrix.as_deref())?;
            let net = XorNetwork::build(&m);
            write_output(&output, emit_netlist(&net).as_bytes())?;
            println!(
                "max_fan_in={} reference_max_fan_in={REFERENCE_MAX_FAN_IN} max_depth={} gates={}",
                m.max_fan_in(),
                net.max_depth(),
                net.gates().len()
            );
        }
        Command::CheckNetlist { netlist, matrix, trials, seed } => {
            use rand::{Rng, SeedableRng};
            let text = String::from_utf8(read_input(&netlist)?).context("netlist is not UTF-8")?;
            let net = parse_netlist(&text).with_context(|| format!("parsing {}", netlist.display()))?;
            let m = load_matrix(matrix.as_deref())?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let basis = (0..InfoBits::LEN).map(InfoBits::unit);
            let random = (0..trials).map(|_| InfoBits::from_words(rng.random()));
            let mut checked = 0u64;
            for info in std::iter::once(InfoBits::zero()).chain(basis).chain(random) {
                checked += 1;
                let (got, want) = (net.evaluate(&info), m.apply(&info));
                if got != want {
                    let bad: Vec<_> = (0..PARITY_BITS).filter(|&k| got.get(k) != want.get(k)).collect();
                    eprintln!("mismatch on input {checked}: parity bits {bad:?} differ");
                    return Ok(false);
                }
            }
            println!("equivalent: {checked} inputs checked, max_depth={}", net.max_depth());
        }
        Command::Encode { input, output, encoder, sync } => {
            let encoder: Encoder = encoder.parse()?;
            let framer = framer(encoder, sync);
            let data = read_input(&input)?;
            let mut out = Vec::with_capacity(data.len().div_ceil(payload::UNIT_BYTES) * FRAME_BYTES);
            for unit in payload::split(&data) {
                out.extend_from_slice(&framer.build_frame(&unit).to_bytes());
            }
            write_output(&output, &out)?;
        }
        Command::Decode { input, output, stats, sync } => {
            let framer = framer(Encoder::default(), sync);
            let data = read_input(&input)?;
            if data.len() % FRAME_BYTES != 0 {
                bail!("input is {} bytes, not a multiple of the {FRAME_BYTES}-byte frame", data.len());
            }
            let mut out = Vec::new();
            let mut log = String::new();
            for (i, chunk) in data.chunks(FRAME_BYTES).enumerate() {
                let frame = Frame::from_slice(chunk)?;
                let res = framer.unframe(&frame);
                let (bytes, count_ok) = payload::unpack(&res.data);
                log.push_str(&format!(
                    "frame={i} header={} a={} a_corrected={} b={} b_corrected={} bytes={}{}\n",
                    if res.header_ok { "ok" } else { "mismatch" },
                    res.decoded[0].status.as_str(),
                    res.decoded[0].corrected_symbols,
                    res.decoded[1].status.as_str(),
                    res.decoded[1].corrected_symbols,
                    bytes.len(),
                    if count_ok { "" } else { " length=invalid" },
                ));
                out.extend_from_slice(&bytes);
            }
            write_output(&output, &out)?;
            if let Some(path) = stats {
                write_output(&path, log.as_bytes())?;
            }
        }
        Command::Simulate { ber, sim } => simulate(&[ber], &sim)?,
        Command::Sweep { ber_list, sim } => simulate(&ber_list, &sim)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
