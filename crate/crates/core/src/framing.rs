//! The 320-bit transmit frame and its receive-side inverse.
//!
//! Transmit: scramble 270 information bits, split them into two 135-bit
//! halves, encode each half into a codeword (A from the first half, B from
//! the second), interleave the two codewords symbol by symbol into 310
//! bits, and prepend a 10-bit sync header.
//!
//! Layout of the 310-bit interleaved payload, for symbol slot `s`:
//!
//! ```text
//! 10·s + 0..5   bits 4..0 of codeword A, symbol s (MSB first)
//! 10·s + 5..10  bits 4..0 of codeword B, symbol s
//! ```
//!
//! A contiguous burst therefore alternates between the two decoders every
//! five bits; an aligned 20-bit burst costs each codeword two symbols.

use crate::bits::{Bits, LengthError};
use crate::code::{Codeword, SystematicEncoder, INFO_BITS, N, SYMBOL_BITS};
use crate::decoder::{decode, DecodeResult, DecodeStatus};
use crate::encoder::Encoder;
use crate::gf32::Gf32;
use crate::parallel::{bits_to_message, message_to_bits, InfoBits};

pub const HEADER_BITS: usize = 10;
pub const PAYLOAD_BITS: usize = 2 * N * SYMBOL_BITS;
pub const FRAME_BITS: usize = HEADER_BITS + PAYLOAD_BITS;
pub const FRAME_BYTES: usize = FRAME_BITS / 8;
/// User information bits carried per frame.
pub const DATA_BITS: usize = 2 * INFO_BITS;

/// Default sync header, transmitted MSB first.
pub const DEFAULT_SYNC: u16 = 0b11_0101_0010;

/// 270 information bits.
pub type DataBits = Bits<DATA_BITS, 5>;
/// 310 interleaved codeword bits.
pub type PayloadBits = Bits<PAYLOAD_BITS, 5>;

/// Scrambler length and taps: x^7 + x^6 + 1.
const PRBS_DEGREE: u32 = 7;

/// Additive frame-synchronous scrambler, reseeded to all ones per frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scrambler {
    state: u8,
}

impl Default for Scrambler {
    fn default() -> Self {
        Scrambler::new()
    }
}

impl Scrambler {
    const MASK: u8 = (1 << PRBS_DEGREE) - 1;

    pub fn new() -> Self {
        Scrambler { state: Self::MASK }
    }

    pub fn state(&self) -> u8 {
        self.state
    }

    /// Emits the oldest register bit and shifts in `b7 ^ b6`.
    pub fn next_bit(&mut self) -> bool {
        let out = self.state >> 6 & 1;
        let feedback = (self.state >> 6 ^ self.state >> 5) & 1;
        self.state = (self.state << 1 | feedback) & Self::MASK;
        out == 1
    }
}

impl Iterator for Scrambler {
    type Item = bool;
    fn next(&mut self) -> Option<bool> {
        Some(self.next_bit())
    }
}

/// XORs the per-frame PRBS onto the data. Its own inverse.
pub fn scramble(data: &DataBits) -> DataBits {
    let mut prbs = DataBits::zero();
    for (i, bit) in Scrambler::new().take(DATA_BITS).enumerate() {
        prbs.set(i, bit);
    }
    *data ^ prbs
}

pub fn descramble(data: &DataBits) -> DataBits {
    scramble(data)
}

/// [`scramble`] on a slice, for callers holding plain booleans.
pub fn scramble_bools(data: &[bool]) -> Result<Vec<bool>, LengthError> {
    Ok(scramble(&DataBits::from_bools(data)?).to_bools())
}

fn slot_base(symbol: usize, codeword: usize) -> usize {
    2 * SYMBOL_BITS * symbol + SYMBOL_BITS * codeword
}

pub fn interleave(a: &Codeword, b: &Codeword) -> PayloadBits {
    let mut out = PayloadBits::zero();
    for (cw, word) in [a, b].into_iter().enumerate() {
        for (s, sym) in word.0.iter().enumerate() {
            let base = slot_base(s, cw);
            for i in 0..SYMBOL_BITS {
                out.set(base + i, sym.value() >> (SYMBOL_BITS - 1 - i) & 1 == 1);
            }
        }
    }
    out
}

pub fn deinterleave(payload: &PayloadBits) -> (Codeword, Codeword) {
    let word = |cw: usize| {
        Codeword(std::array::from_fn(|s| {
            let base = slot_base(s, cw);
            let v = (0..SYMBOL_BITS).fold(0u8, |acc, i| acc << 1 | payload.get(base + i) as u8);
            Gf32::from_low_bits(v)
        }))
    };
    (word(0), word(1))
}

/// Symbols of (A, B) touched by a burst of `len` bits starting at payload
/// offset `offset`.
pub fn burst_hits(offset: usize, len: usize) -> [usize; 2] {
    let mut hits = [0; 2];
    if len == 0 {
        return hits;
    }
    let first = offset / SYMBOL_BITS;
    let last = (offset + len - 1) / SYMBOL_BITS;
    for slot in first..=last.min(2 * N - 1) {
        hits[slot % 2] += 1;
    }
    hits
}

/// A 320-bit frame. Bit 0 is the first bit on the wire.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Frame(pub Bits<FRAME_BITS, 5>);

impl Frame {
    pub fn header(&self) -> u16 {
        (0..HEADER_BITS).fold(0u16, |acc, i| acc << 1 | self.0.get(i) as u16)
    }

    pub fn payload(&self) -> PayloadBits {
        self.0.slice(HEADER_BITS)
    }

    /// Packed MSB first: frame bit 0 is the top bit of byte 0.
    pub fn to_bytes(&self) -> [u8; FRAME_BYTES] {
        self.0.to_bytes_msb().try_into().expect("320 bits pack into 40 bytes")
    }

    pub fn from_bytes(bytes: &[u8; FRAME_BYTES]) -> Frame {
        Frame(Bits::from_bytes_msb(bytes).expect("40 bytes are exactly 320 bits"))
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Frame, LengthError> {
        let arr: &[u8; FRAME_BYTES] = bytes
            .try_into()
            .map_err(|_| LengthError { expected: FRAME_BITS, actual: bytes.len() * 8 })?;
        Ok(Frame::from_bytes(arr))
    }

    pub fn flip(&mut self, bit: usize) {
        self.0.flip(bit);
    }
}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Frame(")?;
        for b in self.to_bytes() {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Result of the receive chain for one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unframed {
    pub data: DataBits,
    pub header_ok: bool,
    pub decoded: [DecodeResult; 2],
}

impl Unframed {
    pub fn statuses(&self) -> [DecodeStatus; 2] {
        self.decoded.map(|d| d.status)
    }

    pub fn all_ok(&self) -> bool {
        self.statuses().iter().all(|&s| s == DecodeStatus::Ok)
    }
}

/// Builds and takes apart frames with a fixed encoder and sync word.
#[derive(Debug, Clone)]
pub struct Framer<E = Encoder> {
    encoder: E,
    sync: u16,
}

impl Default for Framer<Encoder> {
    fn default() -> Self {
        Framer::new(Encoder::default())
    }
}

impl<E: SystematicEncoder> Framer<E> {
    pub fn new(encoder: E) -> Self {
        Framer { encoder, sync: DEFAULT_SYNC }
    }

    pub fn with_sync(mut self, sync: u16) -> Self {
        assert!(sync < 1 << HEADER_BITS, "sync pattern wider than the header");
        self.sync = sync;
        self
    }

    pub fn sync(&self) -> u16 {
        self.sync
    }

    pub fn encoder(&self) -> &E {
        &self.encoder
    }

    /// The two codewords carried by a frame, before interleaving.
    pub fn encode_halves(&self, data: &DataBits) -> (Codeword, Codeword) {
        let scrambled = scramble(data);
        let half = |start| {
            let info: InfoBits = scrambled.slice(start);
            self.encoder.encode(&bits_to_message(&info))
        };
        (half(0), half(INFO_BITS))
    }

    pub fn build_frame(&self, data: &DataBits) -> Frame {
        let (a, b) = self.encode_halves(data);
        let mut bits = Bits::<FRAME_BITS, 5>::zero();
        for i in 0..HEADER_BITS {
            bits.set(i, self.sync >> (HEADER_BITS - 1 - i) & 1 == 1);
        }
        bits.splice(HEADER_BITS, &interleave(&a, &b));
        Frame(bits)
    }

    pub fn unframe(&self, frame: &Frame) -> Unframed {
        let (a, b) = deinterleave(&frame.payload());
        let decoded = [decode(&a), decode(&b)];
        let mut scrambled = DataBits::zero();
        for (h, d) in decoded.iter().enumerate() {
            scrambled.splice(h * INFO_BITS, &message_to_bits(&d.message));
        }
        Unframed {
            data: descramble(&scrambled),
            header_ok: frame.header() == self.sync,
            decoded,
        }
    }
}
