//! RS(31,27) over GF(32) with 5-bit symbols: reference, serial-LFSR and
//! unrolled parallel encoders, an XOR3 netlist generator, a
//! Berlekamp-Massey decoder, the 320-bit two-codeword interleaved frame,
//! and a channel simulator for before/after-correction error counts.

pub mod bits;
pub mod code;
pub mod decoder;
pub mod encoder;
pub mod framing;
pub mod gf32;
pub mod harness;
pub mod parallel;
pub mod serial;
pub mod unroll;

pub use code::{encode_reference, is_codeword, Codeword, GeneratorPoly, Message, SystematicEncoder};
pub use decoder::{decode, DecodeResult, DecodeStatus};
pub use encoder::Encoder;
pub use framing::{Frame, Framer};
pub use gf32::Gf32;
pub use parallel::{InfoBits, ParallelEncoder};
pub use serial::lfsr_encode;
pub use unroll::{ParityMatrix, XorNetwork};
