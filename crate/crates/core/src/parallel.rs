//! One-shot encoding of all 20 parity bits from the 135 information bits.
//!
//! Bit `5·j + i` is bit `i` (the x^i coefficient) of symbol `j`. The same
//! convention numbers the parity bits within the four parity symbols.

use crate::bits::Bits;
use crate::code::{Codeword, Message, SystematicEncoder, INFO_BITS, K, PARITY, PARITY_BITS, SYMBOL_BITS};
use crate::gf32::Gf32;
use crate::unroll::{ParityMatrix, XorNetwork};

/// The 135 information bits of one codeword.
pub type InfoBits = Bits<INFO_BITS, 3>;
/// The 20 parity bits of one codeword.
pub type ParityBits = Bits<PARITY_BITS, 1>;

fn symbols_to_bits<const LEN: usize, const W: usize>(symbols: &[Gf32]) -> Bits<LEN, W> {
    let mut b = Bits::zero();
    for (j, s) in symbols.iter().enumerate() {
        for i in 0..SYMBOL_BITS {
            b.set(SYMBOL_BITS * j + i, s.value() >> i & 1 == 1);
        }
    }
    b
}

fn bits_to_symbols<const LEN: usize, const W: usize, const S: usize>(bits: &Bits<LEN, W>) -> [Gf32; S] {
    std::array::from_fn(|j| {
        let v = (0..SYMBOL_BITS).fold(0u8, |acc, i| acc | (bits.get(SYMBOL_BITS * j + i) as u8) << i);
        Gf32::from_low_bits(v)
    })
}

pub fn message_to_bits(msg: &Message) -> InfoBits {
    symbols_to_bits(&msg.0)
}

pub fn bits_to_message(info: &InfoBits) -> Message {
    Message(bits_to_symbols::<INFO_BITS, 3, K>(info))
}

pub fn parity_to_bits(parity: &[Gf32; PARITY]) -> ParityBits {
    symbols_to_bits(parity)
}

pub fn bits_to_parity(bits: &ParityBits) -> [Gf32; PARITY] {
    bits_to_symbols::<PARITY_BITS, 1, PARITY>(bits)
}

fn assemble(info: &InfoBits, parity: &ParityBits) -> Codeword {
    Codeword::from_parts(&bits_to_message(info), bits_to_parity(parity))
}

/// Parity bit `r` is the XOR of the information bits in matrix row `r`.
pub fn encode_parallel(info: &InfoBits, matrix: &ParityMatrix) -> Codeword {
    assemble(info, &matrix.apply(info))
}

/// Same as [`encode_parallel`], computed by walking the gate network.
pub fn encode_via_network(info: &InfoBits, net: &XorNetwork) -> Codeword {
    assemble(info, &net.evaluate(info))
}

/// The production encoder: a matrix-vector product over GF(2).
#[derive(Debug, Clone)]
pub struct ParallelEncoder {
    matrix: ParityMatrix,
}

impl ParallelEncoder {
    pub fn new(matrix: ParityMatrix) -> Self {
        ParallelEncoder { matrix }
    }

    pub fn matrix(&self) -> &ParityMatrix {
        &self.matrix
    }

    pub fn encode_bits(&self, info: &InfoBits) -> Codeword {
        encode_parallel(info, &self.matrix)
    }
}

impl Default for ParallelEncoder {
    fn default() -> Self {
        ParallelEncoder::new(ParityMatrix::derive())
    }
}

impl SystematicEncoder for ParallelEncoder {
    fn encode(&self, msg: &Message) -> Codeword {
        self.encode_bits(&message_to_bits(msg))
    }
}

/// Encodes by evaluating an XOR3 network, e.g. one parsed from a netlist.
#[derive(Debug, Clone)]
pub struct NetworkEncoder {
    net: XorNetwork,
}

impl NetworkEncoder {
    pub fn new(net: XorNetwork) -> Self {
        NetworkEncoder { net }
    }

    pub fn network(&self) -> &XorNetwork {
        &self.net
    }
}

impl SystematicEncoder for NetworkEncoder {
    fn encode(&self, msg: &Message) -> Codeword {
        encode_via_network(&message_to_bits(msg), &self.net)
    }
}
