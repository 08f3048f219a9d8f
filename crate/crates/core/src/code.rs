//! The RS(31,27) code: generator polynomial, message and codeword types,
//! and the long-division reference encoder every other encoder is checked
//! against.
//!
//! Symbol `j` of a codeword is the coefficient of `x^(30-j)`, so symbol 0 is
//! transmitted first. Positions 0..27 carry the message, 27..31 the parity.

use std::fmt;
use std::ops::BitXor;

use crate::gf32::{poly_eval, Gf32};

/// Symbols per codeword.
pub const N: usize = 31;
/// Message symbols per codeword.
pub const K: usize = 27;
/// Parity symbols per codeword.
pub const PARITY: usize = N - K;
/// Bits per symbol.
pub const SYMBOL_BITS: usize = 5;
/// Information bits per codeword.
pub const INFO_BITS: usize = K * SYMBOL_BITS;
/// Parity bits per codeword.
pub const PARITY_BITS: usize = PARITY * SYMBOL_BITS;
/// Exponent of the first generator root, α^FIRST_ROOT.
pub const FIRST_ROOT: i64 = 1;

/// The 27 information symbols of a codeword.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Message(pub [Gf32; K]);

/// A 31-symbol word. Not necessarily a valid codeword: received words use
/// the same type.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Codeword(pub [Gf32; N]);

impl Message {
    pub fn symbols(&self) -> &[Gf32; K] {
        &self.0
    }

    /// A message with a single information bit set, using the
    /// `5·symbol + bit` index convention.
    pub fn unit_bit(index: usize) -> Message {
        assert!(index < INFO_BITS, "information bit {index} out of range");
        let mut m = Message::default();
        m.0[index / SYMBOL_BITS] = Gf32::from_low_bits(1 << (index % SYMBOL_BITS));
        m
    }
}

impl Codeword {
    /// Systematic assembly from a message and its four parity symbols.
    pub fn from_parts(msg: &Message, parity: [Gf32; PARITY]) -> Codeword {
        let mut c = [Gf32::ZERO; N];
        c[..K].copy_from_slice(&msg.0);
        c[K..].copy_from_slice(&parity);
        Codeword(c)
    }

    pub fn symbols(&self) -> &[Gf32; N] {
        &self.0
    }

    pub fn message(&self) -> Message {
        let mut m = [Gf32::ZERO; K];
        m.copy_from_slice(&self.0[..K]);
        Message(m)
    }

    pub fn parity(&self) -> [Gf32; PARITY] {
        let mut p = [Gf32::ZERO; PARITY];
        p.copy_from_slice(&self.0[K..]);
        p
    }

    /// Evaluates the codeword polynomial at `x`.
    pub fn eval(&self, x: Gf32) -> Gf32 {
        // symbols are stored highest degree first
        self.0.iter().fold(Gf32::ZERO, |acc, &c| acc * x + c)
    }

    /// Number of positions where the two words differ.
    pub fn distance(&self, other: &Codeword) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl BitXor for Message {
    type Output = Message;
    fn bitxor(mut self, rhs: Message) -> Message {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl BitXor for Codeword {
    type Output = Codeword;
    fn bitxor(mut self, rhs: Codeword) -> Codeword {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl fmt::Debug for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Message{:?}", self.0.map(u8::from))
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword{:?}", self.0.map(u8::from))
    }
}

/// g(x) = (x - α)(x - α²)(x - α³)(x - α⁴), `coeffs[d]` is the coefficient of x^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorPoly {
    pub coeffs: [Gf32; PARITY + 1],
}

impl GeneratorPoly {
    pub fn build() -> GeneratorPoly {
        let mut g = [Gf32::ZERO; PARITY + 1];
        g[0] = Gf32::ONE;
        for (deg, i) in (FIRST_ROOT..FIRST_ROOT + PARITY as i64).enumerate() {
            let root = Gf32::alpha_pow(i);
            // multiply the degree-`deg` polynomial in place by (x + root)
            for d in (0..=deg + 1).rev() {
                let shifted = if d > 0 { g[d - 1] } else { Gf32::ZERO };
                g[d] = shifted + g[d] * root;
            }
        }
        GeneratorPoly { coeffs: g }
    }

    pub fn eval(&self, x: Gf32) -> Gf32 {
        poly_eval(&self.coeffs, x)
    }

    /// Coefficient of x^d.
    pub fn coeff(&self, d: usize) -> Gf32 {
        self.coeffs[d]
    }
}

/// The generator polynomial for this code, built once.
pub fn generator() -> &'static GeneratorPoly {
    static G: std::sync::OnceLock<GeneratorPoly> = std::sync::OnceLock::new();
    G.get_or_init(GeneratorPoly::build)
}

/// Anything that turns a message into a systematic codeword of this code.
pub trait SystematicEncoder {
    fn encode(&self, msg: &Message) -> Codeword;
}

/// Systematic encoding by polynomial long division.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReferenceEncoder;

impl SystematicEncoder for ReferenceEncoder {
    fn encode(&self, msg: &Message) -> Codeword {
        encode_reference(msg)
    }
}

/// Parity is the remainder of `m(x)·x⁴` divided by `g(x)`.
pub fn encode_reference(msg: &Message) -> Codeword {
    let g = generator();
    // dividend m(x)·x^4, highest degree first
    let mut work = [Gf32::ZERO; N];
    work[..K].copy_from_slice(&msg.0);
    for i in 0..K {
        let lead = work[i];
        if lead.is_zero() {
            continue;
        }
        // g is monic; subtract lead·g(x) aligned to this degree
        for d in 0..PARITY {
            work[i + PARITY - d] += lead * g.coeff(d);
        }
        work[i] = Gf32::ZERO;
    }
    let mut parity = [Gf32::ZERO; PARITY];
    parity.copy_from_slice(&work[K..]);
    Codeword::from_parts(msg, parity)
}

/// True iff `c(α^i) = 0` for each generator root.
pub fn is_codeword(word: &Codeword) -> bool {
    (FIRST_ROOT..FIRST_ROOT + PARITY as i64).all(|i| word.eval(Gf32::alpha_pow(i)).is_zero())
}
