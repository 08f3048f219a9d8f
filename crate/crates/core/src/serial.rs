//! Cycle-level model of the serial LFSR encoder.
//!
//! One 5-bit symbol enters per clock. For the first 27 cycles the register
//! file divides by g(x) while the message passes straight through to the
//! output. The next 4 cycles the feedback multiplexer is switched off and
//! the registers unload the parity, highest degree first. A full codeword
//! therefore takes 31 cycles.

use thiserror::Error;

use crate::code::{generator, Codeword, Message, K, N, PARITY};
use crate::gf32::Gf32;

/// Cycles needed to encode one codeword.
pub const CYCLES_PER_CODEWORD: usize = N;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LfsrError {
    #[error("LFSR clocked past cycle {0} without reset")]
    Overrun(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfsrMode {
    ShiftIn,
    ShiftOut,
}

/// Register contents and cycle counter of the encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LfsrState {
    /// `regs[d]` is the running remainder coefficient of x^d.
    pub regs: [Gf32; PARITY],
    pub phase: usize,
}

impl LfsrState {
    pub fn new() -> LfsrState {
        LfsrState::default()
    }

    pub fn reset(self) -> LfsrState {
        LfsrState::default()
    }

    pub fn mode(&self) -> LfsrMode {
        if self.phase < K {
            LfsrMode::ShiftIn
        } else {
            LfsrMode::ShiftOut
        }
    }

    /// Advances one clock. Returns the new state and the output symbol.
    /// `input` is ignored during shift-out.
    pub fn cycle(self, input: Gf32) -> Result<(LfsrState, Gf32), LfsrError> {
        if self.phase >= CYCLES_PER_CODEWORD {
            return Err(LfsrError::Overrun(self.phase));
        }
        let mut next = LfsrState { regs: [Gf32::ZERO; PARITY], phase: self.phase + 1 };
        let out = match self.mode() {
            LfsrMode::ShiftIn => {
                let g = generator();
                let feedback = input + self.regs[PARITY - 1];
                next.regs[0] = feedback * g.coeff(0);
                for d in 1..PARITY {
                    next.regs[d] = self.regs[d - 1] + feedback * g.coeff(d);
                }
                input
            }
            LfsrMode::ShiftOut => {
                next.regs[1..].copy_from_slice(&self.regs[..PARITY - 1]);
                self.regs[PARITY - 1]
            }
        };
        Ok((next, out))
    }
}

/// Result of a full encode run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LfsrRun {
    pub codeword: Codeword,
    pub cycles: usize,
}

/// Clocks the LFSR through one codeword from reset.
pub fn lfsr_run(msg: &Message) -> LfsrRun {
    let mut state = LfsrState::new();
    let mut out = [Gf32::ZERO; N];
    let inputs = msg.0.iter().copied().chain(std::iter::repeat(Gf32::ZERO)).take(N);
    for (slot, input) in out.iter_mut().zip(inputs) {
        let (next, sym) = state.cycle(input).expect("phase bounded by loop");
        *slot = sym;
        state = next;
    }
    assert_eq!(state.phase, CYCLES_PER_CODEWORD);
    LfsrRun { codeword: Codeword(out), cycles: state.phase }
}

pub fn lfsr_encode(msg: &Message) -> Codeword {
    lfsr_run(msg).codeword
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LfsrEncoder;

impl crate::code::SystematicEncoder for LfsrEncoder {
    fn encode(&self, msg: &Message) -> Codeword {
        lfsr_encode(msg)
    }
}
