//! Runtime choice between the interchangeable encoders.

use std::fmt;
use std::str::FromStr;

use crate::code::{encode_reference, Codeword, Message, SystematicEncoder};
use crate::parallel::{NetworkEncoder, ParallelEncoder};
use crate::serial::lfsr_encode;

#[derive(Debug, Clone)]
pub enum Encoder {
    /// Polynomial long division.
    Reference,
    /// 31-cycle serial LFSR model.
    Lfsr,
    /// Parity-matrix product.
    Parallel(ParallelEncoder),
    /// XOR3 network evaluation.
    Network(NetworkEncoder),
}

impl Default for Encoder {
    fn default() -> Self {
        Encoder::Parallel(ParallelEncoder::default())
    }
}

impl SystematicEncoder for Encoder {
    fn encode(&self, msg: &Message) -> Codeword {
        match self {
            Encoder::Reference => encode_reference(msg),
            Encoder::Lfsr => lfsr_encode(msg),
            Encoder::Parallel(p) => p.encode(msg),
            Encoder::Network(n) => n.encode(msg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown encoder `{0}` (expected ref, lfsr or parallel)")]
pub struct UnknownEncoder(pub String);

impl FromStr for Encoder {
    type Err = UnknownEncoder;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ref" | "reference" => Ok(Encoder::Reference),
            "lfsr" | "serial" => Ok(Encoder::Lfsr),
            "parallel" => Ok(Encoder::default()),
            other => Err(UnknownEncoder(other.to_string())),
        }
    }
}

impl fmt::Display for Encoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoder::Reference => "ref",
            Encoder::Lfsr => "lfsr",
            Encoder::Parallel(_) => "parallel",
            Encoder::Network(_) => "network",
        })
    }
}
