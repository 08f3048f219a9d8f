//! Code generation for the one-cycle parallel encoder: symbolic unrolling
//! of the LFSR into a parity matrix, XOR3 tree scheduling, and the
//! structural netlist format.

mod matrix;
mod netlist;
mod network;

pub use matrix::{LinearForm, MatrixParseError, ParityMatrix};
pub use netlist::{emit_netlist, parse_netlist, NetlistError};
pub use network::{EvalTrace, NetworkError, Ref, Xor3, XorNetwork};
