//! Ternary XOR trees over the parity matrix rows.

use thiserror::Error;

use super::matrix::{LinearForm, ParityMatrix};
use crate::code::{INFO_BITS, PARITY_BITS};
use crate::parallel::{InfoBits, ParityBits};

/// A gate input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ref {
    /// Information bit `d<i>`.
    Input(usize),
    /// Output of an earlier gate `w<i>`.
    Gate(usize),
    /// Constant zero, used to pad a gate with fewer than three operands.
    Zero,
}

/// A 3-input XOR gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Xor3 {
    pub inputs: [Ref; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("gate w{gate} references w{target}, which is not defined before it")]
    ForwardReference { gate: usize, target: usize },
    #[error("reference to undefined wire w{0}")]
    UndefinedWire(usize),
    #[error("information bit d{0} out of range")]
    InputOutOfRange(usize),
    #[error("gate w{0} has only ZERO inputs")]
    EmptyGate(usize),
}

/// An acyclic network of XOR3 gates computing the 20 parity bits.
///
/// Gates are stored in topological order; gate `i` only reads inputs and
/// gates `< i`. Only XOR3 gates and wires exist, there is no other gate kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorNetwork {
    gates: Vec<Xor3>,
    outputs: [Ref; PARITY_BITS],
    depths: [usize; PARITY_BITS],
}

/// Bookkeeping from one evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalTrace {
    pub parity: ParityBits,
    pub gates_evaluated: usize,
    /// Longest gate path to each output observed while evaluating.
    pub depths: [usize; PARITY_BITS],
}

fn ceil_log3(n: usize) -> usize {
    let mut depth = 0;
    let mut reach = 1;
    while reach < n {
        reach *= 3;
        depth += 1;
    }
    depth
}

impl XorNetwork {
    /// One balanced ternary tree per row, leaves in ascending bit order,
    /// the last gate of each level padded with ZERO. No subexpressions are
    /// shared between rows.
    pub fn build(matrix: &ParityMatrix) -> XorNetwork {
        let mut gates = Vec::new();
        let mut outputs = [Ref::Zero; PARITY_BITS];
        for (out, row) in outputs.iter_mut().zip(matrix.rows()) {
            let mut level: Vec<Ref> = row.terms().map(Ref::Input).collect();
            while level.len() > 1 {
                level = level
                    .chunks(3)
                    .map(|chunk| {
                        let mut inputs = [Ref::Zero; 3];
                        inputs[..chunk.len()].copy_from_slice(chunk);
                        gates.push(Xor3 { inputs });
                        Ref::Gate(gates.len() - 1)
                    })
                    .collect();
            }
            *out = level.first().copied().unwrap_or(Ref::Zero);
        }
        XorNetwork::from_parts(gates, outputs).expect("tree construction is well-formed")
    }

    /// Validates topology and computes per-output depths.
    pub fn from_parts(gates: Vec<Xor3>, outputs: [Ref; PARITY_BITS]) -> Result<XorNetwork, NetworkError> {
        let check = |r: Ref, limit: usize, gate: Option<usize>| match r {
            Ref::Input(i) if i >= INFO_BITS => Err(NetworkError::InputOutOfRange(i)),
            Ref::Gate(t) if t >= limit => Err(match gate {
                Some(g) if t < gates.len() => NetworkError::ForwardReference { gate: g, target: t },
                _ => NetworkError::UndefinedWire(t),
            }),
            _ => Ok(()),
        };
        for (i, g) in gates.iter().enumerate() {
            for &r in &g.inputs {
                check(r, i, Some(i))?;
            }
            if g.inputs.iter().all(|&r| r == Ref::Zero) {
                return Err(NetworkError::EmptyGate(i));
            }
        }
        for &o in &outputs {
            check(o, gates.len(), None)?;
        }
        let mut gate_depth = vec![0usize; gates.len()];
        for (i, g) in gates.iter().enumerate() {
            gate_depth[i] = 1 + g
                .inputs
                .iter()
                .map(|r| match r {
                    Ref::Gate(t) => gate_depth[*t],
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
        }
        let depths = outputs.map(|o| match o {
            Ref::Gate(t) => gate_depth[t],
            _ => 0,
        });
        Ok(XorNetwork { gates, outputs, depths })
    }

    pub fn gates(&self) -> &[Xor3] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Ref; PARITY_BITS] {
        &self.outputs
    }

    pub fn depths(&self) -> &[usize; PARITY_BITS] {
        &self.depths
    }

    pub fn max_depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    /// Number of information-bit leaves under output `k`, counted with
    /// multiplicity.
    pub fn fan_in(&self, k: usize) -> usize {
        fn leaves(net: &XorNetwork, r: Ref) -> usize {
            match r {
                Ref::Input(_) => 1,
                Ref::Zero => 0,
                Ref::Gate(g) => net.gates[g].inputs.iter().map(|&i| leaves(net, i)).sum(),
            }
        }
        leaves(self, self.outputs[k])
    }

    /// The linear form computed by output `k`.
    pub fn output_form(&self, k: usize) -> LinearForm {
        fn form(net: &XorNetwork, r: Ref) -> LinearForm {
            match r {
                Ref::Input(i) => LinearForm::single(i),
                Ref::Zero => LinearForm::zero(),
                Ref::Gate(g) => net.gates[g]
                    .inputs
                    .iter()
                    .fold(LinearForm::zero(), |acc, &i| acc ^ form(net, i)),
            }
        }
        form(self, self.outputs[k])
    }

    pub fn evaluate(&self, info: &InfoBits) -> ParityBits {
        self.evaluate_traced(info).parity
    }

    pub fn evaluate_traced(&self, info: &InfoBits) -> EvalTrace {
        let mut values = Vec::with_capacity(self.gates.len());
        let mut levels = Vec::with_capacity(self.gates.len());
        let read = |r: Ref, values: &[bool], levels: &[usize]| match r {
            Ref::Input(i) => (info.get(i), 0),
            Ref::Gate(g) => (values[g], levels[g]),
            Ref::Zero => (false, 0),
        };
        for g in &self.gates {
            let (mut v, mut lvl) = (false, 0);
            for &r in &g.inputs {
                let (x, l) = read(r, &values, &levels);
                v ^= x;
                lvl = lvl.max(l);
            }
            values.push(v);
            levels.push(lvl + 1);
        }
        let mut parity = ParityBits::zero();
        let mut depths = [0; PARITY_BITS];
        for (k, &o) in self.outputs.iter().enumerate() {
            let (v, l) = read(o, &values, &levels);
            parity.set(k, v);
            depths[k] = l;
        }
        EvalTrace { parity, gates_evaluated: values.len(), depths }
    }

    /// Expected depth of a balanced ternary tree with `fan_in` leaves.
    pub fn tree_depth(fan_in: usize) -> usize {
        ceil_log3(fan_in.max(1))
    }
}
