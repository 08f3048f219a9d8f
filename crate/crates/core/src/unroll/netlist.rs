//! Structural netlist text for an [`XorNetwork`].
//!
//! ```text
//! # rs3127 parity netlist prim=0x25 groots=1..4 maxdepth=4
//! wire w0 = XOR3(d0, d1, d2)
//! ...
//! out p0 = w25
//! ```
//!
//! A reference is `d<0..134>`, `w<id>` for an earlier gate, or `ZERO`. Gate
//! ids are dense and ascending. `#` starts a comment anywhere on a line.

use std::fmt::Write as _;

use thiserror::Error;

use super::network::{NetworkError, Ref, Xor3, XorNetwork};
use crate::code::PARITY_BITS;
use crate::gf32::PRIMITIVE_POLY;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: reference to undefined wire w{id}")]
    UndefinedWire { line: usize, id: usize },
    #[error("line {line}: cyclic reference: w{gate} reads w{id}, which is defined at or after it")]
    Cycle { line: usize, gate: usize, id: usize },
    #[error("output p{0} is never assigned")]
    MissingOutput(usize),
    #[error("header declares maxdepth={declared}, network depth is {actual}")]
    DepthMismatch { declared: usize, actual: usize },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

fn header(max_depth: usize) -> String {
    format!("# rs3127 parity netlist prim={PRIMITIVE_POLY:#04x} groots=1..4 maxdepth={max_depth}")
}

fn fmt_ref(r: Ref) -> String {
    match r {
        Ref::Input(i) => format!("d{i}"),
        Ref::Gate(g) => format!("w{g}"),
        Ref::Zero => "ZERO".to_string(),
    }
}

/// Canonical text for a network.
pub fn emit_netlist(net: &XorNetwork) -> String {
    let mut s = header(net.max_depth());
    s.push('\n');
    for (i, g) in net.gates().iter().enumerate() {
        let [a, b, c] = g.inputs.map(fmt_ref);
        let _ = writeln!(s, "wire w{i} = XOR3({a}, {b}, {c})");
    }
    for (k, &o) in net.outputs().iter().enumerate() {
        let _ = writeln!(s, "out p{k} = {}", fmt_ref(o));
    }
    s
}

fn syntax(line: usize, msg: impl Into<String>) -> NetlistError {
    NetlistError::Syntax { line, msg: msg.into() }
}

fn parse_index(s: &str, prefix: char, line: usize) -> Result<usize, NetlistError> {
    let digits = s
        .strip_prefix(prefix)
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .ok_or_else(|| syntax(line, format!("expected {prefix}<n>, found `{s}`")))?;
    digits.parse().map_err(|_| syntax(line, format!("index too large in `{s}`")))
}

fn parse_ref(s: &str, line: usize) -> Result<Ref, NetlistError> {
    match s.chars().next() {
        _ if s == "ZERO" => Ok(Ref::Zero),
        Some('d') => Ok(Ref::Input(parse_index(s, 'd', line)?)),
        Some('w') => Ok(Ref::Gate(parse_index(s, 'w', line)?)),
        _ => Err(syntax(line, format!("bad reference `{s}`"))),
    }
}

fn parse_max_depth(comment: &str) -> Option<usize> {
    comment
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("maxdepth="))
        .and_then(|v| v.parse().ok())
}

pub fn parse_netlist(text: &str) -> Result<XorNetwork, NetlistError> {
    let mut gates: Vec<(usize, Xor3)> = Vec::new();
    let mut outputs: [Option<(usize, Ref)>; PARITY_BITS] = [None; PARITY_BITS];
    let mut declared_depth = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (body, comment) = match raw.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (raw, None),
        };
        if let Some(c) = comment.filter(|c| c.contains("rs3127 parity netlist")) {
            declared_depth = parse_max_depth(c);
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (lhs, rhs) = body
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected `wire ... = ...` or `out ... = ...`"))?;
        let mut lhs = lhs.split_whitespace();
        let (kind, name) = match (lhs.next(), lhs.next(), lhs.next()) {
            (Some(k), Some(n), None) => (k, n),
            _ => return Err(syntax(line, "malformed left-hand side")),
        };
        let rhs = rhs.trim();
        match kind {
            "wire" => {
                let id = parse_index(name, 'w', line)?;
                if id != gates.len() {
                    return Err(syntax(line, format!("expected gate id w{}, found w{id}", gates.len())));
                }
                let args = rhs
                    .strip_prefix("XOR3(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| syntax(line, "expected XOR3(a, b, c)"))?;
                let refs: Vec<Ref> =
                    args.split(',').map(|a| parse_ref(a.trim(), line)).collect::<Result<_, _>>()?;
                let inputs: [Ref; 3] = refs
                    .try_into()
                    .map_err(|v: Vec<_>| syntax(line, format!("XOR3 takes 3 inputs, found {}", v.len())))?;
                gates.push((line, Xor3 { inputs }));
            }
            "out" => {
                let k = parse_index(name, 'p', line)?;
                if k >= PARITY_BITS {
                    return Err(syntax(line, format!("output p{k} out of range")));
                }
                if outputs[k].is_some() {
                    return Err(syntax(line, format!("output p{k} assigned twice")));
                }
                outputs[k] = Some((line, parse_ref(rhs, line)?));
            }
            other => return Err(syntax(line, format!("unknown statement `{other}`"))),
        }
    }

    let defined = gates.len();
    for (i, (line, g)) in gates.iter().enumerate() {
        for r in g.inputs {
            if let Ref::Gate(id) = r {
                if id >= defined {
                    return Err(NetlistError::UndefinedWire { line: *line, id });
                }
                if id >= i {
                    return Err(NetlistError::Cycle { line: *line, gate: i, id });
                }
            }
        }
    }
    let mut outs = [Ref::Zero; PARITY_BITS];
    for (k, o) in outputs.iter().enumerate() {
        let (line, r) = o.ok_or(NetlistError::MissingOutput(k))?;
        if let Ref::Gate(id) = r {
            if id >= defined {
                return Err(NetlistError::UndefinedWire { line, id });
            }
        }
        outs[k] = r;
    }

    let net = XorNetwork::from_parts(gates.into_iter().map(|(_, g)| g).collect(), outs)?;
    if let Some(declared) = declared_depth {
        if declared != net.max_depth() {
            return Err(NetlistError::DepthMismatch { declared, actual: net.max_depth() });
        }
    }
    Ok(net)
}
