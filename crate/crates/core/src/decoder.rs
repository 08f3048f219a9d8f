//! Hard-decision RS(31,27) decoding: syndromes, inverse-free
//! Berlekamp-Massey, Chien search and Forney's formula. Corrects up to two
//! symbol errors; anything the decoder cannot explain is reported as
//! uncorrectable and the received word is passed through untouched.
//!
//! Polynomial conventions: `S(x) = s0 + s1·x + s2·x² + s3·x³` with
//! `s_i = r(α^(i+1))`. An error at symbol position `j` has locator
//! `X = α^(30-j)`, and the locator polynomial has roots at the `X⁻¹`.

use crate::code::{is_codeword, Codeword, Message, FIRST_ROOT, N, PARITY};
use crate::gf32::{poly_eval, Gf32};

/// Maximum number of correctable symbol errors.
pub const T: usize = PARITY / 2;

/// `s[i] = r(α^(i+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Syndromes(pub [Gf32; PARITY]);

impl Syndromes {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|s| s.is_zero())
    }
}

/// Locator and evaluator polynomials, coefficient `d` is the x^d term.
///
/// The inverse-free iteration yields a nonzero scalar multiple of the
/// classical locator; `omega` carries the same scalar, so Forney's ratio is
/// unaffected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorLocator {
    pub lambda: [Gf32; PARITY + 1],
    pub omega: [Gf32; PARITY],
}

impl ErrorLocator {
    pub fn degree(&self) -> usize {
        degree(&self.lambda)
    }
}

fn degree(p: &[Gf32]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodeStatus {
    /// Syndromes were zero.
    Ok,
    /// One or two symbols were corrected.
    Corrected,
    /// The error pattern is outside what the decoder can explain.
    Uncorrectable,
}

impl DecodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DecodeStatus::Ok => "ok",
            DecodeStatus::Corrected => "corrected",
            DecodeStatus::Uncorrectable => "uncorrectable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeResult {
    /// Corrected word, or the received word when uncorrectable.
    pub codeword: Codeword,
    pub message: Message,
    pub corrected_symbols: usize,
    pub status: DecodeStatus,
}

pub fn compute_syndromes(received: &Codeword) -> Syndromes {
    Syndromes(std::array::from_fn(|i| received.eval(Gf32::alpha_pow(FIRST_ROOT + i as i64))))
}

/// Division-free Berlekamp-Massey over the four syndromes.
///
/// Each step computes the discrepancy `delta` against the current locator
/// and updates `lambda <- gamma·lambda + delta·x·b`, where `b` is the saved
/// auxiliary polynomial and `gamma` the discrepancy at the last length
/// change. The scaling by `gamma` replaces the division by the old
/// discrepancy in the classical algorithm.
pub fn solve_locator(s: &Syndromes) -> ErrorLocator {
    let s = &s.0;
    let mut lambda = [Gf32::ZERO; PARITY + 1];
    let mut b = [Gf32::ZERO; PARITY + 1];
    lambda[0] = Gf32::ONE;
    b[0] = Gf32::ONE;
    let mut gamma = Gf32::ONE;
    let mut k: i32 = 0;

    for r in 0..PARITY {
        let delta = (0..=r).fold(Gf32::ZERO, |acc, j| acc + lambda[j] * s[r - j]);
        let mut next = [Gf32::ZERO; PARITY + 1];
        for d in 0..=PARITY {
            let shifted_b = if d > 0 { b[d - 1] } else { Gf32::ZERO };
            next[d] = gamma * lambda[d] + delta * shifted_b;
        }
        if !delta.is_zero() && k >= 0 {
            b = lambda;
            k = -k - 1;
            gamma = delta;
        } else {
            b.copy_within(0..PARITY, 1);
            b[0] = Gf32::ZERO;
            k += 1;
        }
        lambda = next;
    }

    let mut omega = [Gf32::ZERO; PARITY];
    for (i, o) in omega.iter_mut().enumerate() {
        *o = (0..=i).fold(Gf32::ZERO, |acc, j| acc + s[j] * lambda[i - j]);
    }
    ErrorLocator { lambda, omega }
}

/// Positions `j` where `lambda(α^-(30-j)) = 0`, ascending.
///
/// Term `d` of the sum starts at `lambda_d·α^(-30d)` for `j = 0` and is
/// multiplied by `α^d` at each later position.
pub fn chien_search(lambda: &[Gf32]) -> Vec<usize> {
    let mut terms: Vec<Gf32> =
        lambda.iter().enumerate().map(|(d, &c)| c * Gf32::alpha_pow(-30 * d as i64)).collect();
    let steps: Vec<Gf32> = (0..lambda.len()).map(|d| Gf32::alpha_pow(d as i64)).collect();
    let mut roots = Vec::new();
    for j in 0..N {
        if terms.iter().fold(Gf32::ZERO, |acc, &t| acc + t).is_zero() {
            roots.push(j);
        }
        for (t, &step) in terms.iter_mut().zip(&steps) {
            *t *= step;
        }
    }
    roots
}

/// Formal derivative in characteristic 2: only odd-degree terms survive.
fn derivative(lambda: &[Gf32]) -> Vec<Gf32> {
    lambda
        .iter()
        .enumerate()
        .skip(1)
        .map(|(d, &c)| if d % 2 == 1 { c } else { Gf32::ZERO })
        .collect()
}

/// Error magnitude at `position`, or `None` if `lambda'` vanishes there.
///
/// `e = X^(1-b) · omega(X⁻¹) / lambda'(X⁻¹)` with `X = α^(30-j)`. With the
/// first generator root at b = 1 the `X^(1-b)` factor is 1; it is still
/// applied so the formula tracks [`FIRST_ROOT`].
pub fn forney(loc: &ErrorLocator, position: usize) -> Option<Gf32> {
    let power = (N - 1 - position) as i64;
    let x_inv = Gf32::alpha_pow(-power);
    let denom = poly_eval(&derivative(&loc.lambda), x_inv);
    if denom.is_zero() {
        return None;
    }
    let factor = Gf32::alpha_pow(power * (1 - FIRST_ROOT));
    Some(factor * poly_eval(&loc.omega, x_inv) / denom)
}

pub fn decode(received: &Codeword) -> DecodeResult {
    let uncorrectable = DecodeResult {
        codeword: *received,
        message: received.message(),
        corrected_symbols: 0,
        status: DecodeStatus::Uncorrectable,
    };
    let syn = compute_syndromes(received);
    if syn.is_zero() {
        return DecodeResult { status: DecodeStatus::Ok, ..uncorrectable };
    }
    let loc = solve_locator(&syn);
    let deg = loc.degree();
    if deg == 0 || deg > T {
        return uncorrectable;
    }
    let positions = chien_search(&loc.lambda);
    if positions.len() != deg {
        return uncorrectable;
    }
    let mut fixed = *received;
    for &p in &positions {
        match forney(&loc, p) {
            Some(e) if !e.is_zero() => fixed.0[p] += e,
            _ => return uncorrectable,
        }
    }
    if !is_codeword(&fixed) {
        return uncorrectable;
    }
    DecodeResult {
        codeword: fixed,
        message: fixed.message(),
        corrected_symbols: positions.len(),
        status: DecodeStatus::Corrected,
    }
}
