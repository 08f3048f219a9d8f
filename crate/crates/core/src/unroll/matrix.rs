//! Symbolic unrolling of the serial encoder into a GF(2) parity matrix.
//!
//! Every register bit of the LFSR is tracked as a [`LinearForm`] over the
//! 135 information bits. Multiplying by a constant and adding in GF(32) are
//! both GF(2)-linear, so after the 27 shift-in cycles each of the 20
//! register bits is an XOR of some subset of the inputs. The shift-out
//! cycles only move those forms to the output and are not simulated.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::code::{generator, INFO_BITS, K, PARITY, PARITY_BITS, SYMBOL_BITS};
use crate::gf32::{Gf32, PRIMITIVE_POLY};
use crate::parallel::{InfoBits, ParityBits};

/// XOR of a set of information bits. The empty set is the constant 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LinearForm(InfoBits);

impl LinearForm {
    pub fn zero() -> LinearForm {
        LinearForm(InfoBits::zero())
    }

    pub fn single(bit: usize) -> LinearForm {
        LinearForm(InfoBits::unit(bit))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = usize>) -> LinearForm {
        let mut f = InfoBits::zero();
        for t in terms {
            f.flip(t);
        }
        LinearForm(f)
    }

    /// Information-bit indices, ascending.
    pub fn terms(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones_iter()
    }

    pub fn fan_in(&self) -> usize {
        self.0.count_ones()
    }

    pub fn contains(&self, bit: usize) -> bool {
        self.0.get(bit)
    }

    pub fn is_zero(&self) -> bool {
        self.0.count_ones() == 0
    }

    pub fn eval(&self, info: &InfoBits) -> bool {
        self.0.dot(info)
    }

    pub fn as_bits(&self) -> &InfoBits {
        &self.0
    }
}

impl std::ops::BitXor for LinearForm {
    type Output = LinearForm;
    fn bitxor(self, rhs: LinearForm) -> LinearForm {
        LinearForm(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.terms()).finish()
    }
}

/// A GF(32) symbol whose five bits are linear forms.
type SymbolForm = [LinearForm; SYMBOL_BITS];

fn symbol_add(a: &SymbolForm, b: &SymbolForm) -> SymbolForm {
    std::array::from_fn(|i| a[i] ^ b[i])
}

/// Multiplication by a constant as a 5x5 GF(2) matrix: column `k` is
/// `c·x^k`, so output bit `i` collects every input bit `k` whose column has
/// bit `i` set.
fn symbol_scale(a: &SymbolForm, c: Gf32) -> SymbolForm {
    let columns: [u8; SYMBOL_BITS] =
        std::array::from_fn(|k| (Gf32::from_low_bits(1 << k) * c).value());
    std::array::from_fn(|i| {
        (0..SYMBOL_BITS)
            .filter(|&k| columns[k] >> i & 1 == 1)
            .fold(LinearForm::zero(), |acc, k| acc ^ a[k])
    })
}

fn input_symbol(j: usize) -> SymbolForm {
    std::array::from_fn(|i| LinearForm::single(SYMBOL_BITS * j + i))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixParseError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("expected {PARITY_BITS} matrix rows, found {0}")]
    RowCount(usize),
}

/// Row `r` gives parity bit `r` (bit `r % 5` of parity symbol `r / 5`) as a
/// linear form over the information bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParityMatrix {
    rows: [LinearForm; PARITY_BITS],
}

impl ParityMatrix {
    /// Runs the LFSR symbolically over the 27 shift-in cycles.
    pub fn derive() -> ParityMatrix {
        let g = generator();
        let mut regs: [SymbolForm; PARITY] = [[LinearForm::zero(); SYMBOL_BITS]; PARITY];
        for j in 0..K {
            let feedback = symbol_add(&input_symbol(j), &regs[PARITY - 1]);
            let mut next = regs;
            next[0] = symbol_scale(&feedback, g.coeff(0));
            for d in 1..PARITY {
                next[d] = symbol_add(&regs[d - 1], &symbol_scale(&feedback, g.coeff(d)));
            }
            regs = next;
        }
        // parity symbol 0 (position 27) is the x^3 register
        let rows = std::array::from_fn(|r| regs[PARITY - 1 - r / SYMBOL_BITS][r % SYMBOL_BITS]);
        let m = ParityMatrix { rows };
        assert_eq!(m.rank(), PARITY_BITS, "parity matrix must have full row rank");
        m
    }

    pub fn from_rows(rows: [LinearForm; PARITY_BITS]) -> ParityMatrix {
        ParityMatrix { rows }
    }

    pub fn rows(&self) -> &[LinearForm; PARITY_BITS] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &LinearForm {
        &self.rows[r]
    }

    pub fn entry(&self, r: usize, c: usize) -> bool {
        self.rows[r].contains(c)
    }

    /// Parity bits for an information vector.
    pub fn apply(&self, info: &InfoBits) -> ParityBits {
        let mut p = ParityBits::zero();
        for (r, row) in self.rows.iter().enumerate() {
            if row.eval(info) {
                p.set(r, true);
            }
        }
        p
    }

    pub fn column(&self, c: usize) -> ParityBits {
        let mut p = ParityBits::zero();
        for (r, row) in self.rows.iter().enumerate() {
            p.set(r, row.contains(c));
        }
        p
    }

    pub fn fan_ins(&self) -> [usize; PARITY_BITS] {
        self.rows.each_ref().map(LinearForm::fan_in)
    }

    pub fn max_fan_in(&self) -> usize {
        self.fan_ins().into_iter().max().unwrap_or(0)
    }

    /// Rank over GF(2) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<InfoBits> = self.rows.iter().map(|r| r.0).collect();
        let mut rank = 0;
        for col in 0..INFO_BITS {
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot);
            let p = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row.get(col) {
                    *row = *row ^ p;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn header() -> String {
        format!("# rs3127 parity-matrix prim={PRIMITIVE_POLY:#04x} groots=1..4")
    }

    /// Header line, then one line of 135 `0`/`1` characters per row.
    pub fn to_text(&self) -> String {
        let mut s = Self::header();
        s.push('\n');
        for row in &self.rows {
            for c in 0..INFO_BITS {
                s.push(if row.contains(c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text format. Comment lines are skipped, so the header is
    /// optional; a header for a different field is rejected.
    pub fn parse(text: &str) -> Result<ParityMatrix, MatrixParseError> {
        let mut rows = Vec::with_capacity(PARITY_BITS);
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if comment.contains("parity-matrix") && !line.contains(&Self::header()[2..]) {
                    return Err(MatrixParseError::Format {
                        line: line_no,
                        msg: format!("header does not match `{}`", Self::header()),
                    });
                }
                continue;
            }
            if line.len() != INFO_BITS {
                return Err(MatrixParseError::Format {
                    line: line_no,
                    msg: format!("expected {INFO_BITS} columns, found {}", line.len()),
                });
            }
            let mut row = InfoBits::zero();
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => row.set(c, true),
                    other => {
                        return Err(MatrixParseError::Format {
                            line: line_no,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            rows.push(LinearForm(row));
        }
        let rows: [LinearForm; PARITY_BITS] =
            rows.try_into().map_err(|v: Vec<_>| MatrixParseError::RowCount(v.len()))?;
        Ok(ParityMatrix { rows })
    }
}

impl fmt::Debug for ParityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (r, row) in self.rows.iter().enumerate() {
            let _ = writeln!(s, "p{r}: fan-in {}", row.fan_in());
        }
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{encode_reference, Message};
    use crate::parallel::{message_to_bits, parity_to_bits};

    /// Column c = parity of the unit-bit message c, via long division.
    fn probe_matrix() -> Vec<ParityBits> {
        (0..INFO_BITS)
            .map(|c| parity_to_bits(&encode_reference(&Message::unit_bit(c)).parity()))
            .collect()
    }

    #[test]
    fn derived_matrix_matches_basis_probes() {
        let m = ParityMatrix::derive();
        for (c, col) in probe_matrix().into_iter().enumerate() {
            assert_eq!(m.column(c), col, "column {c}");
        }
    }

    #[test]
    fn shape() {
        let m = ParityMatrix::derive();
        assert_eq!(m.rank(), 20);
        assert!(m.rows().iter().all(|r| !r.is_zero()));
        assert_eq!(m.apply(&InfoBits::zero()), ParityBits::zero());
        // frozen: fan-ins for x^5 + x^2 + 1 with roots α..α⁴
        assert_eq!(
            m.fan_ins(),
            [71, 67, 75, 75, 79, 75, 71, 71, 75, 75, 59, 63, 63, 63, 59, 71, 67, 75, 75, 79]
        );
        assert_eq!(m.max_fan_in(), 79);
    }

    #[test]
    fn scale_matches_field_multiply() {
        for c in Gf32::all() {
            for v in Gf32::all() {
                let info = message_to_bits(&{
                    let mut m = Message::default();
                    m.0[0] = v;
                    m
                });
                let scaled = symbol_scale(&input_symbol(0), c);
                let got = (0..5).fold(0u8, |acc, i| acc | (scaled[i].eval(&info) as u8) << i);
                assert_eq!(got, (v * c).value());
            }
        }
    }

    #[test]
    fn rank_detects_dependence() {
        let mut rows = *ParityMatrix::derive().rows();
        rows[3] = rows[1] ^ rows[2];
        assert_eq!(ParityMatrix::from_rows(rows).rank(), 19);
    }

    #[test]
    fn text_round_trip() {
        let m = ParityMatrix::derive();
        let text = m.to_text();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 21);
        assert_eq!(lines[0], "# rs3127 parity-matrix prim=0x25 groots=1..4");
        assert!(lines[1..].iter().all(|l| l.len() == 135));
        assert_eq!(ParityMatrix::parse(&text).unwrap(), m);
    }

    #[test]
    fn parse_errors() {
        let text = ParityMatrix::derive().to_text();
        let short: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
        assert_eq!(ParityMatrix::parse(&short), Err(MatrixParseError::RowCount(19)));
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        lines[1] = lines[1].replacen('1', "2", 1);
        let bad = lines.join("\n");
        assert!(matches!(ParityMatrix::parse(&bad), Err(MatrixParseError::Format { line: 2, .. })));
        let wrong_field = text.replace("prim=0x25", "prim=0x29");
        assert!(matches!(
            ParityMatrix::parse(&wrong_field),
            Err(MatrixParseError::Format { line: 1, .. })
        ));
    }
}
