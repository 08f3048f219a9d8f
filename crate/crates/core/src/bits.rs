//! Fixed-length bit vectors packed into `u64` words.

use std::fmt;
use std::ops::BitXor;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("expected {expected} bits, got {actual}")]
pub struct LengthError {
    pub expected: usize,
    pub actual: usize,
}

/// `LEN` bits stored little-endian in `WORDS` words (bit `i` is bit `i % 64`
/// of word `i / 64`). Bits at or above `LEN` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bits<const LEN: usize, const WORDS: usize> {
    words: [u64; WORDS],
}

impl<const LEN: usize, const WORDS: usize> Default for Bits<LEN, WORDS> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const LEN: usize, const WORDS: usize> Bits<LEN, WORDS> {
    pub const LEN: usize = LEN;

    const CHECK: () = assert!(WORDS * 64 >= LEN && (WORDS - 1) * 64 < LEN);

    pub const fn zero() -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        Bits { words: [0; WORDS] }
    }

    pub fn ones() -> Self {
        let mut b = Self { words: [u64::MAX; WORDS] };
        b.mask_tail();
        b
    }

    pub fn from_words(words: [u64; WORDS]) -> Self {
        let mut b = Self { words };
        b.mask_tail();
        b
    }

    pub fn words(&self) -> &[u64; WORDS] {
        &self.words
    }

    fn mask_tail(&mut self) {
        let rem = LEN % 64;
        if rem != 0 {
            self.words[WORDS - 1] &= (1u64 << rem) - 1;
        }
    }

    pub fn len(&self) -> usize {
        LEN
    }

    pub fn is_empty(&self) -> bool {
        LEN == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < LEN, "bit {i} out of range for {LEN}-bit vector");
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < LEN, "bit {i} out of range for {LEN}-bit vector");
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < LEN, "bit {i} out of range for {LEN}-bit vector");
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn unit(i: usize) -> Self {
        let mut b = Self::zero();
        b.set(i, true);
        b
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Indices of set bits in ascending order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..LEN).map(|i| self.get(i))
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self, LengthError> {
        if bits.len() != LEN {
            return Err(LengthError { expected: LEN, actual: bits.len() });
        }
        let mut b = Self::zero();
        for (i, &v) in bits.iter().enumerate() {
            b.set(i, v);
        }
        Ok(b)
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }

    /// Copies `N2` bits starting at `start` into a new vector.
    pub fn slice<const N2: usize, const W2: usize>(&self, start: usize) -> Bits<N2, W2> {
        assert!(start + N2 <= LEN);
        let mut out = Bits::<N2, W2>::zero();
        for i in 0..N2 {
            out.set(i, self.get(start + i));
        }
        out
    }

    /// Overwrites `N2` bits starting at `start`.
    pub fn splice<const N2: usize, const W2: usize>(&mut self, start: usize, src: &Bits<N2, W2>) {
        assert!(start + N2 <= LEN);
        for i in 0..N2 {
            self.set(start + i, src.get(i));
        }
    }

    /// Packs MSB-first: bit 0 is the most significant bit of byte 0.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        let mut out = vec![0u8; LEN.div_ceil(8)];
        for i in self.ones_iter() {
            out[i / 8] |= 0x80 >> (i % 8);
        }
        out
    }

    /// Inverse of [`Bits::to_bytes_msb`]. Padding bits in the last byte must
    /// be zero.
    pub fn from_bytes_msb(bytes: &[u8]) -> Result<Self, LengthError> {
        if bytes.len() != LEN.div_ceil(8) {
            return Err(LengthError { expected: LEN, actual: bytes.len() * 8 });
        }
        let mut b = Self::zero();
        for (i, byte) in bytes.iter().enumerate() {
            for k in 0..8 {
                if byte & (0x80 >> k) != 0 {
                    let idx = i * 8 + k;
                    if idx >= LEN {
                        return Err(LengthError { expected: LEN, actual: idx + 1 });
                    }
                    b.set(idx, true);
                }
            }
        }
        Ok(b)
    }
}

impl<const LEN: usize, const WORDS: usize> BitXor for Bits<LEN, WORDS> {
    type Output = Self;
    fn bitxor(mut self, rhs: Self) -> Self {
        for (a, b) in self.words.iter_mut().zip(rhs.words) {
            *a ^= b;
        }
        self
    }
}

impl<const LEN: usize, const WORDS: usize> fmt::Debug for Bits<LEN, WORDS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits<{LEN}>(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type B135 = Bits<135, 3>;

    #[test]
    fn tail_is_masked() {
        let b = B135::ones();
        assert_eq!(b.count_ones(), 135);
        assert_eq!(B135::from_words([u64::MAX; 3]).count_ones(), 135);
    }

    #[test]
    fn ones_iter_ascending() {
        let mut b = B135::zero();
        for i in [134, 0, 64, 63, 7] {
            b.set(i, true);
        }
        assert_eq!(b.ones_iter().collect::<Vec<_>>(), vec![0, 7, 63, 64, 134]);
    }

    #[test]
    fn msb_packing() {
        let b = Bits::<10, 1>::unit(0);
        assert_eq!(b.to_bytes_msb(), vec![0x80, 0x00]);
        let b = Bits::<10, 1>::unit(9);
        assert_eq!(b.to_bytes_msb(), vec![0x00, 0x40]);
        assert!(Bits::<10, 1>::from_bytes_msb(&[0, 0x20]).is_err());
        assert!(Bits::<10, 1>::from_bytes_msb(&[0]).is_err());
    }

    #[test]
    fn wrong_length_bools() {
        assert_eq!(
            B135::from_bools(&[true; 3]),
            Err(LengthError { expected: 135, actual: 3 })
        );
    }

    proptest! {
        #[test]
        fn byte_round_trip(words in any::<[u64; 3]>()) {
            let b = B135::from_words(words);
            prop_assert_eq!(B135::from_bytes_msb(&b.to_bytes_msb()).unwrap(), b);
            prop_assert_eq!(B135::from_bools(&b.to_bools()).unwrap(), b);
        }

        #[test]
        fn dot_matches_naive(a in any::<[u64; 3]>(), b in any::<[u64; 3]>()) {
            let (a, b) = (B135::from_words(a), B135::from_words(b));
            let naive = (0..135).filter(|&i| a.get(i) && b.get(i)).count() % 2 == 1;
            prop_assert_eq!(a.dot(&b), naive);
        }
    }
}
