//! Packing of arbitrary byte streams into 270-bit frame payloads.
//!
//! Each payload carries up to 33 data bytes in bits 0..264 (MSB first)
//! followed by a 6-bit count of valid bytes in bits 264..270. The input is
//! cut into 33-byte units; only the last unit may be short, and its unused
//! bytes are zero. Empty input produces no frames.

use rs3127_core::framing::DataBits;

pub const UNIT_BYTES: usize = 33;
const COUNT_BITS: usize = 6;
const COUNT_START: usize = UNIT_BYTES * 8;

pub fn pack(chunk: &[u8]) -> DataBits {
    assert!(chunk.len() <= UNIT_BYTES);
    let mut bits = DataBits::zero();
    for (i, byte) in chunk.iter().enumerate() {
        for k in 0..8 {
            bits.set(i * 8 + k, byte & (0x80 >> k) != 0);
        }
    }
    for k in 0..COUNT_BITS {
        bits.set(COUNT_START + k, chunk.len() >> (COUNT_BITS - 1 - k) & 1 == 1);
    }
    bits
}

/// Returns the valid bytes and whether the stored count was in range. An
/// out-of-range count (possible after an uncorrectable frame) yields all 33
/// bytes.
pub fn unpack(bits: &DataBits) -> (Vec<u8>, bool) {
    let count = (0..COUNT_BITS).fold(0usize, |acc, k| acc << 1 | bits.get(COUNT_START + k) as usize);
    let valid = count <= UNIT_BYTES;
    let bytes = (0..count.min(UNIT_BYTES))
        .map(|i| (0..8).fold(0u8, |acc, k| acc << 1 | bits.get(i * 8 + k) as u8))
        .collect();
    (bytes, valid)
}

pub fn split(data: &[u8]) -> impl Iterator<Item = DataBits> + '_ {
    data.chunks(UNIT_BYTES).map(pack)
}
