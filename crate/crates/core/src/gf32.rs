//! Arithmetic in GF(32) = GF(2)[x] / p(x).
//!
//! Elements are 5-bit integers in polynomial basis: bit `i` is the
//! coefficient of `x^i`. The primitive element α is `x`, i.e. the value 2.
//! Multiplication goes through log/antilog tables that are generated at
//! compile time from [`PRIMITIVE_POLY`], so that constant is the only place
//! the field is defined.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Sub};

use thiserror::Error;

/// x^5 + x^2 + 1.
pub const PRIMITIVE_POLY: u8 = 0b10_0101;

/// Number of elements in the field.
pub const FIELD_SIZE: usize = 32;

/// Order of the multiplicative group.
pub const GROUP_ORDER: usize = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero raised to a negative power")]
    NegativePowerOfZero,
    #[error("{0} is not a GF(32) element")]
    OutOfRange(u8),
}

/// Exponent and logarithm tables for the field.
#[derive(Debug, Clone)]
pub struct GfTables {
    /// `exp[i] = α^i` for `0 <= i < 31`.
    pub exp: [u8; GROUP_ORDER],
    /// `log[α^i] = i`; `log[0]` is unused and left at 0.
    pub log: [u8; FIELD_SIZE],
}

impl GfTables {
    /// Builds the tables by repeated multiplication by `x` modulo `poly`.
    ///
    /// Panics (at compile time when used in a const) if `poly` is not
    /// primitive of degree 5, because then `x` does not cycle through all
    /// 31 nonzero elements.
    pub const fn build(poly: u8) -> Self {
        let mut exp = [0u8; GROUP_ORDER];
        let mut log = [0u8; FIELD_SIZE];
        let mut seen = [false; FIELD_SIZE];
        let mut v: u8 = 1;
        let mut i = 0;
        while i < GROUP_ORDER {
            assert!(!seen[v as usize], "polynomial is not primitive");
            seen[v as usize] = true;
            exp[i] = v;
            log[v as usize] = i as u8;
            v <<= 1;
            if v & 0x20 != 0 {
                v ^= poly;
            }
            i += 1;
        }
        assert!(v == 1, "polynomial is not primitive");
        GfTables { exp, log }
    }
}

static TABLES: GfTables = GfTables::build(PRIMITIVE_POLY);

/// The field tables derived from [`PRIMITIVE_POLY`].
pub fn tables() -> &'static GfTables {
    &TABLES
}

/// An element of GF(32).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf32(u8);

impl Gf32 {
    pub const ZERO: Gf32 = Gf32(0);
    pub const ONE: Gf32 = Gf32(1);
    /// The primitive element α = x.
    pub const ALPHA: Gf32 = Gf32(2);

    /// Wraps a value, which must be below 32.
    pub const fn new(value: u8) -> Result<Self, FieldError> {
        if value < FIELD_SIZE as u8 {
            Ok(Gf32(value))
        } else {
            Err(FieldError::OutOfRange(value))
        }
    }

    /// Keeps the low five bits of `value`.
    pub const fn from_low_bits(value: u8) -> Self {
        Gf32(value & 0x1f)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// All 32 elements in increasing numeric order.
    pub fn all() -> impl Iterator<Item = Gf32> {
        (0..FIELD_SIZE as u8).map(Gf32)
    }

    /// The 31 nonzero elements in increasing numeric order.
    pub fn nonzero() -> impl Iterator<Item = Gf32> {
        (1..FIELD_SIZE as u8).map(Gf32)
    }

    /// `α^e`, with the exponent reduced modulo 31.
    pub fn alpha_pow(e: i64) -> Gf32 {
        Gf32(TABLES.exp[e.rem_euclid(GROUP_ORDER as i64) as usize])
    }

    /// Discrete logarithm base α, `None` for zero.
    pub fn log(self) -> Option<u8> {
        (self.0 != 0).then(|| TABLES.log[self.0 as usize])
    }

    pub const fn add(self, rhs: Gf32) -> Gf32 {
        Gf32(self.0 ^ rhs.0)
    }

    pub fn mul(self, rhs: Gf32) -> Gf32 {
        if self.0 == 0 || rhs.0 == 0 {
            return Gf32::ZERO;
        }
        let l = TABLES.log[self.0 as usize] as usize + TABLES.log[rhs.0 as usize] as usize;
        Gf32(TABLES.exp[l % GROUP_ORDER])
    }

    pub fn inv(self) -> Result<Gf32, FieldError> {
        match self.0 {
            0 => Err(FieldError::ZeroInverse),
            v => {
                let l = TABLES.log[v as usize] as usize;
                Ok(Gf32(TABLES.exp[(GROUP_ORDER - l) % GROUP_ORDER]))
            }
        }
    }

    /// `self^e`. `0^0 = 1`, `0^e = 0` for positive `e`.
    pub fn pow(self, e: i64) -> Result<Gf32, FieldError> {
        if self.0 == 0 {
            return match e {
                0 => Ok(Gf32::ONE),
                e if e > 0 => Ok(Gf32::ZERO),
                _ => Err(FieldError::NegativePowerOfZero),
            };
        }
        let l = TABLES.log[self.0 as usize] as i64;
        Ok(Gf32::alpha_pow(l * e.rem_euclid(GROUP_ORDER as i64)))
    }
}

impl TryFrom<u8> for Gf32 {
    type Error = FieldError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Gf32::new(value)
    }
}

impl From<Gf32> for u8 {
    fn from(v: Gf32) -> u8 {
        v.0
    }
}

impl fmt::Debug for Gf32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf32({})", self.0)
    }
}

impl fmt::Display for Gf32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for Gf32 {
    type Output = Gf32;
    fn add(self, rhs: Gf32) -> Gf32 {
        Gf32::add(self, rhs)
    }
}

// characteristic 2: subtraction is addition
impl Sub for Gf32 {
    type Output = Gf32;
    fn sub(self, rhs: Gf32) -> Gf32 {
        Gf32::add(self, rhs)
    }
}

impl AddAssign for Gf32 {
    fn add_assign(&mut self, rhs: Gf32) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf32 {
    type Output = Gf32;
    fn mul(self, rhs: Gf32) -> Gf32 {
        Gf32::mul(self, rhs)
    }
}

impl MulAssign for Gf32 {
    fn mul_assign(&mut self, rhs: Gf32) {
        *self = Gf32::mul(*self, rhs);
    }
}

/// Panics on division by zero, like integer division.
impl Div for Gf32 {
    type Output = Gf32;
    fn div(self, rhs: Gf32) -> Gf32 {
        Gf32::mul(self, rhs.inv().expect("division by zero in GF(32)"))
    }
}

/// Evaluates `coeffs[0] + coeffs[1]·x + ...` at `x` by Horner's rule.
pub fn poly_eval(coeffs: &[Gf32], x: Gf32) -> Gf32 {
    coeffs.iter().rev().fold(Gf32::ZERO, |acc, &c| acc * x + c)
}
