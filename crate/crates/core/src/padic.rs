//! p-adic valuations, norms, and coset algebra on truncated 2-adic integers.
//!
//! The valuation and norm accept any prime; everything built on cosets and
//! residues is hardwired to the prime 2, matching the rest of the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Levels above this would overflow the `u64` residue arithmetic.
pub const MAX_LEVEL: u32 = 62;

/// A p-adic valuation: the exponent of the largest power of p dividing the
/// input, with the zero input mapped to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn min(self, other: Valuation) -> Valuation {
        std::cmp::min(self, other)
    }
}

/// Valuation of a product: finite parts add, infinity absorbs.
impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

/// Trial-division primality check. Inputs here are small (typically 2).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= p) {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn int_valuation(p: u64, n: &BigInt) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0i64;
    while (&m % &p).is_zero() {
        v += 1;
        m /= &p;
    }
    Valuation::Finite(v)
}

/// p-adic valuation of a rational: valuation(numerator) - valuation(denominator),
/// infinity for zero.
pub fn valuation(p: u64, x: &BigRational) -> Result<Valuation> {
    check_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let num_v = int_valuation(p, x.numer()).finite().expect("nonzero numer");
    let den_v = int_valuation(p, x.denom()).finite().expect("nonzero denom");
    Ok(Valuation::Finite(num_v - den_v))
}

/// Convenience valuation for machine integers.
pub fn valuation_int(p: u64, n: i64) -> Result<Valuation> {
    check_prime(p)?;
    Ok(int_valuation(p, &BigInt::from(n)))
}

/// p-adic norm p^{-valuation}, an exact non-negative rational; zero maps to 0.
pub fn padic_norm(p: u64, x: &BigRational) -> Result<BigRational> {
    let v = valuation(p, x)?;
    Ok(match v {
        Valuation::Infinity => BigRational::zero(),
        Valuation::Finite(v) if v >= 0 => {
            BigRational::new(BigInt::one(), BigInt::from(p).pow(v as u32))
        }
        Valuation::Finite(v) => BigRational::from(BigInt::from(p).pow((-v) as u32)),
    })
}

/// 2-adic valuation of a residue k mod 2^level, clamped to `level` for k = 0.
///
/// The coset of 0 at level J contains points of every valuation >= J, so the
/// sampled valuation is the truncation-consistent value J.
pub fn residue_valuation(residue: u64, level: u32) -> Result<u32> {
    check_level(level)?;
    if level > 0 && residue >= (1u64 << level) {
        return Err(Error::ResidueOutOfRange { residue, level });
    }
    if residue == 0 {
        Ok(level)
    } else {
        Ok(residue.trailing_zeros())
    }
}

fn check_level(level: u32) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::LevelCap {
            level,
            cap: MAX_LEVEL,
        });
    }
    Ok(())
}

/// A 2-adic integer truncated to its first `level` binary digits: the residue
/// k mod 2^level standing in for the coset k + 2^level Z_2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedDyadic {
    level: u32,
    residue: u64,
}

impl TruncatedDyadic {
    /// Reduces `residue` mod 2^level.
    pub fn new(level: u32, residue: u64) -> Result<Self> {
        check_level(level)?;
        let residue = if level == 0 {
            0
        } else {
            residue & ((1u64 << level) - 1)
        };
        Ok(TruncatedDyadic { level, residue })
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    /// Clamped 2-adic valuation of the truncated point.
    pub fn valuation(self) -> u32 {
        residue_valuation(self.residue, self.level).expect("residue in range")
    }

    /// Binary Hensel digits d_0 .. d_{level-1}, least significant first.
    pub fn hensel_digits(self) -> Vec<u8> {
        (0..self.level)
            .map(|i| ((self.residue >> i) & 1) as u8)
            .collect()
    }

    /// Rebuilds a truncated point from binary digits; rejects digits not in {0, 1}.
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        let level = digits.len() as u32;
        check_level(level)?;
        let mut residue = 0u64;
        for (position, &value) in digits.iter().enumerate() {
            if value > 1 {
                return Err(Error::InvalidDigit { position, value });
            }
            residue |= (value as u64) << position;
        }
        Ok(TruncatedDyadic { level, residue })
    }

    /// Carry-propagating addition of Hensel expansions, i.e. addition mod 2^level.
    #[allow(clippy::should_implement_trait)] // fallible: levels must match
    pub fn add(self, other: TruncatedDyadic) -> Result<TruncatedDyadic> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        TruncatedDyadic::new(self.level, self.residue.wrapping_add(other.residue))
    }
}

/// The additive inverse mod 2^level.
impl std::ops::Neg for TruncatedDyadic {
    type Output = TruncatedDyadic;

    fn neg(self) -> TruncatedDyadic {
        if self.residue == 0 {
            self
        } else {
            TruncatedDyadic {
                level: self.level,
                residue: (1u64 << self.level) - self.residue,
            }
        }
    }
}

/// The coset index + 2^level Z_2, a ball of measure 2^{-level}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coset {
    level: u32,
    index: u64,
}

impl Coset {
    pub fn new(level: u32, index: u64) -> Result<Self> {
        check_level(level)?;
        if level < 64 && index >= (1u64 << level) {
            return Err(Error::ResidueOutOfRange {
                residue: index,
                level,
            });
        }
        Ok(Coset { level, index })
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn index(self) -> u64 {
        self.index
    }

    pub fn measure(self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    /// Membership of a truncated point: defined only when the point carries at
    /// least as many digits as the coset.
    pub fn contains(self, x: TruncatedDyadic) -> Result<bool> {
        if self.level > x.level() {
            return Err(Error::CosetTooFine {
                coset: self.level,
                point: x.level(),
            });
        }
        let mask = if self.level == 0 {
            0
        } else {
            (1u64 << self.level) - 1
        };
        Ok(x.residue() & mask == self.index)
    }
}
