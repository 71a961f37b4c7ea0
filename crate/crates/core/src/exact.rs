//! Exact dyadic-rational arithmetic and the bit-exact norm path built on it.
//!
//! Every finite double is a dyadic rational, so any step function converts
//! losslessly into this representation. Averaging over cosets, translation
//! differences, and the weights 2^{±j} are all exact here, which turns the
//! norm computations for p in {1, 2, inf} into integer arithmetic. Mantissas
//! are held in an `i128`; the supported workloads keep them far below the
//! overflow threshold, and any overflow aborts loudly rather than rounding.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::step::DyadicStepFunction;

/// A dyadic rational mant * 2^exp with odd (or zero) mantissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicRational {
    mant: i128,
    exp: i32,
}

const OVERFLOW_MSG: &str =
    "exact dyadic arithmetic overflow: values exceed the supported i128 mantissa range";

fn shl_checked(m: i128, k: u32) -> Option<i128> {
    if m == 0 {
        return Some(0);
    }
    if k >= 127 {
        return None;
    }
    m.checked_mul(1i128 << k)
}

impl DyadicRational {
    pub const ZERO: DyadicRational = DyadicRational { mant: 0, exp: 0 };

    fn normalized(mant: i128, exp: i32) -> Self {
        if mant == 0 {
            return DyadicRational::ZERO;
        }
        let tz = mant.trailing_zeros();
        DyadicRational {
            mant: mant >> tz,
            exp: exp + tz as i32,
        }
    }

    pub fn from_int(n: i64) -> Self {
        DyadicRational::normalized(n as i128, 0)
    }

    /// Exact conversion; every finite double is a dyadic rational.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFiniteSample { index: 0 });
        }
        if x == 0.0 {
            return Ok(DyadicRational::ZERO);
        }
        let bits = x.to_bits();
        let sign: i128 = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1u64 << 52) - 1)) as i128;
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1i128 << 52), biased - 1075)
        };
        Ok(DyadicRational::normalized(sign * mant, exp))
    }

    /// Nearest double; exact whenever the mantissa fits in 53 bits.
    pub fn to_f64(self) -> f64 {
        self.mant as f64 * (self.exp as f64).exp2()
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0
    }

    pub fn abs(self) -> Self {
        DyadicRational {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Multiplication by 2^k, exact for any sign of k.
    pub fn mul_pow2(self, k: i32) -> Self {
        if self.mant == 0 {
            return self;
        }
        DyadicRational {
            mant: self.mant,
            exp: self.exp + k,
        }
    }
}

impl std::ops::Neg for DyadicRational {
    type Output = DyadicRational;

    fn neg(self) -> DyadicRational {
        DyadicRational {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl std::ops::Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, other: DyadicRational) -> DyadicRational {
        if self.mant == 0 {
            return other;
        }
        if other.mant == 0 {
            return self;
        }
        let exp = self.exp.min(other.exp);
        let a = shl_checked(self.mant, (self.exp - exp) as u32).expect(OVERFLOW_MSG);
        let b = shl_checked(other.mant, (other.exp - exp) as u32).expect(OVERFLOW_MSG);
        DyadicRational::normalized(a.checked_add(b).expect(OVERFLOW_MSG), exp)
    }
}

impl std::ops::Sub for DyadicRational {
    type Output = DyadicRational;

    fn sub(self, other: DyadicRational) -> DyadicRational {
        self + (-other)
    }
}

impl std::ops::Mul for DyadicRational {
    type Output = DyadicRational;

    #[allow(clippy::suspicious_arithmetic_impl)] // exponents add under multiplication
    fn mul(self, other: DyadicRational) -> DyadicRational {
        DyadicRational::normalized(
            self.mant.checked_mul(other.mant).expect(OVERFLOW_MSG),
            self.exp + other.exp,
        )
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (*self - *other).mant.cmp(&0)
    }
}

/// Step function with exact dyadic-rational samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactStepFn {
    level: u32,
    samples: Vec<DyadicRational>,
}

impl ExactStepFn {
    pub fn from_function(f: &DyadicStepFunction) -> Self {
        let samples = f
            .samples()
            .iter()
            .map(|&s| DyadicRational::from_f64(s).expect("samples are finite"))
            .collect();
        ExactStepFn {
            level: f.level(),
            samples,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn samples(&self) -> &[DyadicRational] {
        &self.samples
    }

    fn sum(values: impl Iterator<Item = DyadicRational>) -> DyadicRational {
        values.fold(DyadicRational::ZERO, |acc, v| acc + v)
    }

    pub fn integral(&self) -> DyadicRational {
        Self::sum(self.samples.iter().copied()).mul_pow2(-(self.level as i32))
    }

    pub fn l1_norm(&self) -> DyadicRational {
        Self::sum(self.samples.iter().map(|v| v.abs())).mul_pow2(-(self.level as i32))
    }

    pub fn l2_norm_squared(&self) -> DyadicRational {
        Self::sum(self.samples.iter().map(|&v| v * v)).mul_pow2(-(self.level as i32))
    }

    pub fn linf_norm(&self) -> DyadicRational {
        self.samples
            .iter()
            .fold(DyadicRational::ZERO, |acc, v| acc.max(v.abs()))
    }

    /// Coset averages at every level: entry j holds 2^j values.
    fn average_pyramid(&self) -> Vec<Vec<DyadicRational>> {
        let level = self.level as usize;
        let mut pyramid = Vec::with_capacity(level + 1);
        pyramid.push(self.samples.clone());
        for j in (0..level).rev() {
            let finer: &Vec<DyadicRational> = &pyramid[pyramid.len() - 1];
            let half = 1usize << j;
            let coarser: Vec<DyadicRational> = (0..half)
                .map(|k| (finer[k] + finer[k + half]).mul_pow2(-1))
                .collect();
            pyramid.push(coarser);
        }
        pyramid.reverse();
        pyramid
    }

    /// Exact mean and per-block L^1 / L^inf / squared L^2 norms.
    pub fn block_norms(&self) -> ExactBlockNorms {
        let pyramid = self.average_pyramid();
        let mean = pyramid[0][0];
        let mut l1 = Vec::with_capacity(self.level as usize);
        let mut linf = Vec::with_capacity(self.level as usize);
        let mut l2_squared = Vec::with_capacity(self.level as usize);
        for j in 0..self.level as usize {
            let fine = &pyramid[j + 1];
            let coarse = &pyramid[j];
            let mask = coarse.len() - 1;
            let values: Vec<DyadicRational> = fine
                .iter()
                .enumerate()
                .map(|(k, &v)| v - coarse[k & mask])
                .collect();
            let measure = -(j as i32 + 1);
            l1.push(Self::sum(values.iter().map(|v| v.abs())).mul_pow2(measure));
            l2_squared.push(Self::sum(values.iter().map(|&v| v * v)).mul_pow2(measure));
            linf.push(
                values
                    .iter()
                    .fold(DyadicRational::ZERO, |acc, v| acc.max(v.abs())),
            );
        }
        ExactBlockNorms {
            mean,
            l1,
            linf,
            l2_squared,
        }
    }

    fn shifted_abs_diff_sum(&self, shift: u64) -> DyadicRational {
        let n = self.samples.len() as u64;
        let mask = n - 1;
        let mut acc = DyadicRational::ZERO;
        for k in 0..n {
            let diff = self.samples[((k + shift) & mask) as usize] - self.samples[k as usize];
            acc = acc + diff.abs();
        }
        acc
    }

    fn shifted_second_diff_sum(&self, shift: u64) -> DyadicRational {
        let n = self.samples.len() as u64;
        let mask = n - 1;
        let back = (n - shift) & mask;
        let mut acc = DyadicRational::ZERO;
        for k in 0..n {
            let fwd = self.samples[((k + shift) & mask) as usize];
            let bwd = self.samples[((k + back) & mask) as usize];
            let center = self.samples[k as usize].mul_pow2(1);
            acc = acc + (fwd + bwd - center).abs();
        }
        acc
    }

    fn best_shift(
        &self,
        shifts: impl Iterator<Item = u64>,
        numerator: impl Fn(&Self, u64) -> DyadicRational + Sync,
    ) -> (DyadicRational, u64) {
        let level = self.level as i32;
        let quotient = |y: u64| {
            let gamma = y.trailing_zeros() as i32;
            (numerator(self, y).mul_pow2(gamma - level), y)
        };
        let pick = |a: (DyadicRational, u64), b: (DyadicRational, u64)| match a.0.cmp(&b.0) {
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Equal => {
                if a.1 <= b.1 {
                    a
                } else {
                    b
                }
            }
        };

        #[cfg(feature = "parallel")]
        {
            shifts
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(quotient)
                .reduce(|| (DyadicRational::ZERO, u64::MAX), pick)
        }

        #[cfg(not(feature = "parallel"))]
        {
            shifts
                .map(quotient)
                .fold((DyadicRational::ZERO, u64::MAX), pick)
        }
    }

    /// Exhaustive translation-difference scan: the exact best constant in the
    /// L^1 difference-quotient bound, with the attaining shift.
    pub fn bv_seminorm_exact(&self) -> (DyadicRational, u64) {
        if self.level == 0 {
            return (DyadicRational::ZERO, 0);
        }
        self.best_shift(1..(1u64 << self.level), Self::shifted_abs_diff_sum)
    }

    /// Same scan restricted to power-of-two shifts: a lower bound.
    pub fn bv_seminorm_dyadic(&self) -> (DyadicRational, u64) {
        if self.level == 0 {
            return (DyadicRational::ZERO, 0);
        }
        self.best_shift(
            (0..self.level).map(|m| 1u64 << m),
            Self::shifted_abs_diff_sum,
        )
    }

    pub fn second_difference_modulus(&self) -> (DyadicRational, u64) {
        if self.level == 0 {
            return (DyadicRational::ZERO, 0);
        }
        self.best_shift(1..(1u64 << self.level), Self::shifted_second_diff_sum)
    }
}

/// Exact per-block norms of a decomposition.
#[derive(Debug, Clone)]
pub struct ExactBlockNorms {
    pub mean: DyadicRational,
    pub l1: Vec<DyadicRational>,
    pub linf: Vec<DyadicRational>,
    pub l2_squared: Vec<DyadicRational>,
}

impl ExactBlockNorms {
    /// sup_j 2^j ||block_j||_1, the homogeneous (s=1, q=inf, p=1) Besov norm.
    pub fn besov_pos(&self) -> DyadicRational {
        self.l1
            .iter()
            .enumerate()
            .fold(DyadicRational::ZERO, |acc, (j, v)| {
                acc.max(v.mul_pow2(j as i32))
            })
    }

    /// sup_j 2^{-j} ||block_j||_inf, the homogeneous (s=-1, q=inf, p=inf) Besov norm.
    pub fn besov_neg(&self) -> DyadicRational {
        self.linf
            .iter()
            .enumerate()
            .fold(DyadicRational::ZERO, |acc, (j, v)| {
                acc.max(v.mul_pow2(-(j as i32)))
            })
    }

    /// mean^2 + sum of squared block L^2 norms (the energy identity).
    pub fn parseval_l2_squared(&self) -> DyadicRational {
        self.l2_squared
            .iter()
            .fold(self.mean * self.mean, |acc, &v| acc + v)
    }
}
