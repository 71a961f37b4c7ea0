//! Step functions on Z_2: constant on each level-J coset, stored as 2^J samples
//! in coset-index order, integrated against the unit-mass Haar measure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{residue_valuation, TruncatedDyadic};

/// Hard cap on resolution; 2^26 doubles is 512 MiB.
pub const MAX_FUNCTION_LEVEL: u32 = 26;

/// An integrability exponent in [1, inf].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn validated(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if p.is_finite() && p >= 1.0 => Ok(self),
            Exponent::Infinity => Ok(self),
            Exponent::Finite(p) => Err(Error::InvalidExponent(p)),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "oo" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidExponent(f64::NAN))?;
                Exponent::Finite(p).validated()
            }
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;

        impl serde::de::Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::Finite(v)
                    .validated()
                    .map_err(|_| E::custom(format!("exponent {v} not in [1, inf]")))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                v.parse()
                    .map_err(|_| E::custom(format!("bad exponent {v:?}")))
            }
        }

        deserializer.deserialize_any(ExponentVisitor)
    }
}

/// A real-valued function on Z_2 constant on each coset k + 2^J Z_2.
///
/// `samples[k]` is the value on the coset of residue k; each coset carries
/// Haar measure 2^{-J}.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicStepFunction {
    level: u32,
    samples: Vec<f64>,
}

impl DyadicStepFunction {
    pub fn new(level: u32, samples: Vec<f64>) -> Result<Self> {
        check_function_level(level)?;
        let expected = 1usize << level;
        if samples.len() != expected {
            return Err(Error::SampleCount {
                level,
                expected,
                actual: samples.len(),
            });
        }
        if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(DyadicStepFunction { level, samples })
    }

    pub fn constant(level: u32, value: f64) -> Result<Self> {
        check_function_level(level)?;
        DyadicStepFunction::new(level, vec![value; 1 << level])
    }

    /// Indicator of the coset `index + 2^coset_level Z_2`, sampled at `level`.
    pub fn indicator(coset_level: u32, index: u64, level: u32) -> Result<Self> {
        if coset_level > level {
            return Err(Error::CosetTooFine {
                coset: coset_level,
                point: level,
            });
        }
        check_function_level(level)?;
        let mask = low_mask(coset_level);
        let samples = (0..(1u64 << level))
            .map(|k| if k & mask == index { 1.0 } else { 0.0 })
            .collect();
        DyadicStepFunction::new(level, samples)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Haar integral: 2^{-J} times the sample sum.
    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * half_pow(self.level)
    }

    /// L^p norm for p in [1, inf].
    pub fn lp_norm(&self, p: Exponent) -> Result<f64> {
        match p.validated()? {
            Exponent::Infinity => Ok(self.samples.iter().fold(0.0f64, |acc, s| acc.max(s.abs()))),
            Exponent::Finite(p) => {
                // integer powers avoid powf in the common cases
                let sum: f64 = if p == 1.0 {
                    self.samples.iter().map(|s| s.abs()).sum()
                } else if p == 2.0 {
                    self.samples.iter().map(|s| s * s).sum()
                } else {
                    self.samples.iter().map(|s| s.abs().powf(p)).sum()
                };
                let scaled = sum * half_pow(self.level);
                Ok(if p == 1.0 {
                    scaled
                } else if p == 2.0 {
                    scaled.sqrt()
                } else {
                    scaled.powf(1.0 / p)
                })
            }
        }
    }

    /// x -> f(x + y). Requires y at the same resolution as f.
    pub fn translate(&self, y: TruncatedDyadic) -> Result<Self> {
        if y.level() != self.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: y.level(),
            });
        }
        Ok(self.translate_residue(y.residue()))
    }

    /// Translation by a raw residue (reduced mod 2^J).
    pub(crate) fn translate_residue(&self, shift: u64) -> Self {
        let n = self.samples.len() as u64;
        let shift = shift & (n - 1);
        let samples = (0..n)
            .map(|k| self.samples[((k + shift) & (n - 1)) as usize])
            .collect();
        DyadicStepFunction {
            level: self.level,
            samples,
        }
    }

    /// Re-expresses f at a finer level; values, integral and norms are unchanged.
    pub fn refine(&self, target: u32) -> Result<Self> {
        if target < self.level {
            return Err(Error::CoarserThanSource {
                from: self.level,
                target,
            });
        }
        check_function_level(target)?;
        let mask = low_mask(self.level);
        let samples = (0..(1u64 << target))
            .map(|k| self.samples[(k & mask) as usize])
            .collect();
        Ok(DyadicStepFunction {
            level: target,
            samples,
        })
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        DyadicStepFunction::new(self.level, self.samples.iter().map(|s| s * c).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Rounds every sample to the nearest multiple of 2^-fractional_bits.
    ///
    /// Full-precision doubles carry 53-bit mantissas at arbitrary scales;
    /// rounding to a fixed dyadic grid keeps the exact-arithmetic path well
    /// within its integer range. Exact for |s| < 2^(53 - fractional_bits).
    pub fn quantize(&self, fractional_bits: u32) -> Result<Self> {
        let scale = (fractional_bits as f64).exp2();
        let samples = self
            .samples
            .iter()
            .map(|s| (s * scale).round() / scale)
            .collect();
        DyadicStepFunction::new(self.level, samples)
    }

    /// Sample-wise combination; the coarser operand is refined first.
    pub fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let target = self.level.max(other.level);
        let left = self.refine(target)?;
        let right = other.refine(target)?;
        let samples = left
            .samples
            .iter()
            .zip(&right.samples)
            .map(|(&a, &b)| op(a, b))
            .collect();
        DyadicStepFunction::new(target, samples)
    }
}

fn check_function_level(level: u32) -> Result<()> {
    if level > MAX_FUNCTION_LEVEL {
        return Err(Error::LevelCap {
            level,
            cap: MAX_FUNCTION_LEVEL,
        });
    }
    Ok(())
}

fn low_mask(level: u32) -> u64 {
    if level == 0 {
        0
    } else {
        (1u64 << level) - 1
    }
}

pub(crate) fn half_pow(level: u32) -> f64 {
    (-(level as f64)).exp2()
}

/// Level-J truncation of x -> log2 |x|_2 = -valuation(x).
///
/// On every coset that does not contain 0 the valuation is constant and the
/// sample is exact. On the coset of 0 the function is unbounded, so the sample
/// is its average over the coset, -(J + 1); this is the level-J conditional
/// expectation of the full function, which keeps every block of the truncation
/// identical to the corresponding block of the full function.
pub fn sample_log_norm(level: u32) -> Result<DyadicStepFunction> {
    if level == 0 {
        return Err(Error::LevelCap { level: 0, cap: 0 });
    }
    check_function_level(level)?;
    let samples = (0..(1u64 << level))
        .map(|k| {
            if k == 0 {
                -(level as f64) - 1.0
            } else {
                -(k.trailing_zeros() as f64)
            }
        })
        .collect();
    DyadicStepFunction::new(level, samples)
}

/// Pointwise-sampled variant of [`sample_log_norm`]: the coset of 0 takes the
/// clamped valuation J instead of the coset average. Converges to the same
/// function as J grows but its blocks carry an O(2^{j-J}) truncation error.
pub fn sample_log_norm_pointwise(level: u32) -> Result<DyadicStepFunction> {
    if level == 0 {
        return Err(Error::LevelCap { level: 0, cap: 0 });
    }
    check_function_level(level)?;
    let samples = (0..(1u64 << level))
        .map(|k| -(residue_valuation(k, level).expect("in range") as f64))
        .collect();
    DyadicStepFunction::new(level, samples)
}

/// Level-J truncation of x -> 1/|x|_2 = 2^{valuation(x)} with the valuation
/// clamped at `cap`. The full function is not integrable, so this is a stand-in
/// for exploration only; `cap >= level` is required, making the clamp inert on
/// valid inputs.
pub fn sample_reciprocal_norm(level: u32, cap: u32) -> Result<DyadicStepFunction> {
    if level == 0 {
        return Err(Error::LevelCap { level: 0, cap: 0 });
    }
    if cap < level {
        return Err(Error::InvalidParams(format!(
            "reciprocal-norm cap {cap} must be at least the level {level}"
        )));
    }
    check_function_level(level)?;
    let samples = (0..(1u64 << level))
        .map(|k| {
            let v = residue_valuation(k, level).expect("in range").min(cap);
            (v as f64).exp2()
        })
        .collect();
    DyadicStepFunction::new(level, samples)
}

/// Serialized form of a step function: the shared on-disk schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionFile {
    pub level: u32,
    pub samples: Vec<f64>,
}

impl From<&DyadicStepFunction> for FunctionFile {
    fn from(f: &DyadicStepFunction) -> Self {
        FunctionFile {
            level: f.level(),
            samples: f.samples().to_vec(),
        }
    }
}

impl TryFrom<FunctionFile> for DyadicStepFunction {
    type Error = Error;

    fn try_from(file: FunctionFile) -> Result<Self> {
        DyadicStepFunction::new(file.level, file.samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::TruncatedDyadic;
    use proptest::prelude::*;

    fn func(level: u32, samples: &[f64]) -> DyadicStepFunction {
        DyadicStepFunction::new(level, samples.to_vec()).unwrap()
    }

    #[test]
    fn integral_of_constant() {
        for level in 0..5 {
            let f = DyadicStepFunction::constant(level, 2.75).unwrap();
            assert_eq!(f.integral(), 2.75);
        }
    }

    #[test]
    fn integral_of_coset_indicator_is_its_measure() {
        let f = DyadicStepFunction::indicator(1, 0, 3).unwrap();
        assert_eq!(f.integral(), 0.5);
    }

    #[test]
    fn integral_of_small_example() {
        assert_eq!(func(2, &[1.0, 2.0, 3.0, 4.0]).integral(), 2.5);
    }

    #[test]
    fn lp_norm_of_constant_is_its_magnitude() {
        let f = DyadicStepFunction::constant(3, -1.5).unwrap();
        for p in [
            Exponent::Finite(1.0),
            Exponent::Finite(2.0),
            Exponent::Finite(3.7),
            Exponent::Infinity,
        ] {
            assert!((f.lp_norm(p).unwrap() - 1.5).abs() < 1e-15);
        }
    }

    #[test]
    fn lp_norm_of_indicator_matches_measure_power() {
        // indicator of a level-j coset has L^p norm 2^{-j/p}
        for (j, p) in [(1u32, 1.0f64), (1, 2.0), (2, 3.0)] {
            let f = DyadicStepFunction::indicator(j, 0, 4).unwrap();
            let expect = (-(j as f64) / p).exp2();
            assert!((f.lp_norm(Exponent::Finite(p)).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn l2_norm_of_plus_minus_one() {
        assert_eq!(
            func(1, &[1.0, -1.0])
                .lp_norm(Exponent::Finite(2.0))
                .unwrap(),
            1.0
        );
    }

    #[test]
    fn lp_norm_rejects_p_below_one() {
        assert!(func(1, &[1.0, 2.0]).lp_norm(Exponent::Finite(0.5)).is_err());
    }

    #[test]
    fn translate_shifts_indices() {
        let f = func(2, &[10.0, 20.0, 30.0, 40.0]);
        let y1 = TruncatedDyadic::new(2, 1).unwrap();
        let y2 = TruncatedDyadic::new(2, 2).unwrap();
        assert_eq!(
            f.translate(y1).unwrap().samples(),
            &[20.0, 30.0, 40.0, 10.0]
        );
        assert_eq!(
            f.translate(y2).unwrap().samples(),
            &[30.0, 40.0, 10.0, 20.0]
        );
        let zero = TruncatedDyadic::new(2, 0).unwrap();
        assert_eq!(f.translate(zero).unwrap(), f);
    }

    #[test]
    fn translate_rejects_level_mismatch() {
        let f = func(2, &[1.0, 2.0, 3.0, 4.0]);
        let y = TruncatedDyadic::new(3, 1).unwrap();
        assert!(f.translate(y).is_err());
    }

    #[test]
    fn refine_repeats_samples_per_subcoset() {
        let f = DyadicStepFunction::indicator(1, 0, 1).unwrap();
        let fine = f.refine(3).unwrap();
        for k in 0..8u64 {
            let expect = if k % 2 == 0 { 1.0 } else { 0.0 };
            assert_eq!(fine.samples()[k as usize], expect);
        }
        assert_eq!(f.refine(1).unwrap(), f);
        assert!(f.refine(0).is_err());
    }

    #[test]
    fn zip_with_auto_refines() {
        let coarse = DyadicStepFunction::constant(0, 1.0).unwrap();
        let fine = func(2, &[1.0, 2.0, 3.0, 4.0]);
        let sum = coarse.add(&fine).unwrap();
        assert_eq!(sum.samples(), &[2.0, 3.0, 4.0, 5.0]);
        assert_eq!(sum.level(), 2);
    }

    #[test]
    fn sub_self_is_zero_and_scale_works() {
        let f = func(1, &[1.0, -1.0]);
        assert_eq!(f.sub(&f).unwrap().samples(), &[0.0, 0.0]);
        assert_eq!(f.scale(2.0).unwrap().samples(), &[2.0, -2.0]);
        let zero = DyadicStepFunction::constant(1, 0.0).unwrap();
        assert_eq!(f.add(&zero).unwrap(), f);
    }

    #[test]
    fn rejects_wrong_sample_count_and_non_finite() {
        assert!(DyadicStepFunction::new(2, vec![1.0; 3]).is_err());
        assert!(DyadicStepFunction::new(1, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn log_norm_samples_at_level_two() {
        // values -gamma(k) away from 0; the 0-coset takes the coset average -(J+1)
        let f = sample_log_norm(2).unwrap();
        assert_eq!(f.samples(), &[-3.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn log_norm_pointwise_samples_at_level_two() {
        let f = sample_log_norm_pointwise(2).unwrap();
        assert_eq!(f.samples(), &[-2.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn log_norm_integral_is_exactly_minus_one() {
        // conditional-expectation truncation preserves the full integral
        for level in 1..12 {
            let f = sample_log_norm(level).unwrap();
            assert!((f.integral() + 1.0).abs() < 1e-12, "level {level}");
        }
    }

    #[test]
    fn log_norm_pointwise_integral_matches_finite_sum() {
        // brute-force oracle: sum of -m * 2^{-m-1} over m < J, plus the clamped
        // 0-coset contribution -J * 2^{-J}; closed form -(1 - 2^{-J})
        for level in 1u32..12 {
            let mut oracle = -(level as f64) * half_pow(level);
            for m in 0..level {
                oracle -= m as f64 * half_pow(m + 1);
            }
            let f = sample_log_norm_pointwise(level).unwrap();
            assert!((f.integral() - oracle).abs() < 1e-12);
            let closed = -(1.0 - half_pow(level));
            assert!((oracle - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn reciprocal_norm_samples_at_level_two() {
        let f = sample_reciprocal_norm(2, 2).unwrap();
        assert_eq!(f.samples(), &[4.0, 1.0, 2.0, 1.0]);
        assert!(sample_reciprocal_norm(3, 2).is_err());
    }

    #[test]
    fn function_file_roundtrip() {
        let f = func(2, &[0.5, -0.25, 1.0, 0.0]);
        let json = serde_json::to_string(&FunctionFile::from(&f)).unwrap();
        let parsed: FunctionFile = serde_json::from_str(&json).unwrap();
        let back = DyadicStepFunction::try_from(parsed).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn function_file_rejects_bad_length() {
        let parsed: FunctionFile =
            serde_json::from_str(r#"{"level": 2, "samples": [1.0, 2.0]}"#).unwrap();
        assert!(DyadicStepFunction::try_from(parsed).is_err());
    }

    proptest! {
        #[test]
        fn translation_preserves_integral_and_norms(
            samples in proptest::collection::vec(-100.0f64..100.0, 8),
            shift in 0u64..8,
        ) {
            let f = func(3, &samples);
            let y = TruncatedDyadic::new(3, shift).unwrap();
            let g = f.translate(y).unwrap();
            prop_assert!((f.integral() - g.integral()).abs() < 1e-12);
            for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
                prop_assert!((f.lp_norm(p).unwrap() - g.lp_norm(p).unwrap()).abs() < 1e-12);
            }
        }

        #[test]
        fn refine_preserves_integral_and_norms(
            samples in proptest::collection::vec(-100.0f64..100.0, 4),
            extra in 0u32..3,
        ) {
            let f = func(2, &samples);
            let g = f.refine(2 + extra).unwrap();
            prop_assert!((f.integral() - g.integral()).abs() < 1e-12);
            for p in [Exponent::Finite(1.0), Exponent::Finite(1.7), Exponent::Finite(2.0), Exponent::Infinity] {
                let a = f.lp_norm(p).unwrap();
                let b = g.lp_norm(p).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }

        #[test]
        fn lp_norm_bounded_by_sup_norm(
            samples in proptest::collection::vec(-100.0f64..100.0, 8),
            p in 1.0f64..6.0,
        ) {
            let f = func(3, &samples);
            let lp = f.lp_norm(Exponent::Finite(p)).unwrap();
            let sup = f.lp_norm(Exponent::Infinity).unwrap();
            prop_assert!(lp <= sup * (1.0 + 1e-12));
        }

        #[test]
        fn translations_compose_through_addition(
            samples in proptest::collection::vec(-100.0f64..100.0, 8),
            a in 0u64..8,
            b in 0u64..8,
        ) {
            let f = func(3, &samples);
            let ya = TruncatedDyadic::new(3, a).unwrap();
            let yb = TruncatedDyadic::new(3, b).unwrap();
            let two_step = f.translate(ya).unwrap().translate(yb).unwrap();
            let one_step = f.translate(ya.add(yb).unwrap()).unwrap();
            prop_assert_eq!(two_step, one_step);
        }
    }
}
