//! The blow-up family behind the failure of the improved Sobolev inequality:
//! functions assembled from prescribed martingale-difference blocks whose
//! L^2 mass grows like (j1 - j0) while the product of the BV seminorm and the
//! negative-smoothness Besov norm stays comparable to alpha * beta.
//!
//! Block j places the values +alpha 2^j and -alpha 2^j on the sibling cosets
//! k + 2^{j+1} Z_2 and k + 2^j + 2^{j+1} Z_2 for k = 0 .. N_j - 1. Pairing
//! siblings keeps every prescribed piece mean-zero on its parent coset, so the
//! decomposition of the assembled function returns each piece unchanged.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactStepFn;
use crate::norms::{bv_seminorm_detailed, BvMode};
use crate::step::{DyadicStepFunction, MAX_FUNCTION_LEVEL};

/// Family parameters. Valid when beta/alpha >= 4^{j0}, every off-ramp count
/// N_j = (beta/alpha) 2^{-j} for j0 < j <= j1 is a positive integer, and no
/// level asks for more sibling pairs than it has cosets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleParams {
    pub alpha: f64,
    pub beta: f64,
    pub j0: u32,
    pub j1: u32,
}

impl CounterexampleParams {
    pub fn new(alpha: f64, beta: f64, j0: u32, j1: u32) -> Result<Self> {
        let params = CounterexampleParams {
            alpha,
            beta,
            j0,
            j1,
        };
        params.block_profile()?;
        Ok(params)
    }

    /// The block-count profile N_0 .. N_{j1}, or the first violated condition.
    pub fn block_profile(&self) -> Result<BlockProfile> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must be positive and finite, got {}",
                self.alpha
            )));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidParams(format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        if self.j1 < self.j0 {
            return Err(Error::InvalidParams(format!(
                "j1 = {} must be at least j0 = {}",
                self.j1, self.j0
            )));
        }
        if self.j1 + 1 > MAX_FUNCTION_LEVEL {
            return Err(Error::LevelCap {
                level: self.j1 + 1,
                cap: MAX_FUNCTION_LEVEL,
            });
        }
        let admissible = self.alpha * (2.0 * self.j0 as f64).exp2();
        if self.beta < admissible {
            return Err(Error::InvalidParams(format!(
                "admissibility violated: 2^(2 j0) = {} exceeds beta/alpha = {}",
                (2.0 * self.j0 as f64).exp2(),
                self.beta / self.alpha
            )));
        }
        let mut counts = Vec::with_capacity(self.j1 as usize + 1);
        for j in 0..=self.j1 {
            if j <= self.j0 {
                counts.push(1u64 << j);
                continue;
            }
            let exact = self.beta / (self.alpha * (j as f64).exp2());
            let rounded = exact.round();
            if rounded < 1.0 || (exact - rounded).abs() > 1e-9 * exact.max(1.0) {
                return Err(Error::InvalidParams(format!(
                    "block count (beta/alpha) 2^-j = {exact} at j = {j} is not a positive integer"
                )));
            }
            let n = rounded as u64;
            if n > (1u64 << j) {
                return Err(Error::InvalidParams(format!(
                    "block count {n} at j = {j} exceeds the {} available sibling pairs",
                    1u64 << j
                )));
            }
            counts.push(n);
        }
        Ok(BlockProfile { counts })
    }

    /// Resolution of the built function: one level below the last block.
    pub fn level(&self) -> u32 {
        self.j1 + 1
    }
}

/// Number of sibling pairs populated at each block level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockProfile {
    pub counts: Vec<u64>,
}

/// The prescribed block at one level, as a full-resolution step function.
fn prescribed_block(params: &CounterexampleParams, n: u64, j: u32) -> DyadicStepFunction {
    let level = params.level();
    let magnitude = params.alpha * (j as f64).exp2();
    let child_mask = (1u64 << (j + 1)) - 1;
    let sibling = 1u64 << j;
    let samples = (0..(1u64 << level))
        .map(|k| {
            let class = k & child_mask;
            if class < n {
                magnitude
            } else if class >= sibling && class - sibling < n {
                -magnitude
            } else {
                0.0
            }
        })
        .collect();
    DyadicStepFunction::new(level, samples).expect("prescribed block is finite")
}

/// All prescribed blocks g_0 .. g_{j1}.
pub fn prescribed_blocks(params: &CounterexampleParams) -> Result<Vec<DyadicStepFunction>> {
    let profile = params.block_profile()?;
    Ok(profile
        .counts
        .iter()
        .enumerate()
        .map(|(j, &n)| prescribed_block(params, n, j as u32))
        .collect())
}

/// Assemble the family member: the sum of the prescribed blocks. Its mean is
/// zero and its decomposition returns exactly the prescribed blocks.
pub fn build(params: &CounterexampleParams) -> Result<DyadicStepFunction> {
    let blocks = prescribed_blocks(params)?;
    let mut f = DyadicStepFunction::constant(params.level(), 0.0)?;
    for g in &blocks {
        f = f.add(g)?;
    }
    Ok(f)
}

/// Closed-form norm predictions for a valid parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictedNorms {
    pub l2_squared: f64,
    pub besov_pos: f64,
    pub besov_neg: f64,
}

pub fn predicted_norms(params: &CounterexampleParams) -> Result<PredictedNorms> {
    let profile = params.block_profile()?;
    let alpha = params.alpha;
    let beta = params.beta;
    // sum over j of alpha^2 2^j N_j, evaluated from the actual profile
    let l2_squared = profile
        .counts
        .iter()
        .enumerate()
        .map(|(j, &n)| alpha * alpha * (j as f64).exp2() * n as f64)
        .sum::<f64>();
    // sup over j of 2^j alpha N_j: the ramp tops out at alpha 4^{j0}, the flat
    // branch (present only when j1 > j0) contributes beta
    let ramp_top = alpha * (2.0 * params.j0 as f64).exp2();
    let besov_pos = if params.j1 > params.j0 {
        ramp_top.max(beta)
    } else {
        ramp_top
    };
    Ok(PredictedNorms {
        l2_squared,
        besov_pos,
        besov_neg: alpha,
    })
}

/// Norms measured on the built function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComputedNorms {
    pub l2_squared: f64,
    pub besov_pos: f64,
    pub besov_neg: f64,
    pub bv: f64,
}

/// Full verification record for one family member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub params: CounterexampleParams,
    pub level: u32,
    pub computed: ComputedNorms,
    pub predicted: PredictedNorms,
    /// l2_squared / (bv * besov_neg): the quantity that grows without bound
    /// along the sweep family.
    pub ratio: f64,
}

impl CounterexampleReport {
    /// Checks computed-vs-predicted agreement, naming the first mismatch.
    pub fn check(&self, rel_tol: f64) -> Result<()> {
        let pairs = [
            (
                "l2_squared",
                self.computed.l2_squared,
                self.predicted.l2_squared,
            ),
            (
                "besov_pos",
                self.computed.besov_pos,
                self.predicted.besov_pos,
            ),
            (
                "besov_neg",
                self.computed.besov_neg,
                self.predicted.besov_neg,
            ),
        ];
        for (name, computed, predicted) in pairs {
            if (computed - predicted).abs() > rel_tol * predicted.abs().max(1.0) {
                return Err(Error::InvalidParams(format!(
                    "{name}: computed {computed} does not match predicted {predicted}"
                )));
            }
        }
        Ok(())
    }
}

/// Measure every norm of the family member and compare with the closed forms.
///
/// The block norms and the squared L^2 norm run through the exact
/// dyadic-rational path; the BV scan runs in doubles, which is itself exact
/// for dyadic alpha because every intermediate sum is an integer multiple of
/// a representable dyadic.
pub fn norm_report(params: &CounterexampleParams) -> Result<CounterexampleReport> {
    let f = build(params)?;
    let exact = ExactStepFn::from_function(&f);
    let norms = exact.block_norms();
    let computed = ComputedNorms {
        l2_squared: exact.l2_norm_squared().to_f64(),
        besov_pos: norms.besov_pos().to_f64(),
        besov_neg: norms.besov_neg().to_f64(),
        bv: bv_seminorm_detailed(&f, BvMode::Exact)?.value,
    };
    let predicted = predicted_norms(params)?;
    let ratio = computed.l2_squared / (computed.bv * computed.besov_neg);
    Ok(CounterexampleReport {
        params: *params,
        level: params.level(),
        computed,
        predicted,
        ratio,
    })
}

/// One row of the blow-up sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: u32,
    pub alpha: f64,
    pub beta: f64,
    pub j0: u32,
    pub j1: u32,
    pub level: u32,
    pub l2_squared: f64,
    pub besov_pos: f64,
    pub besov_neg: f64,
    pub bv: f64,
    pub ratio: f64,
}

/// CSV header for sweep output (fixed external schema).
pub const SWEEP_CSV_HEADER: &str =
    "m,alpha,beta,j0,j1,level,l2_squared,besov_pos,besov_neg,bv,ratio";

/// Default sweep family: alpha = 1, beta = 4^m, j0 = m, j1 = 2m. This sits on
/// the admissibility boundary, which makes every block count a power of two.
pub fn sweep_params(m: u32) -> Result<CounterexampleParams> {
    CounterexampleParams::new(1.0, (2.0 * m as f64).exp2(), m, 2 * m)
}

/// Run the sweep for m in [m_min, m_max]. The resolution 2m+1 of the largest
/// member must stay within the exhaustive-scan cap.
pub fn blowup_sweep(m_min: u32, m_max: u32) -> Result<Vec<SweepRow>> {
    if m_min < 1 || m_min > m_max {
        return Err(Error::InvalidParams(format!(
            "sweep range [{m_min}, {m_max}] is empty or starts below 1"
        )));
    }
    if 2 * m_max + 1 > crate::norms::DEFAULT_BV_CAP {
        return Err(Error::LevelCap {
            level: 2 * m_max + 1,
            cap: crate::norms::DEFAULT_BV_CAP,
        });
    }
    (m_min..=m_max)
        .map(|m| {
            let params = sweep_params(m)?;
            let report = norm_report(&params)?;
            report.check(1e-12)?;
            Ok(SweepRow {
                m,
                alpha: params.alpha,
                beta: params.beta,
                j0: params.j0,
                j1: params.j1,
                level: params.level(),
                l2_squared: report.computed.l2_squared,
                besov_pos: report.computed.besov_pos,
                besov_neg: report.computed.besov_neg,
                bv: report.computed.bv,
                ratio: report.ratio,
            })
        })
        .collect()
}

/// Sweep contract: the blow-up ratio strictly increases and dominates
/// (m + 1) / 4. Returns the first violation by name.
pub fn verify_sweep(rows: &[SweepRow]) -> Result<()> {
    for pair in rows.windows(2) {
        if pair[1].ratio <= pair[0].ratio {
            return Err(Error::InvalidParams(format!(
                "ratio not strictly increasing: m = {} gives {} after m = {} gave {}",
                pair[1].m, pair[1].ratio, pair[0].m, pair[0].ratio
            )));
        }
    }
    for row in rows {
        let floor = (row.m as f64 + 1.0) / 4.0;
        if row.ratio < floor {
            return Err(Error::InvalidParams(format!(
                "ratio {} at m = {} falls below the guaranteed floor {floor}",
                row.ratio, row.m
            )));
        }
    }
    Ok(())
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.m,
            r.alpha,
            r.beta,
            r.j0,
            r.j1,
            r.level,
            r.l2_squared,
            r.besov_pos,
            r.besov_neg,
            r.bv,
            r.ratio
        ));
    }
    out
}
