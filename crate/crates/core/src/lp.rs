//! Conditional-expectation projections onto coset filtrations, the martingale
//! difference blocks they generate, and the exact finite decomposition.
//!
//! `project(f, j)` averages f over each level-j coset. The blocks
//! `block(f, j) = project(f, j+1) - project(f, j)` telescope back to f, and a
//! level-J function has exactly J of them: projections at level J and beyond
//! reproduce f, so later blocks vanish and are not materialized.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::step::DyadicStepFunction;

/// The mean part together with all non-vanishing blocks of a level-J function.
#[derive(Debug, Clone, PartialEq)]
pub struct LPDecomposition {
    mean: f64,
    level: u32,
    blocks: Vec<DyadicStepFunction>,
}

impl LPDecomposition {
    /// The level-0 projection, i.e. the Haar integral of the function.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Blocks j = 0 .. J-1, each stored at full resolution J.
    pub fn blocks(&self) -> &[DyadicStepFunction] {
        &self.blocks
    }
}

/// Per-coset averages of f at every level at once: `pyramid[j][k]` is the mean
/// of f over the coset `k + 2^j Z_2`, built by repeated sibling averaging.
fn average_pyramid(f: &DyadicStepFunction) -> Vec<Vec<f64>> {
    let level = f.level() as usize;
    let mut pyramid: Vec<Vec<f64>> = Vec::with_capacity(level + 1);
    pyramid.push(f.samples().to_vec());
    for j in (0..level).rev() {
        let finer = &pyramid[pyramid.len() - 1];
        let half = 1usize << j;
        let coarser: Vec<f64> = (0..half)
            .map(|k| 0.5 * (finer[k] + finer[k + half]))
            .collect();
        pyramid.push(coarser);
    }
    pyramid.reverse(); // pyramid[j] now has 2^j entries
    pyramid
}

fn expand(level: u32, coarse: &[f64]) -> DyadicStepFunction {
    let mask = coarse.len() as u64 - 1;
    let samples = (0..(1u64 << level))
        .map(|k| coarse[(k & mask) as usize])
        .collect();
    DyadicStepFunction::new(level, samples).expect("expanded samples are finite")
}

/// Conditional expectation of f with respect to the level-j coset algebra,
/// returned at the resolution of f.
pub fn project(f: &DyadicStepFunction, j: u32) -> Result<DyadicStepFunction> {
    if j > f.level() {
        return Err(Error::ProjectionTooFine {
            requested: j,
            level: f.level(),
        });
    }
    if j == f.level() {
        return Ok(f.clone());
    }
    let pyramid = average_pyramid(f);
    Ok(expand(f.level(), &pyramid[j as usize]))
}

/// The martingale difference `project(f, j+1) - project(f, j)`.
pub fn block(f: &DyadicStepFunction, j: u32) -> Result<DyadicStepFunction> {
    if f.level() == 0 || j > f.level() - 1 {
        return Err(Error::BlockOutOfRange {
            requested: j,
            level: f.level(),
        });
    }
    let pyramid = average_pyramid(f);
    Ok(block_from_pyramid(f.level(), &pyramid, j))
}

fn block_from_pyramid(level: u32, pyramid: &[Vec<f64>], j: u32) -> DyadicStepFunction {
    let fine = &pyramid[j as usize + 1];
    let coarse = &pyramid[j as usize];
    let fine_mask = fine.len() as u64 - 1;
    let coarse_mask = coarse.len() as u64 - 1;
    let samples = (0..(1u64 << level))
        .map(|k| fine[(k & fine_mask) as usize] - coarse[(k & coarse_mask) as usize])
        .collect();
    DyadicStepFunction::new(level, samples).expect("block samples are finite")
}

/// Full decomposition: mean plus blocks 0 .. J-1.
pub fn decompose(f: &DyadicStepFunction) -> LPDecomposition {
    let level = f.level();
    let pyramid = average_pyramid(f);
    let mean = pyramid[0][0];

    #[cfg(feature = "parallel")]
    let blocks = (0..level)
        .into_par_iter()
        .map(|j| block_from_pyramid(level, &pyramid, j))
        .collect();

    #[cfg(not(feature = "parallel"))]
    let blocks = (0..level)
        .map(|j| block_from_pyramid(level, &pyramid, j))
        .collect();

    LPDecomposition {
        mean,
        level,
        blocks,
    }
}

/// Telescoping reconstruction: mean + sum of blocks.
pub fn reconstruct(dec: &LPDecomposition) -> Result<DyadicStepFunction> {
    let mut acc = DyadicStepFunction::constant(dec.level, dec.mean)?;
    for b in &dec.blocks {
        acc = acc.add(b)?;
    }
    Ok(acc)
}

/// Verifies S_j f(x) = (S_{j+1} f(x) + S_{j+1} f(x + 2^j)) / 2 at every sample,
/// the two-child splitting of each level-j coset.
pub fn sibling_identity_check(f: &DyadicStepFunction, j: u32) -> Result<bool> {
    if f.level() == 0 || j > f.level() - 1 {
        return Err(Error::BlockOutOfRange {
            requested: j,
            level: f.level(),
        });
    }
    let coarse = project(f, j)?;
    let fine = project(f, j + 1)?;
    let shifted = fine.translate_residue(1u64 << j);
    let scale = sup_scale(f);
    Ok(coarse
        .samples()
        .iter()
        .zip(fine.samples().iter().zip(shifted.samples()))
        .all(|(&c, (&a, &b))| (c - 0.5 * (a + b)).abs() <= 1e-12 * scale))
}

fn sup_scale(f: &DyadicStepFunction) -> f64 {
    f.samples().iter().fold(1.0f64, |acc, s| acc.max(s.abs()))
}

/// Both sides of the energy identity: `lhs` is the squared L^2 norm of f,
/// `rhs` is mean^2 plus the sum of squared block L^2 norms. Martingale
/// differences are orthogonal, so the two agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsevalCheck {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn parseval_check(f: &DyadicStepFunction) -> ParsevalCheck {
    let dec = decompose(f);
    let lhs = {
        let n = f.lp_norm(crate::step::Exponent::Finite(2.0)).expect("p=2");
        n * n
    };
    let rhs = dec.mean * dec.mean
        + dec
            .blocks
            .iter()
            .map(|b| {
                let n = b.lp_norm(crate::step::Exponent::Finite(2.0)).expect("p=2");
                n * n
            })
            .sum::<f64>();
    ParsevalCheck { lhs, rhs }
}
