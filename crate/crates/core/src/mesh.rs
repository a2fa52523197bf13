//! Uniform cell grids over axis-aligned boxes, addressed by flat index so
//! that work can be split into fixed chunks.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;
use num_traits::Float;

use crate::{Error, Result};

/// Number of cells per work chunk. Sequential and parallel reductions both
/// accumulate chunk by chunk in index order, so their results coincide.
pub const CHUNK: usize = 4096;

const MAX_CELLS: usize = 1 << 31;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    lo: Vec<f64>,
    width: Vec<f64>,
    counts: Vec<usize>,
    total: usize,
}

impl Mesh {
    /// Tiles `[lo, hi]` with `ceil(extent / mesh)` cells per axis, so every
    /// cell width is at most `mesh`.
    pub fn over_box(lo: &[f64], hi: &[f64], mesh: f64) -> Result<Self> {
        if !(mesh > 0.0) || !mesh.is_finite() {
            return Err(Error::InvalidInput("mesh width must be positive and finite".into()));
        }
        let mut counts = Vec::with_capacity(lo.len());
        let mut width = Vec::with_capacity(lo.len());
        let mut total: usize = 1;
        for (a, b) in lo.iter().zip(hi) {
            let extent = b - a;
            let c = ((extent / mesh).ceil() as usize).max(1);
            total = total
                .checked_mul(c)
                .filter(|t| *t <= MAX_CELLS)
                .ok_or_else(|| Error::InvalidInput("mesh too fine: cell count overflow".into()))?;
            counts.push(c);
            width.push(extent / c as f64);
        }
        Ok(Self { lo: lo.to_vec(), width, counts, total })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn cell_volume(&self) -> f64 {
        self.width.iter().product()
    }

    /// Half the cell diagonal, the Lipschitz certificate radius.
    pub fn half_diagonal(&self) -> f64 {
        0.5 * self.width.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn chunks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.total).step_by(CHUNK).map(move |s| s..(s + CHUNK).min(self.total))
    }

    /// Calls `f(center, cell_lo, cell_hi)` for each cell of `range` in order.
    pub fn for_each_in(&self, range: Range<usize>, mut f: impl FnMut(&[f64], &[f64], &[f64])) {
        let dim = self.dim();
        if range.is_empty() {
            return;
        }
        let mut idx = vec![0usize; dim];
        let mut rest = range.start;
        for k in 0..dim {
            idx[k] = rest % self.counts[k];
            rest /= self.counts[k];
        }
        let mut center = vec![0.0; dim];
        let mut clo = vec![0.0; dim];
        let mut chi = vec![0.0; dim];
        for _ in range {
            for k in 0..dim {
                clo[k] = self.lo[k] + idx[k] as f64 * self.width[k];
                chi[k] = clo[k] + self.width[k];
                center[k] = clo[k] + 0.5 * self.width[k];
            }
            f(&center, &clo, &chi);
            for k in 0..dim {
                idx[k] += 1;
                if idx[k] < self.counts[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    pub fn for_each(&self, f: impl FnMut(&[f64], &[f64], &[f64])) {
        self.for_each_in(0..self.total, f)
    }
}
