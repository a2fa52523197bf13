//! Point sets and a uniform-bucket spatial index.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

/// A finite configuration of points in `R^d`, stored as a flat row-major
/// coordinate array.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("point dimension must be positive".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::InvalidInput("coordinate count is not a multiple of the dimension".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("point coordinates must be finite".into()));
        }
        Ok(Self { dim, coords })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, coords: Vec::new() }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            coords.extend_from_slice(r);
        }
        Self::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> core::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn push(&mut self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("point coordinates must be finite".into()));
        }
        self.coords.extend_from_slice(x);
        Ok(())
    }

    /// Subset by index list, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self { dim: self.dim, coords }
    }

    /// Indices sorted by lexicographic coordinate order (stable).
    pub fn lexicographic_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        order
    }

    /// Number of points that exactly repeat an earlier point.
    pub fn duplicate_count(&self) -> usize {
        let order = self.lexicographic_order();
        order.windows(2).filter(|w| self.point(w[0]) == self.point(w[1])).count()
    }

    /// Drops exact duplicates, keeping first occurrences in original order.
    pub fn deduplicated(&self) -> (Self, usize) {
        let order = self.lexicographic_order();
        let mut keep = vec![true; self.len()];
        let mut removed = 0;
        for w in order.windows(2) {
            if self.point(w[0]) == self.point(w[1]) {
                let later = w[0].max(w[1]);
                let earlier = w[0].min(w[1]);
                // the earlier index of a run may already be marked; keep the
                // smallest index of each run
                if keep[later] {
                    keep[later] = false;
                    removed += 1;
                } else {
                    keep[earlier] = false;
                    removed += 1;
                }
            }
        }
        let indices: Vec<usize> = (0..self.len()).filter(|&i| keep[i]).collect();
        (self.select(&indices), removed)
    }

    /// Axis-aligned bounding box, `None` when empty.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.is_empty() {
            return None;
        }
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        Some((lo, hi))
    }
}

/// Uniform bucket grid over the bounding box of a point set.
///
/// Points are stored bucket-contiguously. Queries outside the box are
/// answered exactly as well.
#[derive(Debug, Clone)]
pub struct GridIndex {
    dim: usize,
    cell_size: f64,
    origin: Vec<f64>,
    counts: Vec<usize>,
    strides: Vec<usize>,
    cell_start: Vec<u32>,
    order: Vec<u32>,
    sorted: Vec<f64>,
    len: usize,
}

const MAX_CELLS_PER_POINT: usize = 8;

impl GridIndex {
    /// Cell size defaults to the bounding-box diameter over `ceil(n^{1/d})`.
    pub fn new(points: &PointSet) -> Result<Self> {
        let (lo, hi) = points.bounding_box().ok_or(Error::EmptyPointSet)?;
        let diam = lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
        let per_axis = (points.len() as f64).powf(1.0 / points.dim() as f64).ceil().max(1.0);
        let cell = if diam > 0.0 { diam / per_axis } else { 1.0 };
        Self::with_cell_size(points, cell)
    }

    /// Build with an explicit cell size; the size is enlarged if the grid
    /// would exceed a few cells per point.
    pub fn with_cell_size(points: &PointSet, cell_size: f64) -> Result<Self> {
        if !(cell_size > 0.0) || !cell_size.is_finite() {
            return Err(Error::InvalidInput("cell size must be positive".into()));
        }
        let (lo, hi) = points.bounding_box().ok_or(Error::EmptyPointSet)?;
        let dim = points.dim();
        let n = points.len();
        let mut cell = cell_size;
        let counts = loop {
            let counts: Vec<usize> =
                lo.iter().zip(&hi).map(|(a, b)| ((b - a) / cell).floor() as usize + 1).collect();
            let total = counts.iter().try_fold(1usize, |acc, c| acc.checked_mul(*c));
            match total {
                Some(t) if t <= MAX_CELLS_PER_POINT * n + 64 => break counts,
                _ => cell *= 2.0,
            }
        };
        let mut strides = vec![1usize; dim];
        for k in 1..dim {
            strides[k] = strides[k - 1] * counts[k - 1];
        }
        let total: usize = counts.iter().product();
        let mut cell_of = Vec::with_capacity(n);
        let mut fill = vec![0u32; total + 1];
        for p in points.iter() {
            let mut flat = 0;
            for k in 0..dim {
                let c = (((p[k] - lo[k]) / cell).floor() as usize).min(counts[k] - 1);
                flat += c * strides[k];
            }
            cell_of.push(flat);
            fill[flat + 1] += 1;
        }
        for i in 0..total {
            fill[i + 1] += fill[i];
        }
        let cell_start = fill.clone();
        let mut cursor = fill;
        let mut order = vec![0u32; n];
        for (i, &c) in cell_of.iter().enumerate() {
            order[cursor[c] as usize] = i as u32;
            cursor[c] += 1;
        }
        let mut sorted = Vec::with_capacity(n * dim);
        for &i in &order {
            sorted.extend_from_slice(points.point(i as usize));
        }
        Ok(Self { dim, cell_size: cell, origin: lo, counts, strides, cell_start, order, sorted, len: n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    /// Point `i` in original indexing.
    pub fn point(&self, sorted_slot: usize) -> &[f64] {
        &self.sorted[sorted_slot * self.dim..(sorted_slot + 1) * self.dim]
    }

    #[inline]
    fn cell_coord(&self, k: usize, v: f64) -> usize {
        let c = ((v - self.origin[k]) / self.cell_size).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(self.counts[k] - 1)
        }
    }

    #[inline]
    fn scan_cell(&self, flat: usize, x: &[f64], best: &mut (f64, usize)) {
        let start = self.cell_start[flat] as usize;
        let end = self.cell_start[flat + 1] as usize;
        for slot in start..end {
            let p = &self.sorted[slot * self.dim..(slot + 1) * self.dim];
            let mut d2 = 0.0;
            for k in 0..self.dim {
                let t = p[k] - x[k];
                d2 += t * t;
            }
            if d2 < best.0 {
                *best = (d2, slot);
            }
        }
    }

    /// Nearest point: `(original index, distance)`. Exact.
    pub fn nearest(&self, x: &[f64]) -> Result<(usize, f64)> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if self.len == 0 {
            return Err(Error::EmptyPointSet);
        }
        let (d2, slot) = self.nearest_sq(x);
        Ok((self.order[slot] as usize, d2.sqrt()))
    }

    /// `dist(x, P)`; panics on dimension mismatch in debug builds only.
    #[inline]
    pub fn distance(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.nearest_sq(x).0.sqrt()
    }

    fn nearest_sq(&self, x: &[f64]) -> (f64, usize) {
        let dim = self.dim;
        let mut center = [0usize; 8];
        let mut center_vec;
        let center: &mut [usize] = if dim <= 8 {
            &mut center[..dim]
        } else {
            center_vec = vec![0usize; dim];
            &mut center_vec
        };
        for k in 0..dim {
            center[k] = self.cell_coord(k, x[k]);
        }
        let mut best = (f64::INFINITY, 0usize);
        let mut ring = 0usize;
        let mut lo = [0usize; 8];
        let mut hi = [0usize; 8];
        let mut cur = [0usize; 8];
        let (mut lo_v, mut hi_v, mut cur_v);
        let (lo, hi, cur): (&mut [usize], &mut [usize], &mut [usize]) = if dim <= 8 {
            (&mut lo[..dim], &mut hi[..dim], &mut cur[..dim])
        } else {
            lo_v = vec![0; dim];
            hi_v = vec![0; dim];
            cur_v = vec![0; dim];
            (&mut lo_v, &mut hi_v, &mut cur_v)
        };
        loop {
            let mut bound = f64::INFINITY;
            for k in 0..dim {
                lo[k] = center[k].saturating_sub(ring);
                hi[k] = (center[k] + ring).min(self.counts[k] - 1);
                if center[k] > ring {
                    let edge = self.origin[k] + (center[k] - ring) as f64 * self.cell_size;
                    bound = bound.min((x[k] - edge).max(0.0));
                }
                if center[k] + ring + 1 < self.counts[k] {
                    let edge = self.origin[k] + (center[k] + ring + 1) as f64 * self.cell_size;
                    bound = bound.min((edge - x[k]).max(0.0));
                }
            }
            // visit the shell at Chebyshev distance `ring`
            cur.copy_from_slice(lo);
            'cells: loop {
                let on_shell = ring == 0
                    || (0..dim).any(|k| cur[k] + ring == center[k] || cur[k] == center[k] + ring);
                if on_shell {
                    let flat: usize = (0..dim).map(|k| cur[k] * self.strides[k]).sum();
                    self.scan_cell(flat, x, &mut best);
                }
                let mut k = 0;
                loop {
                    if k == dim {
                        break 'cells;
                    }
                    if cur[k] < hi[k] {
                        cur[k] += 1;
                        break;
                    }
                    cur[k] = lo[k];
                    k += 1;
                }
            }
            if bound == f64::INFINITY || best.0 <= bound * bound {
                return best;
            }
            ring += 1;
        }
    }

    /// Calls `f(original_index, point, distance)` for every point with
    /// `‖p − x‖ < radius`.
    pub fn for_each_within(&self, x: &[f64], radius: f64, mut f: impl FnMut(usize, &[f64], f64)) {
        let dim = self.dim;
        let mut lo = vec![0usize; dim];
        let mut hi = vec![0usize; dim];
        for k in 0..dim {
            lo[k] = self.cell_coord(k, x[k] - radius);
            hi[k] = self.cell_coord(k, x[k] + radius);
        }
        let r2 = radius * radius;
        let mut cur = lo.clone();
        loop {
            let flat: usize = (0..dim).map(|k| cur[k] * self.strides[k]).sum();
            let start = self.cell_start[flat] as usize;
            let end = self.cell_start[flat + 1] as usize;
            for slot in start..end {
                let p = &self.sorted[slot * dim..(slot + 1) * dim];
                let d2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                if d2 < r2 {
                    f(self.order[slot] as usize, p, d2.sqrt());
                }
            }
            let mut k = 0;
            loop {
                if k == dim {
                    return;
                }
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
                k += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(points: &PointSet, x: &[f64]) -> f64 {
        points
            .iter()
            .map(|p| p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn three_four_five() {
        let p = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        let idx = GridIndex::new(&p).unwrap();
        assert_eq!(idx.nearest(&[3.0, 4.0]).unwrap(), (0, 5.0));
        assert_eq!(idx.distance(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn empty_set_is_rejected() {
        assert!(matches!(GridIndex::new(&PointSet::empty(2)), Err(Error::EmptyPointSet)));
    }

    #[test]
    fn duplicates_are_counted_and_removed() {
        let p = PointSet::from_rows(&[[0.0, 1.0], [0.5, 0.5], [0.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(p.duplicate_count(), 2);
        let (q, removed) = p.deduplicated();
        assert_eq!(removed, 2);
        assert_eq!(q, PointSet::from_rows(&[[0.0, 1.0], [0.5, 0.5]]).unwrap());
    }

    proptest! {
        #[test]
        fn nearest_matches_brute_force(
            pts in proptest::collection::vec((-1.0f64..2.0, -1.0f64..2.0), 1..120),
            queries in proptest::collection::vec((-3.0f64..4.0, -3.0f64..4.0), 1..20),
        ) {
            let rows: Vec<[f64; 2]> = pts.iter().map(|&(a, b)| [a, b]).collect();
            let set = PointSet::from_rows(&rows).unwrap();
            let idx = GridIndex::new(&set).unwrap();
            for (a, b) in queries {
                let x = [a, b];
                let (i, d) = idx.nearest(&x).unwrap();
                prop_assert_eq!(d, brute(&set, &x));
                prop_assert!((brute(&set.select(&[i]), &x) - d).abs() == 0.0);
            }
        }

        #[test]
        fn nearest_matches_brute_force_3d(
            pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.0f64..0.1), 1..80),
            q in (-0.5f64..1.5, -0.5f64..1.5, -0.5f64..1.5),
        ) {
            let rows: Vec<[f64; 3]> = pts.iter().map(|&(a, b, c)| [a, b, c]).collect();
            let set = PointSet::from_rows(&rows).unwrap();
            let idx = GridIndex::with_cell_size(&set, 0.05).unwrap();
            let x = [q.0, q.1, q.2];
            prop_assert_eq!(idx.nearest(&x).unwrap().1, brute(&set, &x));
        }

        #[test]
        fn ball_query_is_complete(
            pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..100),
            q in (0.0f64..1.0, 0.0f64..1.0),
            r in 0.01f64..0.6,
        ) {
            let rows: Vec<[f64; 2]> = pts.iter().map(|&(a, b)| [a, b]).collect();
            let set = PointSet::from_rows(&rows).unwrap();
            let idx = GridIndex::new(&set).unwrap();
            let x = [q.0, q.1];
            let mut found = Vec::new();
            idx.for_each_within(&x, r, |i, _, _| found.push(i));
            found.sort();
            let expected: Vec<usize> = (0..set.len())
                .filter(|&i| brute(&set.select(&[i]), &x) < r)
                .collect();
            prop_assert_eq!(found, expected);
        }
    }
}
