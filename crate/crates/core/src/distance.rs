//! The distance function `dist(·,P)` and its norms.
//!
//! Grid estimates are certified through the 1-Lipschitz property of
//! `dist(·,P)`: on a cell with center `c` and half-diagonal `δ` the function
//! stays within `[dist(c,P) − δ, dist(c,P) + δ]`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;
use num_traits::Float;

use crate::geometry::{CellRelation, ConvexDomain};
use crate::mesh::Mesh;
use crate::points::{GridIndex, PointSet};
use crate::stats::CompensatedSum;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    GridCertified,
    MonteCarlo,
    Exact1d,
}

/// A norm value with a bracket. For grid-certified estimates the bracket is
/// rigorous; Monte Carlo brackets are three standard errors wide.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: NormMethod,
    /// Exponent; `f64::INFINITY` for the covering radius.
    pub gamma: f64,
    /// A cell center where the sampled distance was largest.
    pub witness: Option<Vec<f64>>,
}

impl NormEstimate {
    /// `∫_Ω dist^γ`, i.e. `value^γ` (finite γ only).
    pub fn integral(&self) -> f64 {
        self.value.powf(self.gamma)
    }
}

/// Exact `dist(x, P)` through the index.
pub fn dist_to_set(x: &[f64], index: &GridIndex) -> Result<f64> {
    index.nearest(x).map(|(_, d)| d)
}

/// Partial sums of a grid pass over a range of cells.
#[derive(Debug, Clone, Default)]
pub struct GridAccumulator {
    value: CompensatedSum,
    lower: CompensatedSum,
    upper: CompensatedSum,
    in_domain: usize,
    max_center: f64,
    max_upper: f64,
    witness: Option<Vec<f64>>,
}

impl GridAccumulator {
    pub fn merge(&mut self, other: GridAccumulator) {
        self.value.add(other.value.value());
        self.lower.add(other.lower.value());
        self.upper.add(other.upper.value());
        self.in_domain += other.in_domain;
        if other.witness.is_some() && (self.witness.is_none() || other.max_center > self.max_center) {
            self.max_center = other.max_center;
            self.witness = other.witness;
        }
        self.max_upper = self.max_upper.max(other.max_upper);
    }
}

/// Accumulate `dist^γ` contributions of the cells in `range`. With
/// `gamma = ∞` only the maxima are tracked.
pub fn accumulate_cells(
    domain: &ConvexDomain,
    index: &GridIndex,
    mesh: &Mesh,
    gamma: f64,
    range: Range<usize>,
) -> GridAccumulator {
    let delta = mesh.half_diagonal();
    let vol = mesh.cell_volume();
    let finite = gamma.is_finite();
    let mut acc = GridAccumulator::default();
    mesh.for_each_in(range, |center, lo, hi| {
        let relation = domain.cell_relation(lo, hi);
        if relation == CellRelation::Outside {
            return;
        }
        let d = index.distance(center);
        acc.max_upper = acc.max_upper.max(d + delta);
        if finite {
            acc.upper.add((d + delta).powf(gamma) * vol);
            if relation == CellRelation::Inside {
                acc.lower.add((d - delta).max(0.0).powf(gamma) * vol);
            }
        }
        if domain.contains_unchecked(center) {
            acc.in_domain += 1;
            if finite {
                acc.value.add(d.powf(gamma) * vol);
            }
            if acc.witness.is_none() || d > acc.max_center {
                acc.max_center = d;
                acc.witness = Some(center.to_vec());
            }
        }
    });
    acc
}

fn domain_mesh(domain: &ConvexDomain, index: &GridIndex, mesh: f64) -> Result<Mesh> {
    if index.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: index.dim() });
    }
    let (lo, hi) = domain.bounding_box();
    Mesh::over_box(lo, hi, mesh)
}

/// Turn an accumulated grid pass into a norm estimate.
pub fn finish(acc: GridAccumulator, gamma: f64, mesh: &Mesh) -> Result<NormEstimate> {
    if acc.in_domain == 0 {
        return Err(Error::MeshTooCoarse { mesh: mesh.half_diagonal() * 2.0 / (mesh.dim() as f64).sqrt() });
    }
    if gamma.is_finite() {
        let inv = 1.0 / gamma;
        Ok(NormEstimate {
            value: acc.value.value().powf(inv),
            lower: acc.lower.value().powf(inv),
            upper: acc.upper.value().powf(inv),
            method: NormMethod::GridCertified,
            gamma,
            witness: acc.witness,
        })
    } else {
        Ok(NormEstimate {
            value: acc.max_center,
            lower: acc.max_center,
            upper: acc.max_upper,
            method: NormMethod::GridCertified,
            gamma,
            witness: acc.witness,
        })
    }
}

/// Certified midpoint-grid estimate of `‖dist(·,P)‖_{L_γ(Ω)}`; `γ = ∞` is
/// routed to [`covering_radius`].
pub fn lgamma_norm(domain: &ConvexDomain, index: &GridIndex, gamma: f64, mesh: f64) -> Result<NormEstimate> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput("gamma must be positive".into()));
    }
    let grid = domain_mesh(domain, index, mesh)?;
    let mut acc = GridAccumulator::default();
    for range in grid.chunks() {
        acc.merge(accumulate_cells(domain, index, &grid, gamma, range));
    }
    finish(acc, gamma, &grid)
}

/// Covering radius `h_{P,Ω} = sup_Ω dist(·,P)`. The lower end is the largest
/// sampled distance at a cell center in `Ω`; the upper end adds the cell
/// half-diagonal over every cell that meets `Ω`.
pub fn covering_radius(domain: &ConvexDomain, index: &GridIndex, mesh: f64) -> Result<NormEstimate> {
    lgamma_norm(domain, index, f64::INFINITY, mesh)
}

/// Plain Monte Carlo estimate of `‖dist(·,P)‖_{L_γ(Ω)}` with a three
/// standard error bracket.
pub fn lgamma_norm_monte_carlo(
    domain: &ConvexDomain,
    index: &GridIndex,
    gamma: f64,
    samples: usize,
    seed: u64,
) -> Result<NormEstimate> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidInput("Monte Carlo norm needs finite gamma > 0".into()));
    }
    let mut rng = crate::rng::stream(seed, &[0x6d63]);
    let sample = domain.sample_uniform_with(&mut rng, samples.max(2))?;
    let vals: Vec<f64> = sample.points.iter().map(|x| index.distance(x).powf(gamma)).collect();
    let est = crate::stats::mean_estimate(&vals);
    let vol = domain.volume().value;
    let inv = 1.0 / gamma;
    let mean = est.mean * vol;
    let half = 3.0 * est.std_error * vol;
    Ok(NormEstimate {
        value: mean.powf(inv),
        lower: (mean - half).max(0.0).powf(inv),
        upper: (mean + half).powf(inv),
        method: NormMethod::MonteCarlo,
        gamma,
        witness: None,
    })
}

fn sorted_in_interval(a: f64, b: f64, points: &[f64]) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if !(a < b) {
        return Err(Error::InvalidInput("interval needs a < b".into()));
    }
    if points.iter().any(|p| !(a <= *p && *p <= b)) {
        return Err(Error::InvalidInput("points must lie in the closed interval".into()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// Exact `‖dist(·,P)‖_{L_γ(a,b)}` for points on a line. A boundary gap `g`
/// contributes `g^{γ+1}/(γ+1)`, an interior gap `2 (g/2)^{γ+1}/(γ+1)`.
pub fn lgamma_norm_1d_exact(a: f64, b: f64, points: &[f64], gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidInput("gamma must be finite and positive".into()));
    }
    Ok(integral_1d_exact(a, b, points, gamma)?.powf(1.0 / gamma))
}

/// `∫_a^b dist(x,P)^γ dx` in closed form.
pub fn integral_1d_exact(a: f64, b: f64, points: &[f64], gamma: f64) -> Result<f64> {
    let sorted = sorted_in_interval(a, b, points)?;
    let g1 = gamma + 1.0;
    let mut acc = CompensatedSum::new();
    acc.add((sorted[0] - a).powf(g1) / g1);
    for w in sorted.windows(2) {
        acc.add(2.0 * (0.5 * (w[1] - w[0])).powf(g1) / g1);
    }
    acc.add((b - sorted[sorted.len() - 1]).powf(g1) / g1);
    Ok(acc.value())
}

/// Exact covering radius of points on `(a, b)`.
pub fn covering_radius_1d_exact(a: f64, b: f64, points: &[f64]) -> Result<f64> {
    let sorted = sorted_in_interval(a, b, points)?;
    let mut h = (sorted[0] - a).max(b - sorted[sorted.len() - 1]);
    for w in sorted.windows(2) {
        h = h.max(0.5 * (w[1] - w[0]));
    }
    Ok(h)
}

/// Limit of `n^{γ/d} vol(Ω)^{-1} ∫_Ω dist(x,P_n)^γ dx` for uniform random
/// points: `(vol(Ω)/vol(B(0,1)))^{γ/d} Γ(1+γ/d)`.
pub fn limit_constant(dim: usize, gamma: f64, volume: f64) -> f64 {
    let d = dim as f64;
    (volume / crate::geometry::unit_ball_volume(dim)).powf(gamma / d) * libm::tgamma(1.0 + gamma / d)
}

/// Greedy `h`-separated subset: points are visited in ascending
/// lexicographic order and kept when no kept point lies within distance `h`.
/// The result is pairwise at least `h` apart and every input point is within
/// `h` of it. Returns indices into `points` in selection order.
pub fn greedy_separated_subset(points: &PointSet, h: f64) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput("separation h must be positive and finite".into()));
    }
    let dim = points.dim();
    let mut buckets: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    let mut chosen = Vec::new();
    let mut key = vec![0i64; dim];
    let mut probe = vec![0i64; dim];
    for i in points.lexicographic_order() {
        let x = points.point(i);
        for k in 0..dim {
            key[k] = (x[k] / h).floor() as i64;
        }
        let mut ok = true;
        // scan the 3^d neighbouring buckets
        let mut offset = vec![-1i64; dim];
        'scan: loop {
            for k in 0..dim {
                probe[k] = key[k] + offset[k];
            }
            if let Some(members) = buckets.get(&probe) {
                for &j in members {
                    let y = points.point(j);
                    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                    if d2 < h * h {
                        ok = false;
                        break 'scan;
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == dim {
                    break 'scan;
                }
                if offset[k] < 1 {
                    offset[k] += 1;
                    break;
                }
                offset[k] = -1;
                k += 1;
            }
        }
        if ok {
            buckets.entry(key.clone()).or_default().push(i);
            chosen.push(i);
        }
    }
    Ok(chosen)
}
