//! Bounded convex domains `Ω ⊂ R^d`.
//!
//! All domains are open: membership tests are strict. Three shapes are
//! supported: axis-aligned boxes, Euclidean balls, and polytopes given as a
//! finite intersection of open half-spaces `a·x < b`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;
use rand::Rng;

use crate::linalg::solve_dense;
use crate::points::PointSet;
use crate::rng::StreamRng;
use crate::{Error, Result};

const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// Unit normals (row-major `m × d`) and offsets: `Ω = {x : n_i·x < b_i}`.
    Polytope { normals: Vec<f64>, offsets: Vec<f64> },
}

/// A bounded convex open domain with its cached bounding box, inradius and
/// diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDomain {
    dim: usize,
    shape: Shape,
    bbox_lo: Vec<f64>,
    bbox_hi: Vec<f64>,
    incenter: Vec<f64>,
    inradius: f64,
    diameter: f64,
}

/// Interior cone parameters of a convex domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeParameters {
    /// Cone radius, the inradius clamped to at most one.
    pub radius: f64,
    /// Opening angle in radians.
    pub angle: f64,
    /// Every cone of radius `ρ` contains a ball of radius `ball_factor * ρ`.
    pub ball_factor: f64,
}

impl ConeParameters {
    /// `θ = 2·arcsin(r / (2·diam))` and `c_θ = sin θ / (1 + sin θ)`.
    pub fn from_inradius(inradius: f64, diameter: f64) -> Self {
        let radius = inradius.min(1.0);
        let angle = 2.0 * (radius / (2.0 * diameter)).asin();
        let s = angle.sin();
        Self { radius, angle, ball_factor: s / (1.0 + s) }
    }
}

/// Position of an axis-aligned cell relative to a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellRelation {
    /// The closed cell lies in the closure of the domain.
    Inside,
    /// The cell interior does not meet the domain.
    Outside,
    /// Neither could be certified.
    Boundary,
}

/// Volume value with its Monte Carlo standard error (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Volume {
    pub value: f64,
    pub std_error: f64,
}

/// Result of rejection sampling.
#[derive(Debug, Clone)]
pub struct UniformSample {
    pub points: PointSet,
    pub acceptance_rate: f64,
}

/// Volume of the unit ball in `R^d`, via `V_d = 2π/d · V_{d−2}`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    let mut v = if dim % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if dim % 2 == 0 { 2 } else { 3 };
    while k <= dim {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

impl ConvexDomain {
    /// Open box `(lo_1,hi_1) × … × (lo_d,hi_d)`.
    pub fn cuboid(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::InvalidInput("box needs at least one dimension".into()));
        }
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidInput("box needs finite lo < hi on every axis".into()));
        }
        let dim = lo.len();
        let incenter: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let inradius = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (b - a)).fold(f64::INFINITY, f64::min);
        let diameter = lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
        Ok(Self {
            dim,
            bbox_lo: lo.clone(),
            bbox_hi: hi.clone(),
            shape: Shape::Box { lo, hi },
            incenter,
            inradius,
            diameter,
        })
    }

    /// The unit cube `(0,1)^d`.
    pub fn unit_cube(dim: usize) -> Self {
        Self::cuboid(vec![0.0; dim], vec![1.0; dim]).expect("unit cube is valid")
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidInput("ball needs at least one dimension".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("ball needs a finite center and radius > 0".into()));
        }
        Ok(Self {
            dim: center.len(),
            bbox_lo: center.iter().map(|c| c - radius).collect(),
            bbox_hi: center.iter().map(|c| c + radius).collect(),
            incenter: center.clone(),
            inradius: radius,
            diameter: 2.0 * radius,
            shape: Shape::Ball { center, radius },
        })
    }

    /// Intersection of open half-spaces `a_i·x < b_i`. The polytope must be
    /// bounded with nonempty interior; its Chebyshev center becomes the
    /// certified interior point.
    pub fn polytope(halfspaces: &[(Vec<f64>, f64)]) -> Result<Self> {
        let dim = halfspaces.first().map(|(a, _)| a.len()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::InvalidInput("polytope needs at least one half-space".into()));
        }
        let mut normals = Vec::with_capacity(halfspaces.len() * dim);
        let mut offsets = Vec::with_capacity(halfspaces.len());
        for (a, b) in halfspaces {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() || !b.is_finite() {
                return Err(Error::InvalidInput("half-space normal must be finite and nonzero".into()));
            }
            normals.extend(a.iter().map(|v| v / norm));
            offsets.push(b / norm);
        }
        if !is_bounded(&normals, dim) {
            return Err(Error::InvalidInput("polytope is unbounded".into()));
        }
        let (incenter, inradius) = chebyshev_center(&normals, &offsets, dim)
            .ok_or_else(|| Error::InvalidInput("polytope has empty interior".into()))?;
        if !(inradius > 0.0) {
            return Err(Error::InvalidInput("polytope has empty interior".into()));
        }
        let vertices = polytope_vertices(&normals, &offsets, dim);
        if vertices.is_empty() {
            return Err(Error::InvalidInput("polytope has no vertices".into()));
        }
        let mut bbox_lo = vec![f64::INFINITY; dim];
        let mut bbox_hi = vec![f64::NEG_INFINITY; dim];
        for v in vertices.chunks_exact(dim) {
            for k in 0..dim {
                bbox_lo[k] = bbox_lo[k].min(v[k]);
                bbox_hi[k] = bbox_hi[k].max(v[k]);
            }
        }
        let mut diameter = 0.0f64;
        for (i, u) in vertices.chunks_exact(dim).enumerate() {
            for v in vertices.chunks_exact(dim).skip(i + 1) {
                diameter = diameter.max(distance(u, v));
            }
        }
        Ok(Self {
            dim,
            shape: Shape::Polytope { normals, offsets },
            bbox_lo,
            bbox_hi,
            incenter,
            inradius,
            diameter,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn bounding_box(&self) -> (&[f64], &[f64]) {
        (&self.bbox_lo, &self.bbox_hi)
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Exact inradius for boxes and balls, Chebyshev radius for polytopes.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    /// Center of a largest inscribed ball; doubles as the certified interior point.
    pub fn incenter(&self) -> &[f64] {
        &self.incenter
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// Strict membership in the open domain.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.contains_unchecked(x))
    }

    /// [`contains`](Self::contains) without the dimension check.
    #[inline]
    pub fn contains_unchecked(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| a < v && v < b),
            Shape::Ball { center, radius } => {
                x.iter().zip(center).map(|(v, c)| (v - c) * (v - c)).sum::<f64>() < radius * radius
            }
            Shape::Polytope { normals, offsets } => normals
                .chunks_exact(self.dim)
                .zip(offsets)
                .all(|(a, b)| dot(a, x) < *b),
        }
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    /// Exact inside the domain for every shape.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (a, b))| (v - a).min(b - v))
                .fold(f64::INFINITY, f64::min),
            Shape::Ball { center, radius } => radius - distance(x, center),
            Shape::Polytope { normals, offsets } => normals
                .chunks_exact(self.dim)
                .zip(offsets)
                .map(|(a, b)| b - dot(a, x))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Classify the closed axis-aligned cell `[lo, hi]`.
    pub fn cell_relation(&self, lo: &[f64], hi: &[f64]) -> CellRelation {
        match &self.shape {
            Shape::Box { lo: a, hi: b } => {
                let mut inside = true;
                for k in 0..self.dim {
                    if hi[k] <= a[k] || lo[k] >= b[k] {
                        return CellRelation::Outside;
                    }
                    if lo[k] < a[k] || hi[k] > b[k] {
                        inside = false;
                    }
                }
                if inside {
                    CellRelation::Inside
                } else {
                    CellRelation::Boundary
                }
            }
            Shape::Ball { center, radius } => {
                let mut near = 0.0;
                let mut far = 0.0;
                for k in 0..self.dim {
                    let c = center[k];
                    let dn = if c < lo[k] {
                        lo[k] - c
                    } else if c > hi[k] {
                        c - hi[k]
                    } else {
                        0.0
                    };
                    let df = (c - lo[k]).abs().max((hi[k] - c).abs());
                    near += dn * dn;
                    far += df * df;
                }
                let r2 = radius * radius;
                if far <= r2 {
                    CellRelation::Inside
                } else if near >= r2 {
                    CellRelation::Outside
                } else {
                    CellRelation::Boundary
                }
            }
            Shape::Polytope { normals, offsets } => {
                let mut inside = true;
                for (a, b) in normals.chunks_exact(self.dim).zip(offsets) {
                    let mut max = 0.0;
                    let mut min = 0.0;
                    for k in 0..self.dim {
                        let (p, q) = if a[k] >= 0.0 { (hi[k], lo[k]) } else { (lo[k], hi[k]) };
                        max += a[k] * p;
                        min += a[k] * q;
                    }
                    if min >= *b {
                        return CellRelation::Outside;
                    }
                    if max > *b {
                        inside = false;
                    }
                }
                if inside {
                    CellRelation::Inside
                } else {
                    CellRelation::Boundary
                }
            }
        }
    }

    /// Exact for boxes and balls; Monte Carlo (2^20 bounding-box samples,
    /// fixed seed) for polytopes.
    pub fn volume(&self) -> Volume {
        match &self.shape {
            Shape::Box { lo, hi } => {
                Volume { value: lo.iter().zip(hi).map(|(a, b)| b - a).product(), std_error: 0.0 }
            }
            Shape::Ball { radius, .. } => Volume {
                value: unit_ball_volume(self.dim) * radius.powi(self.dim as i32),
                std_error: 0.0,
            },
            Shape::Polytope { .. } => self.volume_monte_carlo(1 << 20, 0x005e_ed0f_7e1e),
        }
    }

    /// Hit-or-miss volume estimate over the bounding box.
    pub fn volume_monte_carlo(&self, samples: usize, seed: u64) -> Volume {
        let mut rng = crate::rng::stream(seed, &[0x766f_6c75_6d65]);
        let bbox_vol: f64 = self.bbox_lo.iter().zip(&self.bbox_hi).map(|(a, b)| b - a).product();
        let mut x = vec![0.0; self.dim];
        let mut hits = 0usize;
        for _ in 0..samples {
            self.draw_in_bbox(&mut rng, &mut x);
            if self.contains_unchecked(&x) {
                hits += 1;
            }
        }
        let frac = hits as f64 / samples as f64;
        Volume {
            value: bbox_vol * frac,
            std_error: bbox_vol * (frac * (1.0 - frac) / samples as f64).sqrt(),
        }
    }

    fn draw_in_bbox(&self, rng: &mut StreamRng, x: &mut [f64]) {
        for k in 0..self.dim {
            let u: f64 = rng.random();
            x[k] = self.bbox_lo[k] + (self.bbox_hi[k] - self.bbox_lo[k]) * u;
        }
    }

    /// `n` i.i.d. uniform points by rejection from the bounding box.
    pub fn sample_uniform(&self, seed: u64, n: usize) -> Result<UniformSample> {
        let mut rng = crate::rng::stream(seed, &[]);
        self.sample_uniform_with(&mut rng, n)
    }

    pub fn sample_uniform_with(&self, rng: &mut StreamRng, n: usize) -> Result<UniformSample> {
        if n == 0 {
            return Err(Error::InvalidInput("sample size must be at least 1".into()));
        }
        let mut coords = Vec::with_capacity(n * self.dim);
        let mut x = vec![0.0; self.dim];
        let mut attempts: u64 = 0;
        let mut accepted = 0usize;
        while accepted < n {
            self.draw_in_bbox(rng, &mut x);
            attempts += 1;
            if self.contains_unchecked(&x) {
                coords.extend_from_slice(&x);
                accepted += 1;
            } else if attempts >= 1_000_000 && (accepted as f64) < 1e-6 * attempts as f64 {
                return Err(Error::AcceptanceTooLow { accepted, attempts });
            }
        }
        Ok(UniformSample {
            points: PointSet::new(self.dim, coords)?,
            acceptance_rate: accepted as f64 / attempts as f64,
        })
    }

    pub fn cone_parameters(&self) -> ConeParameters {
        ConeParameters::from_inradius(self.inradius, self.diameter)
    }

    /// Largest ball found inside `B(center, radius) ∩ Ω`, for `center` in the
    /// closure of `Ω`. Tries the ball at `center` itself and the ball obtained
    /// by sliding toward the incenter along the cone spanned by the inscribed
    /// ball; returns the better one.
    pub fn place_ball(&self, center: &[f64], radius: f64) -> (Vec<f64>, f64) {
        let here = radius.min(self.boundary_distance(center)).max(0.0);
        let len = distance(center, &self.incenter);
        if len == 0.0 {
            return (center.to_vec(), here);
        }
        let lambda = (radius / (self.inradius + len)).min(1.0);
        let moved: Vec<f64> =
            center.iter().zip(&self.incenter).map(|(z, c)| z + lambda * (c - z)).collect();
        let slid = (radius - lambda * len).min(self.boundary_distance(&moved)).max(0.0);
        if slid > here {
            (moved, slid)
        } else {
            (center.to_vec(), here)
        }
    }

    /// Short human-readable description, e.g. `box(0,1)^2`.
    pub fn describe(&self) -> alloc::string::String {
        match &self.shape {
            Shape::Box { lo, hi } => {
                if lo.iter().all(|v| *v == lo[0]) && hi.iter().all(|v| *v == hi[0]) {
                    format!("box({},{})^{}", lo[0], hi[0], self.dim)
                } else {
                    let parts: Vec<_> = lo.iter().zip(hi).map(|(a, b)| format!("({a},{b})")).collect();
                    format!("box{}", parts.join("x"))
                }
            }
            Shape::Ball { center, radius } => {
                let c: Vec<_> = center.iter().map(|v| format!("{v}")).collect();
                format!("ball({};{})", c.join(","), radius)
            }
            Shape::Polytope { offsets, .. } => format!("polytope({} half-spaces, d={})", offsets.len(), self.dim),
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Calls `f` with every `k`-subset of `0..m` in lexicographic order.
fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A polytope with unit normals is bounded iff its recession cone
/// `{v : A v <= 0}` is trivial. A nontrivial pointed cone has an extreme ray
/// with `d-1` independent active constraints, so testing those rays suffices.
fn is_bounded(normals: &[f64], dim: usize) -> bool {
    let m = normals.len() / dim;
    let mut unbounded = false;
    let mut full_rank = false;
    for_each_combination(m, dim, |rows| {
        if full_rank {
            return;
        }
        let mut a = Vec::with_capacity(dim * dim);
        for &r in rows {
            a.extend_from_slice(&normals[r * dim..(r + 1) * dim]);
        }
        if solve_dense(&a, dim, &vec![0.0; dim]).is_some() {
            full_rank = true;
        }
    });
    if !full_rank {
        return false;
    }
    for_each_combination(m, dim - 1, |rows| {
        if unbounded {
            return;
        }
        for k in 0..dim {
            let mut a = Vec::with_capacity(dim * dim);
            for &r in rows {
                a.extend_from_slice(&normals[r * dim..(r + 1) * dim]);
            }
            let mut unit = vec![0.0; dim];
            unit[k] = 1.0;
            a.extend_from_slice(&unit);
            let mut rhs = vec![0.0; dim];
            rhs[dim - 1] = 1.0;
            if let Some(v) = solve_dense(&a, dim, &rhs) {
                let scale = v.iter().fold(0.0f64, |s, x| s.max(x.abs()));
                for sign in [1.0, -1.0] {
                    if normals
                        .chunks_exact(dim)
                        .all(|n| sign * dot(n, &v) <= FEASIBILITY_TOL * scale)
                    {
                        unbounded = true;
                    }
                }
                break;
            }
        }
    });
    !unbounded
}

/// Chebyshev center by vertex enumeration of the LP
/// `max t  s.t.  n_i·x + t <= b_i` (normals are unit length).
fn chebyshev_center(normals: &[f64], offsets: &[f64], dim: usize) -> Option<(Vec<f64>, f64)> {
    let m = offsets.len();
    let n = dim + 1;
    let mut best: Option<(Vec<f64>, f64)> = None;
    for_each_combination(m, n, |rows| {
        let mut a = Vec::with_capacity(n * n);
        let mut rhs = Vec::with_capacity(n);
        for &r in rows {
            a.extend_from_slice(&normals[r * dim..(r + 1) * dim]);
            a.push(1.0);
            rhs.push(offsets[r]);
        }
        if let Some(sol) = solve_dense(&a, n, &rhs) {
            let (x, t) = sol.split_at(dim);
            let t = t[0];
            let feasible = normals
                .chunks_exact(dim)
                .zip(offsets)
                .all(|(nv, b)| dot(nv, x) + t <= b + FEASIBILITY_TOL * (1.0 + b.abs()));
            if feasible && best.as_ref().map_or(true, |(_, bt)| t > *bt) {
                best = Some((x.to_vec(), t));
            }
        }
    });
    best
}

fn polytope_vertices(normals: &[f64], offsets: &[f64], dim: usize) -> Vec<f64> {
    let m = offsets.len();
    let mut out = Vec::new();
    for_each_combination(m, dim, |rows| {
        let mut a = Vec::with_capacity(dim * dim);
        let mut rhs = Vec::with_capacity(dim);
        for &r in rows {
            a.extend_from_slice(&normals[r * dim..(r + 1) * dim]);
            rhs.push(offsets[r]);
        }
        if let Some(x) = solve_dense(&a, dim, &rhs) {
            if normals
                .chunks_exact(dim)
                .zip(offsets)
                .all(|(nv, b)| dot(nv, &x) <= b + FEASIBILITY_TOL * (1.0 + b.abs()))
            {
                out.extend_from_slice(&x);
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> ConvexDomain {
        ConvexDomain::polytope(&[
            (vec![-1.0, 0.0], 0.0),
            (vec![0.0, -1.0], 0.0),
            (vec![1.0, 1.0], 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn membership_is_strict() {
        let sq = ConvexDomain::unit_cube(2);
        assert!(sq.contains(&[0.5, 0.5]).unwrap());
        assert!(!sq.contains(&[1.0, 0.5]).unwrap());
        let disk = ConvexDomain::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert!(!disk.contains(&[0.8, 0.7]).unwrap());
        assert!(matches!(sq.contains(&[0.5]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn exact_volumes() {
        assert_eq!(ConvexDomain::unit_cube(2).volume().value, 1.0);
        let b = ConvexDomain::cuboid(vec![0.0, -1.0, 2.0], vec![0.5, 2.0, 2.25]).unwrap();
        assert_eq!(b.volume().value, 0.5 * 3.0 * 0.25);
        let disk = ConvexDomain::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert!((disk.volume().value - PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_volume_within_reported_error() {
        let v = triangle().volume();
        assert!(v.std_error > 0.0);
        assert!((v.value - 0.5).abs() < 4.0 * v.std_error, "{v:?}");
    }

    #[test]
    fn monte_carlo_variance_halves_when_samples_double() {
        let t = triangle();
        let a = t.volume_monte_carlo(1 << 16, 1);
        let b = t.volume_monte_carlo(1 << 17, 1);
        let ratio = (b.std_error * b.std_error) / (a.std_error * a.std_error);
        assert!((ratio - 0.5).abs() < 0.05, "variance ratio {ratio}");
    }

    #[test]
    fn triangle_chebyshev_center_is_exact() {
        let t = triangle();
        let r = (2.0 - 2.0f64.sqrt()) / 2.0;
        assert!((t.inradius() - r).abs() < 1e-12);
        assert!((t.incenter()[0] - r).abs() < 1e-12);
        assert!((t.diameter() - 2.0f64.sqrt()).abs() < 1e-12);
        let (lo, hi) = t.bounding_box();
        assert_eq!((lo, hi), (&[0.0, 0.0][..], &[1.0, 1.0][..]));
    }

    #[test]
    fn rejects_unbounded_and_empty_polytopes() {
        let open = ConvexDomain::polytope(&[(vec![-1.0, 0.0], 0.0), (vec![0.0, -1.0], 0.0)]);
        assert!(open.is_err());
        let wedge = ConvexDomain::polytope(&[
            (vec![-1.0, 0.0], 0.0),
            (vec![0.0, -1.0], 0.0),
            (vec![1.0, -1.0], 1.0),
        ]);
        assert!(wedge.is_err());
        let empty = ConvexDomain::polytope(&[(vec![1.0], 0.0), (vec![-1.0], -1.0)]);
        assert!(empty.is_err());
    }

    #[test]
    fn cone_parameters_match_formulas() {
        let disk = ConvexDomain::ball(vec![0.0, 0.0], 1.0).unwrap().cone_parameters();
        assert_eq!(disk.radius, 1.0);
        assert!((disk.angle - 0.505_360_510_284_157_3).abs() < 1e-12);
        assert!((disk.ball_factor - 0.326_201_362_646_108_9).abs() < 1e-12);
        let sq = ConvexDomain::unit_cube(2).cone_parameters();
        assert_eq!(sq.radius, 0.5);
        assert!((sq.angle - 0.355_421_201_690_223_45).abs() < 1e-12);
        assert!((sq.ball_factor - 0.258_152_132_467_912_6).abs() < 1e-12);
        let big = ConvexDomain::ball(vec![0.0], 5.0).unwrap().cone_parameters();
        assert_eq!(big.radius, 1.0);
    }

    #[test]
    fn cone_parameters_shrink_with_aspect_ratio() {
        let mut prev = ConeParameters::from_inradius(0.5, 1.0);
        for k in 1..20 {
            let cur = ConeParameters::from_inradius(0.5, 1.0 + k as f64);
            assert!(cur.angle < prev.angle && cur.ball_factor < prev.ball_factor);
            assert!(cur.angle > 0.0 && cur.ball_factor > 0.0 && cur.ball_factor < 0.5);
            prev = cur;
        }
    }

    #[test]
    fn sampling_is_deterministic_and_in_domain() {
        let disk = ConvexDomain::ball(vec![0.0, 0.0], 1.0).unwrap();
        let a = disk.sample_uniform(42, 64).unwrap();
        let b = disk.sample_uniform(42, 64).unwrap();
        assert_eq!(a.points, b.points);
        assert!(a.points.iter().all(|p| disk.contains(p).unwrap()));
        assert!((a.acceptance_rate - PI / 4.0).abs() < 0.2);
        let sq = ConvexDomain::unit_cube(2).sample_uniform(1, 4).unwrap();
        assert_eq!(sq.points.len(), 4);
    }

    #[test]
    fn cell_relations() {
        let disk = ConvexDomain::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(disk.cell_relation(&[-0.1, -0.1], &[0.1, 0.1]), CellRelation::Inside);
        assert_eq!(disk.cell_relation(&[0.9, 0.9], &[1.0, 1.0]), CellRelation::Outside);
        assert_eq!(disk.cell_relation(&[0.9, -0.1], &[1.1, 0.1]), CellRelation::Boundary);
        let t = triangle();
        assert_eq!(t.cell_relation(&[0.1, 0.1], &[0.2, 0.2]), CellRelation::Inside);
        assert_eq!(t.cell_relation(&[0.6, 0.6], &[0.7, 0.7]), CellRelation::Outside);
        assert_eq!(t.cell_relation(&[0.4, 0.4], &[0.6, 0.6]), CellRelation::Boundary);
    }

    #[test]
    fn placed_ball_stays_inside() {
        let sq = ConvexDomain::unit_cube(2);
        let (c, r) = sq.place_ball(&[0.0, 0.0], 0.2);
        assert!(r > 0.0);
        assert!(sq.boundary_distance(&c) >= r - 1e-15);
        assert!(distance(&c, &[0.0, 0.0]) + r <= 0.2 + 1e-15);
        let (c, r) = sq.place_ball(&[0.5, 0.5], 0.1);
        assert_eq!((c.as_slice(), r), (&[0.5, 0.5][..], 0.1));
    }
}
