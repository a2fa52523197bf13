//! Moving least squares: the sampling operator `S_P(f) = Σ_x f(x) u_x`.
//!
//! At an evaluation point `y` with support radius `ρ` the weights are
//! `u_x(y) = w(‖x−y‖/ρ) V(x)·a`, where `V` is the monomial basis of degree
//! `m` in the scaled coordinates `(x−y)/ρ` and `G a = e₀` with
//! `G = Σ w V Vᵀ`. This reproduces every polynomial of degree `≤ m`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;
use num_traits::Float;

use crate::cover::{CubeLocator, GoodCover};
use crate::functions::TestFunction;
use crate::geometry::ConvexDomain;
use crate::linalg::Cholesky;
use crate::mesh::Mesh;
use crate::points::{GridIndex, PointSet};
use crate::poly::Monomials;
use crate::stats::CompensatedSum;
use crate::{Error, Result};

pub const DEFAULT_SUPPORT_FACTOR: f64 = 3.0;
/// Radius growth factor and number of growth attempts per degree.
pub const GROWTH: f64 = 1.5;
pub const GROWTH_ATTEMPTS: usize = 4;

/// Wendland profile `(1−t)⁴(4t+1)` on `[0,1)`, zero beyond.
pub fn wendland(t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        let u = 1.0 - t;
        let u2 = u * u;
        u2 * u2 * (4.0 * t + 1.0)
    }
}

/// Sparse weight vector `(u_x(y))`, indices ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct MlsWeights {
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
    /// Support radius actually used.
    pub radius: f64,
    /// Degree actually reproduced.
    pub degree: usize,
}

impl MlsWeights {
    pub fn apply(&self, values: &[f64]) -> f64 {
        let mut acc = CompensatedSum::new();
        for (i, u) in self.indices.iter().zip(&self.weights) {
            acc.add(values[*i] * u);
        }
        acc.value()
    }

    /// `Σ_x |u_x(y)|`.
    pub fn lebesgue(&self) -> f64 {
        self.weights.iter().map(|u| u.abs()).sum()
    }
}

fn try_weights(y: &[f64], index: &GridIndex, basis: &Monomials, rho: f64) -> Option<MlsWeights> {
    let q = basis.len();
    let dim = y.len();
    let mut near: Vec<(usize, Vec<f64>, f64)> = Vec::new();
    index.for_each_within(y, rho, |i, p, d| {
        let scaled: Vec<f64> = p.iter().zip(y).map(|(a, b)| (a - b) / rho).collect();
        near.push((i, scaled, wendland(d / rho)));
    });
    if near.len() < q {
        return None;
    }
    near.sort_by_key(|e| e.0);
    let mut g = vec![0.0; q * q];
    let mut v = vec![0.0; q];
    let mut vs = vec![0.0; near.len() * q];
    for (k, (_, s, w)) in near.iter().enumerate() {
        basis.eval_into(&s[..dim], &mut v);
        vs[k * q..(k + 1) * q].copy_from_slice(&v);
        for a in 0..q {
            let wa = w * v[a];
            for b in 0..=a {
                g[a * q + b] += wa * v[b];
            }
        }
    }
    for a in 0..q {
        for b in 0..a {
            g[b * q + a] = g[a * q + b];
        }
    }
    let chol = Cholesky::factor_with_tolerance(&g, q, 1e-10).ok()?;
    let mut e0 = vec![0.0; q];
    e0[0] = 1.0;
    let a = chol.solve(&e0);
    let mut indices = Vec::with_capacity(near.len());
    let mut weights = Vec::with_capacity(near.len());
    for (k, (i, _, w)) in near.iter().enumerate() {
        let dotv: f64 = vs[k * q..(k + 1) * q].iter().zip(&a).map(|(x, y)| x * y).sum();
        indices.push(*i);
        weights.push(w * dotv);
    }
    Some(MlsWeights { indices, weights, radius: rho, degree: basis.degree() })
}

/// Weights at `y` for degree `m` and radius `ρ`, with the fallback ladder:
/// grow the radius by 1.5 up to four times, then lower the degree.
pub fn mls_weights(y: &[f64], index: &GridIndex, degree: usize, radius: f64) -> Result<MlsWeights> {
    if y.len() != index.dim() {
        return Err(Error::DimensionMismatch { expected: index.dim(), got: y.len() });
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidInput("support radius must be positive".into()));
    }
    if index.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    for m in (0..=degree).rev() {
        let basis = Monomials::new(y.len(), m);
        let mut rho = radius;
        for _ in 0..=GROWTH_ATTEMPTS {
            if let Some(w) = try_weights(y, index, &basis, rho) {
                return Ok(w);
            }
            rho *= GROWTH;
        }
    }
    Err(Error::IsolatedPoint)
}

#[derive(Debug, Clone)]
pub enum Policy {
    /// One radius everywhere.
    Global { radius: f64 },
    /// Radius `support_factor · c · r_i` on the first cube containing `y`.
    GoodCover { cover: GoodCover, locator: CubeLocator },
}

#[derive(Debug, Clone)]
pub struct MlsOperator {
    index: GridIndex,
    degree: usize,
    support_factor: f64,
    policy: Policy,
}

/// Output of [`MlsOperator::approximate`]; failed points hold `NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    pub values: Vec<f64>,
    pub failures: usize,
}

impl MlsOperator {
    /// Global policy with radius `support_factor · covering_radius`.
    pub fn global(points: &PointSet, degree: usize, support_factor: f64, covering_radius: f64) -> Result<Self> {
        if !(support_factor > 0.0) || !(covering_radius > 0.0) {
            return Err(Error::InvalidInput("support factor and covering radius must be positive".into()));
        }
        Ok(Self {
            index: GridIndex::new(points)?,
            degree,
            support_factor,
            policy: Policy::Global { radius: support_factor * covering_radius },
        })
    }

    pub fn with_cover(
        points: &PointSet,
        degree: usize,
        support_factor: f64,
        cover: GoodCover,
        domain: &ConvexDomain,
    ) -> Result<Self> {
        if cover.cubes.is_empty() {
            return Err(Error::InvalidInput("empty cover".into()));
        }
        let locator = CubeLocator::new(&cover, domain);
        Ok(Self { index: GridIndex::new(points)?, degree, support_factor, policy: Policy::GoodCover { cover, locator } })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn index(&self) -> &GridIndex {
        &self.index
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    /// Nominal support radius at `y` before any fallback growth.
    pub fn radius_at(&self, y: &[f64]) -> f64 {
        match &self.policy {
            Policy::Global { radius } => *radius,
            Policy::GoodCover { cover, locator } => {
                let i = locator.locate(cover, y).unwrap_or(0);
                self.support_factor * cover.c * cover.cubes[i].radius
            }
        }
    }

    pub fn weights(&self, y: &[f64]) -> Result<MlsWeights> {
        mls_weights(y, &self.index, self.degree, self.radius_at(y))
    }

    /// `S_P(f)(y)` from values of `f` on the points, in original order.
    pub fn apply(&self, values: &[f64], y: &[f64]) -> Result<f64> {
        if values.len() != self.index.len() {
            return Err(Error::DimensionMismatch { expected: self.index.len(), got: values.len() });
        }
        Ok(self.weights(y)?.apply(values))
    }

    pub fn approximate(&self, values: &[f64], eval: &PointSet) -> Result<Approximation> {
        let mut out = Vec::with_capacity(eval.len());
        let mut failures = 0;
        for y in eval.iter() {
            match self.apply(values, y) {
                Ok(v) => out.push(v),
                Err(Error::IsolatedPoint) => {
                    failures += 1;
                    out.push(f64::NAN);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Approximation { values: out, failures })
    }
}

/// Values of `f` at every point, in order.
pub fn sample(f: &dyn TestFunction, points: &PointSet) -> Vec<f64> {
    points.iter().map(|x| f.value(x)).collect()
}

#[derive(Debug, Clone, Default)]
pub struct ResidualAccumulator {
    sum: CompensatedSum,
    max: f64,
    cells: usize,
    failures: usize,
}

impl ResidualAccumulator {
    pub fn merge(&mut self, other: ResidualAccumulator) {
        self.sum.add(other.sum.value());
        self.max = self.max.max(other.max);
        self.cells += other.cells;
        self.failures += other.failures;
    }

    /// In-domain cells visited.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn failures(&self) -> usize {
        self.failures
    }
}

/// Accumulate `|r(c)|^q · vol` over in-domain cell centers of `range`;
/// `residual` returns `None` where the approximant failed.
pub fn accumulate_residual(
    domain: &ConvexDomain,
    mesh: &Mesh,
    q: f64,
    range: Range<usize>,
    mut residual: impl FnMut(&[f64]) -> Option<f64>,
) -> ResidualAccumulator {
    let vol = mesh.cell_volume();
    let mut acc = ResidualAccumulator::default();
    mesh.for_each_in(range, |c, _, _| {
        if !domain.contains_unchecked(c) {
            return;
        }
        acc.cells += 1;
        match residual(c) {
            Some(r) => {
                let r = r.abs();
                acc.max = acc.max.max(r);
                if q.is_finite() {
                    acc.sum.add(r.powf(q) * vol);
                }
            }
            None => acc.failures += 1,
        }
    });
    acc
}

/// Grid `L_q` error at `mesh` and at `mesh/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqError {
    pub value: f64,
    /// Same estimate on the refined mesh.
    pub refined: f64,
    pub q: f64,
    pub cells: usize,
    pub failures: usize,
}

pub fn finish_residual(acc: &ResidualAccumulator, q: f64, mesh: f64) -> Result<f64> {
    if acc.cells == 0 {
        return Err(Error::MeshTooCoarse { mesh });
    }
    Ok(if q.is_finite() { acc.sum.value().powf(1.0 / q) } else { acc.max })
}

fn residual_on(
    domain: &ConvexDomain,
    q: f64,
    mesh: f64,
    residual: &mut impl FnMut(&[f64]) -> Option<f64>,
) -> Result<ResidualAccumulator> {
    let (lo, hi) = domain.bounding_box();
    let grid = Mesh::over_box(lo, hi, mesh)?;
    let mut acc = ResidualAccumulator::default();
    for range in grid.chunks() {
        acc.merge(accumulate_residual(domain, &grid, q, range, &mut *residual));
    }
    Ok(acc)
}

/// Grid `L_q` norm of a residual (`q = ∞` gives the max) with a refinement
/// diagnostic at half the mesh.
pub fn lq_error(
    domain: &ConvexDomain,
    q: f64,
    mesh: f64,
    mut residual: impl FnMut(&[f64]) -> Option<f64>,
) -> Result<LqError> {
    if !(q > 0.0) {
        return Err(Error::InvalidInput("q must be positive".into()));
    }
    let coarse = residual_on(domain, q, mesh, &mut residual)?;
    let fine = residual_on(domain, q, 0.5 * mesh, &mut residual)?;
    Ok(LqError {
        value: finish_residual(&coarse, q, mesh)?,
        refined: finish_residual(&fine, q, 0.5 * mesh)?,
        q,
        cells: coarse.cells,
        failures: coarse.failures,
    })
}

/// `|f − S_P f|` at `y`, or `None` if the weights could not be built.
pub fn residual_at(op: &MlsOperator, f: &dyn TestFunction, values: &[f64], y: &[f64]) -> Option<f64> {
    op.apply(values, y).ok().map(|s| f.value(y) - s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_good_cover, CoverConfig};
    use crate::distance::covering_radius;
    use crate::functions::{KinkedRidge, Polynomial, TrigProduct};
    use crate::poly::space_dimension;
    use crate::stats::log_log_fit;
    use rand::Rng;

    fn grid_points(k: usize) -> PointSet {
        let mut rows = Vec::new();
        for i in 0..k {
            for j in 0..k {
                rows.push([(i as f64 + 0.5) / k as f64, (j as f64 + 0.5) / k as f64]);
            }
        }
        PointSet::from_rows(&rows).unwrap()
    }

    fn global(points: &PointSet, degree: usize, sq: &ConvexDomain) -> MlsOperator {
        let idx = GridIndex::new(points).unwrap();
        let h = covering_radius(sq, &idx, 0.005).unwrap();
        MlsOperator::global(points, degree, DEFAULT_SUPPORT_FACTOR, h.upper).unwrap()
    }

    #[test]
    fn wendland_profile() {
        assert_eq!(wendland(0.0), 1.0);
        assert_eq!(wendland(1.0), 0.0);
        assert_eq!(wendland(2.0), 0.0);
        assert!((wendland(0.5) - 0.1875).abs() < 1e-15);
    }

    #[test]
    fn reproduces_polynomials_at_random_points() {
        let sq = ConvexDomain::unit_cube(2);
        let p = sq.sample_uniform(1, 500).unwrap().points;
        let eval = sq.sample_uniform(2, 1000).unwrap().points;
        let mut rng = crate::rng::stream(3, &[]);
        for m in 0..=3 {
            let op = global(&p, m, &sq);
            let basis = Monomials::new(2, m);
            let coeffs: Vec<f64> = (0..basis.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = Polynomial::from_basis(&basis, &coeffs);
            let values = sample(&f, &p);
            for y in eval.iter() {
                let w = op.weights(y).unwrap();
                assert_eq!(w.degree, m);
                let s: f64 = w.weights.iter().sum();
                assert!((s - 1.0).abs() < 1e-10, "m={m} sum={s}");
                let err = (w.apply(&values) - f.value(y)).abs();
                assert!(err <= 1e-9 * f.coefficient_scale(), "m={m} err={err}");
                for (i, _) in w.indices.iter().zip(&w.weights) {
                    assert!(crate::geometry::distance(p.point(*i), y) < w.radius);
                }
            }
        }
    }

    #[test]
    fn linear_function_is_exact() {
        let sq = ConvexDomain::unit_cube(2);
        let p = grid_points(12);
        let op = global(&p, 1, &sq);
        let f = Polynomial::new(2, vec![(3.0, vec![1, 0]), (-2.0, vec![0, 1]), (7.0, vec![0, 0])]).unwrap();
        let values = sample(&f, &p);
        let e = lq_error(&sq, f64::INFINITY, 0.05, |y| residual_at(&op, &f, &values, y)).unwrap();
        assert!(e.value < 1e-9 && e.refined < 1e-9);
    }

    #[test]
    fn fallback_grows_radius_then_lowers_degree() {
        let p = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
        let idx = GridIndex::new(&p).unwrap();
        // collinear points cannot carry degree one in the plane
        let w = mls_weights(&[1.0, 0.5], &idx, 1, 0.6).unwrap();
        assert_eq!(w.degree, 0);
        let w = mls_weights(&[0.5, 0.0], &idx, 0, 0.1).unwrap();
        assert!(w.radius > 0.1);
        let lone = GridIndex::new(&PointSet::from_rows(&[[0.0, 0.0]]).unwrap()).unwrap();
        assert!(matches!(mls_weights(&[100.0, 0.0], &lone, 0, 1.0), Err(Error::IsolatedPoint)));
    }

    #[test]
    fn lebesgue_constant_is_stable_under_refinement() {
        let sq = ConvexDomain::unit_cube(2);
        let eval = sq.sample_uniform(4, 300).unwrap().points;
        let mut maxima = Vec::new();
        for k in [16usize, 32, 64] {
            let op = global(&grid_points(k), 2, &sq);
            let m = eval.iter().map(|y| op.weights(y).unwrap().lebesgue()).fold(0.0, f64::max);
            maxima.push(m);
        }
        assert!(maxima.iter().all(|m| *m < 5.0), "{maxima:?}");
        assert!((maxima[2] / maxima[1] - 1.0).abs() < 0.25, "{maxima:?}");
    }

    #[test]
    fn smooth_function_converges_at_third_order() {
        let sq = ConvexDomain::unit_cube(2);
        let f = TrigProduct::standard(2);
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for k in [16usize, 32, 64] {
            let p = grid_points(k);
            let op = global(&p, 2, &sq);
            let values = sample(&f, &p);
            let e = lq_error(&sq, f64::INFINITY, 0.25 / k as f64, |y| residual_at(&op, &f, &values, y)).unwrap();
            hs.push(1.0 / k as f64);
            errs.push(e.value);
        }
        let fit = log_log_fit(&hs, &errs).unwrap();
        assert!((fit.slope - 3.0).abs() < 0.45, "{errs:?} slope {}", fit.slope);
    }

    #[test]
    fn ridge_converges_at_second_order() {
        let sq = ConvexDomain::unit_cube(2);
        let f = KinkedRidge::standard(2);
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for k in [16usize, 32, 64] {
            let p = grid_points(k);
            let op = global(&p, 2, &sq);
            let values = sample(&f, &p);
            let e = lq_error(&sq, f64::INFINITY, 0.25 / k as f64, |y| residual_at(&op, &f, &values, y)).unwrap();
            hs.push(1.0 / k as f64);
            errs.push(e.value);
        }
        let fit = log_log_fit(&hs, &errs).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.3, "{errs:?} slope {}", fit.slope);
    }

    #[test]
    fn l1_over_volume_is_below_sup() {
        let sq = ConvexDomain::cuboid(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let r = |y: &[f64]| Some((3.0 * y[0]).sin() * y[1]);
        let l1 = lq_error(&sq, 1.0, 0.02, r).unwrap();
        let linf = lq_error(&sq, f64::INFINITY, 0.02, r).unwrap();
        assert!(l1.value / 2.0 <= linf.value);
    }

    #[test]
    fn cover_and_global_policies_agree_on_uniform_grids() {
        let sq = ConvexDomain::unit_cube(2);
        let k = 48;
        let p = grid_points(k);
        let idx = GridIndex::new(&p).unwrap();
        let cfg = CoverConfig { c: 0.5, ..CoverConfig::default() };
        let cover = build_good_cover(&sq, &idx, &cfg, 0.5 / k as f64).unwrap();
        let rmax = cover.cubes[0].radius;
        let rmin = cover.cubes.last().unwrap().radius;
        assert!(rmax / rmin < 1.1);
        let local = MlsOperator::with_cover(&p, 3, DEFAULT_SUPPORT_FACTOR, cover, &sq).unwrap();
        let glob = global(&p, 3, &sq);
        let f = TrigProduct::new(vec![(crate::functions::Trig::Sin, 0.25), (crate::functions::Trig::Cos, 0.125)]);
        let values = sample(&f, &p);
        let eval = sq.sample_uniform(8, 200).unwrap().points;
        for y in eval.iter() {
            let a = local.apply(&values, y).unwrap();
            let b = glob.apply(&values, y).unwrap();
            assert!((a - b).abs() < 1e-6, "{a} {b}");
        }
    }

    #[test]
    fn locality_of_weights() {
        let p = grid_points(10);
        let idx = GridIndex::new(&p).unwrap();
        let y = [0.37, 0.61];
        let w = mls_weights(&y, &idx, 2, 0.25).unwrap();
        assert!(w.indices.len() >= space_dimension(2, 2));
        for (i, x) in p.iter().enumerate() {
            let inside = crate::geometry::distance(x, &y) < w.radius;
            assert_eq!(w.indices.contains(&i), inside);
        }
    }
}
