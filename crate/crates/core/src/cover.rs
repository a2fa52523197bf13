//! Good-cube coverings: local fill, good radii `r_P(x)`, the greedy cover
//! with pairwise disjoint half-cubes, and one empty ball per cube.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::geometry::{CellRelation, ConvexDomain};
use crate::mesh::Mesh;
use crate::points::GridIndex;
use crate::{Error, Result};

/// Parameters of the cover construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverConfig {
    /// Good-cube constant `c ∈ (0,1)`.
    pub c: f64,
    /// Probe cells per axis for local fill and ball scans.
    pub probes_per_axis: usize,
    /// Relative tolerance of the bisection on radii.
    pub rel_tol: f64,
}

impl Default for CoverConfig {
    fn default() -> Self {
        Self { c: 0.25, probes_per_axis: 16, rel_tol: 1e-3 }
    }
}

impl CoverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(Error::InvalidInput("good-cube constant c must lie in (0,1)".into()));
        }
        if self.probes_per_axis == 0 {
            return Err(Error::InvalidInput("probes_per_axis must be positive".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidInput("rel_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Certified upper estimate of `sup dist(·,P)` over `Ω ∩ B^∞(x,ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFill {
    pub value: f64,
    /// False when no probe cell meets `Ω`; `value` is then zero.
    pub nonempty: bool,
}

fn clipped_cube(domain: &ConvexDomain, x: &[f64], rho: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let (blo, bhi) = domain.bounding_box();
    let mut lo = Vec::with_capacity(x.len());
    let mut hi = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let a = (x[k] - rho).max(blo[k]);
        let b = (x[k] + rho).min(bhi[k]);
        if !(a < b) {
            return None;
        }
        lo.push(a);
        hi.push(b);
    }
    Some((lo, hi))
}

fn probe_mesh(lo: &[f64], hi: &[f64], rho: f64, probes: usize) -> Result<Mesh> {
    Mesh::over_box(lo, hi, 2.0 * rho / probes as f64)
}

/// Local fill with `probes` cells across the full cube width. Every probe
/// cell that meets `Ω` contributes `dist(center,P) + half-diagonal`.
pub fn local_fill(domain: &ConvexDomain, index: &GridIndex, x: &[f64], rho: f64, probes: usize) -> Result<LocalFill> {
    if !(rho > 0.0) {
        return Err(Error::InvalidInput("local fill radius must be positive".into()));
    }
    if x.len() != domain.dim() || index.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: x.len() });
    }
    let Some((lo, hi)) = clipped_cube(domain, x, rho) else {
        return Ok(LocalFill { value: 0.0, nonempty: false });
    };
    let mesh = probe_mesh(&lo, &hi, rho, probes.max(1))?;
    let delta = mesh.half_diagonal();
    let mut value = 0.0f64;
    let mut nonempty = false;
    mesh.for_each(|center, clo, chi| {
        if domain.cell_relation(clo, chi) != CellRelation::Outside {
            nonempty = true;
            value = value.max(index.distance(center) + delta);
        }
    });
    Ok(LocalFill { value: if nonempty { value } else { 0.0 }, nonempty })
}

fn is_good(domain: &ConvexDomain, index: &GridIndex, x: &[f64], rho: f64, cfg: &CoverConfig) -> Result<bool> {
    let fill = local_fill(domain, index, x, rho, cfg.probes_per_axis)?;
    Ok(fill.nonempty && fill.value < cfg.c * rho)
}

/// Approximate infimum of `{ρ ∈ (0,r] : local_fill(x,ρ) < cρ}` with `r` the
/// cone radius. A geometric scan (factor 2 from `1e-3·r`, last step clamped
/// to `r`) finds the first good scale, then bisection refines down to `rel_tol`. Scales with
/// `cρ ≤ dist(x,P)` are skipped since the probe cell containing `x` already
/// violates the condition there.
pub fn good_radius(domain: &ConvexDomain, index: &GridIndex, x: &[f64], cfg: &CoverConfig) -> Result<f64> {
    cfg.validate()?;
    let r = domain.cone_parameters().radius;
    let floor = if domain.contains(x)? { index.distance(x) / cfg.c } else { 0.0 };
    let mut rho = 1e-3 * r;
    let mut prev = None;
    let mut found = None;
    loop {
        if rho > floor && is_good(domain, index, x, rho, cfg)? {
            found = Some(rho);
            break;
        }
        if rho >= r {
            break;
        }
        prev = Some(rho);
        rho = (2.0 * rho).min(r);
    }
    let Some(mut good) = found else {
        return Err(Error::GloballyBadPointSet { max_radius: r });
    };
    let Some(mut bad) = prev else {
        return Ok(good);
    };
    while good - bad > cfg.rel_tol * good {
        let mid = 0.5 * (good + bad);
        if mid > floor && is_good(domain, index, x, mid, cfg)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Candidate centers: in-domain cell centers of a grid over the bounding
/// box, together with the grid itself.
pub fn candidate_points(domain: &ConvexDomain, mesh: f64) -> Result<(Mesh, Vec<usize>, Vec<f64>)> {
    let (lo, hi) = domain.bounding_box();
    let grid = Mesh::over_box(lo, hi, mesh)?;
    let mut flat = Vec::new();
    let mut coords = Vec::new();
    let mut i = 0usize;
    grid.for_each(|c, _, _| {
        if domain.contains_unchecked(c) {
            flat.push(i);
            coords.extend_from_slice(c);
        }
        i += 1;
    });
    if flat.is_empty() {
        return Err(Error::MeshTooCoarse { mesh });
    }
    Ok((grid, flat, coords))
}

/// An empty ball inside a cube's half-cube.
#[derive(Debug, Clone, PartialEq)]
pub struct EmptyBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Closed `ℓ^∞` cube `Q = B^∞(center, radius)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    pub center: Vec<f64>,
    pub radius: f64,
    pub ball: Option<EmptyBall>,
}

impl Cube {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.center.iter().zip(x).all(|(c, v)| (v - c).abs() <= self.radius)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodCover {
    pub cubes: Vec<Cube>,
    pub c: f64,
    /// Largest number of cubes containing one candidate point.
    pub multiplicity_observed: usize,
}

fn linear_index(grid: &Mesh, lo: &[f64], x: &[f64], width: &[f64]) -> Vec<i64> {
    (0..grid.dim()).map(|k| ((x[k] - lo[k]) / width[k]).floor() as i64).collect()
}

impl GoodCover {
    /// Greedy cover from precomputed good radii on a candidate grid. The
    /// uncovered candidate with the largest radius (lowest index on ties)
    /// becomes the next cube until every candidate is covered.
    pub fn from_radii(
        domain: &ConvexDomain,
        grid: &Mesh,
        flat: &[usize],
        coords: &[f64],
        radii: &[f64],
        c: f64,
    ) -> Result<Self> {
        let dim = domain.dim();
        if flat.len() != radii.len() || coords.len() != flat.len() * dim {
            return Err(Error::InvalidInput("candidate arrays disagree in length".into()));
        }
        let (lo, hi) = domain.bounding_box();
        let counts = grid.counts();
        let width: Vec<f64> = (0..dim).map(|k| (hi[k] - lo[k]) / counts[k] as f64).collect();
        let mut slot = vec![usize::MAX; grid.len()];
        for (j, &f) in flat.iter().enumerate() {
            slot[f] = j;
        }
        let mut order: Vec<usize> = (0..flat.len()).collect();
        order.sort_by(|&a, &b| radii[b].total_cmp(&radii[a]).then(a.cmp(&b)));
        let mut hits = vec![0usize; flat.len()];
        let mut cubes = Vec::new();
        let mut strides = vec![1usize; dim];
        for k in 1..dim {
            strides[k] = strides[k - 1] * counts[k - 1];
        }
        for &j in &order {
            if hits[j] > 0 {
                continue;
            }
            let y = &coords[j * dim..(j + 1) * dim];
            let r = radii[j];
            let cube = Cube { center: y.to_vec(), radius: r, ball: None };
            // candidate cells whose centers may lie in the cube
            let a: Vec<i64> = linear_index(grid, lo, &y.iter().map(|v| v - r).collect::<Vec<_>>(), &width);
            let b: Vec<i64> = linear_index(grid, lo, &y.iter().map(|v| v + r).collect::<Vec<_>>(), &width);
            let a: Vec<usize> = a.iter().map(|v| (*v).max(0) as usize).collect();
            let b: Vec<usize> =
                b.iter().zip(counts).map(|(v, n)| ((*v).max(0) as usize).min(n - 1)).collect();
            let mut idx = a.clone();
            loop {
                let f: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                let s = slot[f];
                if s != usize::MAX && cube.contains(&coords[s * dim..(s + 1) * dim]) {
                    hits[s] += 1;
                }
                let mut k = 0;
                while k < dim {
                    if idx[k] < b[k] {
                        idx[k] += 1;
                        break;
                    }
                    idx[k] = a[k];
                    k += 1;
                }
                if k == dim {
                    break;
                }
            }
            debug_assert!(hits[j] > 0);
            cubes.push(cube);
        }
        let multiplicity_observed = hits.iter().copied().max().unwrap_or(0);
        Ok(Self { cubes, c, multiplicity_observed })
    }

    /// Completes the cover with empty balls: scan `Q_i/4 ∩ Ω` for the probe
    /// center `z` farthest from `P`, then place a ball of radius
    /// `min(c_θ·c·r_i/8, dist(z,P))` inside `Ω`. Cubes without an in-domain
    /// probe keep `ball = None`.
    pub fn attach_empty_balls(&mut self, domain: &ConvexDomain, index: &GridIndex, probes: usize) -> Result<()> {
        let c_theta = domain.cone_parameters().ball_factor;
        let c = self.c;
        for cube in &mut self.cubes {
            let quarter = 0.25 * cube.radius;
            let Some((lo, hi)) = clipped_cube(domain, &cube.center, quarter) else {
                continue;
            };
            let mesh = probe_mesh(&lo, &hi, quarter, probes.max(1))?;
            let mut best: Option<(f64, Vec<f64>)> = None;
            mesh.for_each(|center, _, _| {
                if domain.contains_unchecked(center) {
                    let d = index.distance(center);
                    if best.as_ref().map_or(true, |(b, _)| d > *b) {
                        best = Some((d, center.to_vec()));
                    }
                }
            });
            let Some((dz, z)) = best else { continue };
            let target = (c * cube.radius / 8.0).min(dz);
            let (center, placed) = domain.place_ball(&z, target);
            let radius = (c_theta * c * cube.radius / 8.0).min(placed) * (1.0 - 1e-9);
            if radius > 0.0 && index.distance(&center) > radius {
                cube.ball = Some(EmptyBall { center, radius });
            }
        }
        Ok(())
    }

    pub fn balls(&self) -> impl Iterator<Item = &EmptyBall> {
        self.cubes.iter().filter_map(|c| c.ball.as_ref())
    }

    /// Index of the first cube containing `x`, in construction order.
    pub fn first_containing(&self, x: &[f64]) -> Option<usize> {
        self.cubes.iter().position(|c| c.contains(x))
    }
}

/// Cube lookup by uniform buckets; each cube is listed in every bucket it
/// overlaps, in construction order.
#[derive(Debug, Clone)]
pub struct CubeLocator {
    lo: Vec<f64>,
    cell: f64,
    counts: Vec<usize>,
    buckets: Vec<Vec<usize>>,
}

impl CubeLocator {
    pub fn new(cover: &GoodCover, domain: &ConvexDomain) -> Self {
        let (blo, bhi) = domain.bounding_box();
        let dim = blo.len();
        let mut radii: Vec<f64> = cover.cubes.iter().map(|c| c.radius).collect();
        radii.sort_by(f64::total_cmp);
        let median = radii.get(radii.len() / 2).copied().unwrap_or(1.0);
        let extent = (0..dim).map(|k| bhi[k] - blo[k]).fold(0.0, f64::max);
        let cell = (2.0 * median).max(extent / 256.0).max(f64::MIN_POSITIVE);
        let counts: Vec<usize> = (0..dim).map(|k| (((bhi[k] - blo[k]) / cell).ceil() as usize).max(1)).collect();
        let total: usize = counts.iter().product();
        let mut buckets = vec![Vec::new(); total];
        for (i, cube) in cover.cubes.iter().enumerate() {
            let a: Vec<usize> = (0..dim)
                .map(|k| (((cube.center[k] - cube.radius - blo[k]) / cell).floor().max(0.0) as usize).min(counts[k] - 1))
                .collect();
            let b: Vec<usize> = (0..dim)
                .map(|k| (((cube.center[k] + cube.radius - blo[k]) / cell).floor().max(0.0) as usize).min(counts[k] - 1))
                .collect();
            let mut idx = a.clone();
            loop {
                let mut f = 0;
                for k in (0..dim).rev() {
                    f = f * counts[k] + idx[k];
                }
                buckets[f].push(i);
                let mut k = 0;
                while k < dim {
                    if idx[k] < b[k] {
                        idx[k] += 1;
                        break;
                    }
                    idx[k] = a[k];
                    k += 1;
                }
                if k == dim {
                    break;
                }
            }
        }
        Self { lo: blo.to_vec(), cell, counts, buckets }
    }

    /// First cube (construction order) containing `x`, or, if none does, the
    /// cube minimizing `‖x − y_i‖_∞ / r_i`.
    pub fn locate(&self, cover: &GoodCover, x: &[f64]) -> Option<usize> {
        let mut f = 0;
        for k in (0..self.counts.len()).rev() {
            let i = (((x[k] - self.lo[k]) / self.cell).floor().max(0.0) as usize).min(self.counts[k] - 1);
            f = f * self.counts[k] + i;
        }
        if let Some(&i) = self.buckets[f].iter().find(|&&i| cover.cubes[i].contains(x)) {
            return Some(i);
        }
        cover
            .cubes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let d = c.center.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                (d / c.radius, i)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, i)| i)
    }
}

/// Good radii for all candidates, sequentially.
pub fn good_radii(domain: &ConvexDomain, index: &GridIndex, coords: &[f64], cfg: &CoverConfig) -> Result<Vec<f64>> {
    coords.chunks_exact(domain.dim()).map(|x| good_radius(domain, index, x, cfg)).collect()
}

/// Greedy good cover on a candidate grid of spacing `candidate_mesh`,
/// completed with empty balls.
pub fn build_good_cover(
    domain: &ConvexDomain,
    index: &GridIndex,
    cfg: &CoverConfig,
    candidate_mesh: f64,
) -> Result<GoodCover> {
    cfg.validate()?;
    let (grid, flat, coords) = candidate_points(domain, candidate_mesh)?;
    let radii = good_radii(domain, index, &coords, cfg)?;
    let mut cover = GoodCover::from_radii(domain, &grid, &flat, &coords, &radii, cfg.c)?;
    cover.attach_empty_balls(domain, index, cfg.probes_per_axis)?;
    Ok(cover)
}

/// Pairwise check of half-cube disjointness: `‖y_i − y_j‖_∞ > (r_i + r_j)/2`.
pub fn half_cubes_disjoint(cover: &GoodCover) -> bool {
    let cubes = &cover.cubes;
    for i in 0..cubes.len() {
        for j in (i + 1)..cubes.len() {
            let d = cubes[i].center.iter().zip(&cubes[j].center).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if !(d > 0.5 * (cubes[i].radius + cubes[j].radius)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::PointSet;

    fn grid_points(k: usize) -> PointSet {
        let mut rows = Vec::new();
        for i in 0..k {
            for j in 0..k {
                rows.push([(i as f64 + 0.5) / k as f64, (j as f64 + 0.5) / k as f64]);
            }
        }
        PointSet::from_rows(&rows).unwrap()
    }

    fn grid_with_hole(k: usize, center: [f64; 2], r: f64) -> PointSet {
        let g = grid_points(k);
        let rows: Vec<[f64; 2]> = g
            .iter()
            .filter(|p| ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt() >= r)
            .map(|p| [p[0], p[1]])
            .collect();
        PointSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn local_fill_on_fine_grid() {
        let sq = ConvexDomain::unit_cube(2);
        let k = 64;
        let idx = GridIndex::new(&grid_points(k)).unwrap();
        let h = 1.0 / k as f64;
        let rho = 0.2;
        let fill = local_fill(&sq, &idx, &[0.5, 0.5], rho, 64).unwrap();
        let fill_distance = h * 2.0f64.sqrt() / 2.0;
        let cert = rho * 2.0f64.sqrt() / 64.0;
        assert!(fill.nonempty);
        assert!(fill.value <= fill_distance + cert + 1e-12, "{fill:?}");
        assert!(fill.value >= fill_distance * 0.8, "{fill:?}");
    }

    #[test]
    fn local_fill_around_lone_point_matches_brute_force() {
        let sq = ConvexDomain::unit_cube(2);
        let p = PointSet::from_rows(&[[0.5, 0.5], [0.0, 0.0]]).unwrap();
        let idx = GridIndex::new(&p).unwrap();
        let rho = 0.05;
        let probes = 20;
        let fill = local_fill(&sq, &idx, &[0.5, 0.5], rho, probes).unwrap();
        // brute force over the same probe centers
        let w = 2.0 * rho / probes as f64;
        let mut sup = 0.0f64;
        for i in 0..probes {
            for j in 0..probes {
                let x = 0.45 + (i as f64 + 0.5) * w;
                let y = 0.45 + (j as f64 + 0.5) * w;
                sup = sup.max(((x - 0.5).powi(2) + (y - 0.5).powi(2)).sqrt());
            }
        }
        let cert = w * 2.0f64.sqrt() / 2.0;
        assert!((fill.value - (sup + cert)).abs() < 1e-12);
        assert!(fill.value >= rho * 2.0f64.sqrt());
    }

    #[test]
    fn local_fill_outside_domain_is_flagged() {
        let sq = ConvexDomain::unit_cube(2);
        let idx = GridIndex::new(&grid_points(4)).unwrap();
        let fill = local_fill(&sq, &idx, &[3.0, 3.0], 0.5, 8).unwrap();
        assert!(!fill.nonempty);
        assert_eq!(fill.value, 0.0);
    }

    #[test]
    fn good_radius_scales_with_grid_spacing() {
        let sq = ConvexDomain::unit_cube(2);
        let cfg = CoverConfig::default();
        let mut ratios = Vec::new();
        for k in [16usize, 32, 64] {
            let idx = GridIndex::new(&grid_points(k)).unwrap();
            let r = good_radius(&sq, &idx, &[0.5, 0.5], &cfg).unwrap();
            ratios.push(r * k as f64);
        }
        for w in ratios.windows(2) {
            assert!((w[1] / w[0] - 1.0).abs() < 0.2, "{ratios:?}");
        }
    }

    #[test]
    fn good_radius_grows_inside_hole() {
        let sq = ConvexDomain::unit_cube(2);
        let cfg = CoverConfig::default();
        let cfg = CoverConfig { c: 0.5, ..cfg };
        let hole = 0.08;
        let idx = GridIndex::new(&grid_with_hole(64, [0.5, 0.5], hole)).unwrap();
        let r = good_radius(&sq, &idx, &[0.5, 0.5], &cfg).unwrap();
        // the cube must reach well beyond the hole before dist < cρ
        assert!(r >= hole, "r = {r}");
        let plain = GridIndex::new(&grid_points(64)).unwrap();
        assert!(r > 4.0 * good_radius(&sq, &plain, &[0.5, 0.5], &cfg).unwrap());
    }

    #[test]
    fn globally_bad_when_hole_is_too_large() {
        let sq = ConvexDomain::unit_cube(2);
        let idx = GridIndex::new(&PointSet::from_rows(&[[0.0, 0.0]]).unwrap()).unwrap();
        let err = good_radius(&sq, &idx, &[0.9, 0.9], &CoverConfig::default()).unwrap_err();
        assert!(matches!(err, Error::GloballyBadPointSet { .. }));
    }

    #[test]
    fn good_radius_is_upper_semicontinuous_on_samples() {
        let sq = ConvexDomain::unit_cube(2);
        let cfg = CoverConfig { c: 0.5, ..CoverConfig::default() };
        let p = sq.sample_uniform(5, 1000).unwrap().points;
        let idx = GridIndex::new(&p).unwrap();
        let xs = sq.sample_uniform(6, 10).unwrap().points;
        for x in xs.iter() {
            let r = good_radius(&sq, &idx, x, &cfg).unwrap();
            let eps = 1e-6;
            let y = [x[0] + eps, x[1]];
            if sq.contains(&y).unwrap() {
                let ry = good_radius(&sq, &idx, &y, &cfg).unwrap();
                // a shift by eps changes the cube by eps: allow tolerance plus probe jitter
                assert!(ry <= r * (1.0 + 0.2) + eps, "{r} {ry}");
            }
        }
    }

    fn check_cover(cover: &GoodCover, idx: &GridIndex, sq: &ConvexDomain) {
        assert!(half_cubes_disjoint(cover));
        for w in cover.cubes.windows(2) {
            assert!(w[0].radius >= w[1].radius);
        }
        let balls: Vec<&EmptyBall> = cover.balls().collect();
        for b in &balls {
            assert!(idx.distance(&b.center) > b.radius);
            assert!(sq.boundary_distance(&b.center) >= b.radius);
        }
        for cube in &cover.cubes {
            if let Some(b) = &cube.ball {
                let d = b.center.iter().zip(&cube.center).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
                assert!(d + b.radius <= 0.5 * cube.radius);
            }
        }
        for i in 0..balls.len() {
            for j in (i + 1)..balls.len() {
                let d = crate::geometry::distance(&balls[i].center, &balls[j].center);
                assert!(d > balls[i].radius + balls[j].radius);
            }
        }
    }

    #[test]
    fn grid_cover_has_comparable_radii_and_bounded_multiplicity() {
        let sq = ConvexDomain::unit_cube(2);
        let k = 32;
        let idx = GridIndex::new(&grid_points(k)).unwrap();
        let cfg = CoverConfig::default();
        let cover = build_good_cover(&sq, &idx, &cfg, 0.5 / k as f64).unwrap();
        check_cover(&cover, &idx, &sq);
        assert!(cover.multiplicity_observed <= 4, "{}", cover.multiplicity_observed);
        let rmax = cover.cubes[0].radius;
        let rmin = cover.cubes.last().unwrap().radius;
        assert!(rmax / rmin < 4.0, "{rmax} {rmin}");
        assert!(cover.balls().count() == cover.cubes.len());
    }

    #[test]
    fn hole_gets_first_cube() {
        let sq = ConvexDomain::unit_cube(2);
        let idx = GridIndex::new(&grid_with_hole(32, [0.5, 0.5], 0.1)).unwrap();
        let cfg = CoverConfig { c: 0.5, ..CoverConfig::default() };
        let cover = build_good_cover(&sq, &idx, &cfg, 1.0 / 64.0).unwrap();
        check_cover(&cover, &idx, &sq);
        let first = &cover.cubes[0];
        assert!(first.contains(&[0.5, 0.5]), "{first:?}");
        assert!(first.radius > 2.0 * cover.cubes[cover.cubes.len() / 2].radius);
    }

    #[test]
    fn every_candidate_is_covered_and_locator_agrees() {
        let sq = ConvexDomain::unit_cube(2);
        let p = sq.sample_uniform(9, 300).unwrap().points;
        let idx = GridIndex::new(&p).unwrap();
        let cfg = CoverConfig { c: 0.5, ..CoverConfig::default() };
        let mesh = 1.0 / 48.0;
        let cover = build_good_cover(&sq, &idx, &cfg, mesh).unwrap();
        check_cover(&cover, &idx, &sq);
        let (_, _, coords) = candidate_points(&sq, mesh).unwrap();
        let locator = CubeLocator::new(&cover, &sq);
        for x in coords.chunks_exact(2) {
            let first = cover.first_containing(x);
            assert!(first.is_some());
            assert_eq!(locator.locate(&cover, x), first);
        }
    }

    #[test]
    fn ball_sum_tracks_distance_integral_on_grids() {
        let sq = ConvexDomain::unit_cube(2);
        let cfg = CoverConfig { c: 0.5, ..CoverConfig::default() };
        let gamma = 2.0;
        let mut ratios = Vec::new();
        for k in [32usize, 64] {
            let idx = GridIndex::new(&grid_points(k)).unwrap();
            let cover = build_good_cover(&sq, &idx, &cfg, 0.5 / k as f64).unwrap();
            let s: f64 = cover.balls().map(|b| b.radius.powf(gamma + 2.0)).sum();
            let i = crate::distance::lgamma_norm(&sq, &idx, gamma, 0.25 / k as f64).unwrap().integral();
            ratios.push(s / i);
        }
        assert!((ratios[1] / ratios[0] - 1.0).abs() < 0.2, "{ratios:?}");
    }
}
