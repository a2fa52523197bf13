//! Bump-function fooling constructions and the lower bounds they give on the
//! worst-case error of any algorithm that only sees function values on `P`.
//!
//! The reference bump is `φ(x) = exp(1 − 1/(1−‖x‖²))` on the open unit ball.
//! A scaled copy `a·φ((x−z)/ρ)` has
//! `‖·‖_{L_q} = a ρ^{d/q} ‖φ‖_{L_q}` and
//! `‖·‖_{W^s_p}^p = Σ_k a^p ρ^{d−pk} S_k` with `S_k = Σ_{|α|=k} ‖D^α φ‖_p^p`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::cover::{EmptyBall, GoodCover};
use crate::distance::NormEstimate;
use crate::functions::{multi_indices, Smoothness, TestFunction};
use crate::geometry::ConvexDomain;
use crate::mesh::Mesh;
use crate::points::{GridIndex, PointSet};
use crate::stats::CompensatedSum;
use crate::{Error, Result};

/// `D^α φ(x)` for `|α| ≤ 3`.
pub fn bump_derivative(x: &[f64], alpha: &[u32]) -> f64 {
    let t: f64 = x.iter().map(|v| v * v).sum();
    if t >= 1.0 {
        return 0.0;
    }
    let inv = 1.0 / (1.0 - t);
    if inv > 700.0 {
        return 0.0;
    }
    let g = (1.0 - inv).exp();
    let mut idx = [0usize; 3];
    let mut order = 0;
    for (k, &a) in alpha.iter().enumerate() {
        for _ in 0..a {
            if order == 3 {
                return f64::NAN;
            }
            idx[order] = k;
            order += 1;
        }
    }
    let h1 = -inv * inv;
    let h2 = -2.0 * inv * inv * inv;
    let h3 = -6.0 * inv * inv * inv * inv;
    let g1 = g * h1;
    let g2 = g * (h2 + h1 * h1);
    let g3 = g * (h3 + 3.0 * h1 * h2 + h1 * h1 * h1);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    match order {
        0 => g,
        1 => 2.0 * g1 * x[idx[0]],
        2 => {
            let (i, j) = (idx[0], idx[1]);
            4.0 * g2 * x[i] * x[j] + 2.0 * g1 * delta(i, j)
        }
        _ => {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            8.0 * g3 * x[i] * x[j] * x[k]
                + 4.0 * g2 * (delta(i, j) * x[k] + delta(i, k) * x[j] + delta(j, k) * x[i])
        }
    }
}

pub fn bump(x: &[f64]) -> f64 {
    bump_derivative(x, &vec![0; x.len()])
}

/// Norms of the reference bump on `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceNorms {
    pub dim: usize,
    pub q: f64,
    pub p: f64,
    pub s: u32,
    /// `‖φ‖_{L_q}`.
    pub lq: f64,
    /// Per order `k ≤ s`: `S_k = Σ_{|α|=k} ‖D^α φ‖_p^p`, or for `p = ∞`
    /// `M_k = max_{|α|=k} ‖D^α φ‖_∞`.
    pub terms: Vec<f64>,
    /// Largest relative change between the two quadrature meshes.
    pub mesh_change: f64,
}

impl ReferenceNorms {
    /// `|φ|_{W^s_p}`.
    pub fn seminorm(&self) -> f64 {
        let top = self.terms[self.s as usize];
        if self.p.is_finite() {
            top.powf(1.0 / self.p)
        } else {
            top
        }
    }

    /// `‖φ‖_{W^s_p}`.
    pub fn norm(&self) -> f64 {
        if self.p.is_finite() {
            self.terms.iter().sum::<f64>().powf(1.0 / self.p)
        } else {
            self.terms.iter().copied().fold(0.0, f64::max)
        }
    }

    /// `‖a φ((·−z)/ρ)‖_{L_q}`.
    pub fn scaled_lq(&self, amplitude: f64, radius: f64) -> f64 {
        let d = self.dim as f64;
        if self.q.is_finite() {
            amplitude * radius.powf(d / self.q) * self.lq
        } else {
            amplitude * self.lq
        }
    }

    /// `‖a φ((·−z)/ρ)‖_{W^s_p}^p` for finite `p`.
    pub fn scaled_sobolev_pow(&self, amplitude: f64, radius: f64) -> f64 {
        let d = self.dim as f64;
        let p = self.p;
        let mut acc = 0.0;
        for (k, sk) in self.terms.iter().enumerate() {
            acc += amplitude.powf(p) * radius.powf(d - p * k as f64) * sk;
        }
        acc
    }

    /// `‖a φ((·−z)/ρ)‖_{W^s_p}`.
    pub fn scaled_sobolev(&self, amplitude: f64, radius: f64) -> f64 {
        if self.p.is_finite() {
            self.scaled_sobolev_pow(amplitude, radius).powf(1.0 / self.p)
        } else {
            self.terms
                .iter()
                .enumerate()
                .map(|(k, m)| amplitude * radius.powi(-(k as i32)) * m)
                .fold(0.0, f64::max)
        }
    }
}

struct Pass {
    lq: f64,
    terms: Vec<f64>,
}

fn reference_pass(dim: usize, q: f64, p: f64, orders: &[Vec<Vec<u32>>], mesh: f64) -> Result<Pass> {
    let lo = vec![-1.0; dim];
    let hi = vec![1.0; dim];
    let grid = Mesh::over_box(&lo, &hi, mesh)?;
    let vol = grid.cell_volume();
    let mut lq = CompensatedSum::new();
    let mut sums: Vec<CompensatedSum> = vec![CompensatedSum::new(); orders.len()];
    let n_alpha: usize = orders.iter().map(|o| o.len()).sum();
    let mut argmax: Vec<(f64, Vec<f64>)> = vec![(0.0, vec![0.0; dim]); n_alpha];
    grid.for_each(|c, _, _| {
        let phi = bump(c);
        if phi == 0.0 && c.iter().map(|v| v * v).sum::<f64>() >= 1.0 {
            return;
        }
        if q.is_finite() {
            lq.add(phi.powf(q) * vol);
        }
        let mut slot = 0;
        for (k, alphas) in orders.iter().enumerate() {
            for a in alphas {
                let v = bump_derivative(c, a).abs();
                if p.is_finite() {
                    sums[k].add(v.powf(p) * vol);
                }
                if v > argmax[slot].0 {
                    argmax[slot] = (v, c.to_vec());
                }
                slot += 1;
            }
        }
    });
    let lq = if q.is_finite() { lq.value().powf(1.0 / q) } else { 1.0 };
    let terms = if p.is_finite() {
        sums.iter().map(|s| s.value()).collect()
    } else {
        let mut slot = 0;
        orders
            .iter()
            .map(|alphas| {
                let mut m = 0.0f64;
                for a in alphas {
                    m = m.max(refine_sup(a, &argmax[slot].1, mesh));
                    slot += 1;
                }
                m
            })
            .collect()
    };
    Ok(Pass { lq, terms })
}

/// Compass search for `sup |D^α φ|` from a grid maximizer.
fn refine_sup(alpha: &[u32], start: &[f64], mesh: f64) -> f64 {
    let mut x = start.to_vec();
    let mut best = bump_derivative(&x, alpha).abs();
    let mut step = mesh;
    while step > 1e-13 {
        let mut improved = false;
        for k in 0..x.len() {
            for sign in [-1.0, 1.0] {
                let mut y = x.clone();
                y[k] += sign * step;
                let v = bump_derivative(&y, alpha).abs();
                if v > best {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Midpoint quadrature of `|φ|^q` and `|D^α φ|^p` over `[-1,1]^d` at
/// `mesh` and `mesh/2`; fails unless the two agree to `1e-4` relative.
pub fn reference_norms(dim: usize, q: f64, p: f64, s: u32, mesh: f64) -> Result<ReferenceNorms> {
    if s > 3 {
        return Err(Error::Unsupported(format!("smoothness s = {s} exceeds 3")));
    }
    if dim == 0 || !(q > 0.0) || !(p >= 1.0) {
        return Err(Error::InvalidInput("need d ≥ 1, q > 0 and p ≥ 1".into()));
    }
    let orders: Vec<Vec<Vec<u32>>> = (0..=s).map(|k| multi_indices(dim, k)).collect();
    let coarse = reference_pass(dim, q, p, &orders, mesh)?;
    let fine = reference_pass(dim, q, p, &orders, 0.5 * mesh)?;
    let rel = |a: f64, b: f64| if b == 0.0 { (a - b).abs() } else { ((a - b) / b).abs() };
    let mut change = rel(coarse.lq, fine.lq);
    for (a, b) in coarse.terms.iter().zip(&fine.terms) {
        change = change.max(rel(*a, *b));
    }
    if !(change <= 1e-4) {
        return Err(Error::Numerical(format!("reference norms not converged at mesh {mesh}: change {change:e}")));
    }
    Ok(ReferenceNorms { dim, q, p, s, lq: fine.lq, terms: fine.terms, mesh_change: change })
}

/// `a·φ((x−z)/ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    pub center: Vec<f64>,
    pub radius: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn derivative(&self, x: &[f64], alpha: &[u32]) -> f64 {
        let y: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| (a - b) / self.radius).collect();
        let order: u32 = alpha.iter().sum();
        self.amplitude * self.radius.powi(-(order as i32)) * bump_derivative(&y, alpha)
    }
}

/// Sum of bumps with pairwise disjoint supports, times `scale`.
#[derive(Debug, Clone)]
pub struct BumpSum {
    bumps: Vec<Bump>,
    scale: f64,
    centers: Option<GridIndex>,
    max_radius: f64,
    smoothness: Smoothness,
}

impl BumpSum {
    pub fn new(bumps: Vec<Bump>, scale: f64, smoothness: Smoothness) -> Result<Self> {
        let max_radius = bumps.iter().map(|b| b.radius).fold(0.0, f64::max);
        let centers = if bumps.is_empty() {
            None
        } else {
            let rows: Vec<&[f64]> = bumps.iter().map(|b| b.center.as_slice()).collect();
            Some(GridIndex::new(&PointSet::from_rows(&rows)?)?)
        };
        Ok(Self { bumps, scale, centers, max_radius, smoothness })
    }

    pub fn bumps(&self) -> &[Bump] {
        &self.bumps
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn containing(&self, x: &[f64]) -> Option<&Bump> {
        let centers = self.centers.as_ref()?;
        let mut found = None;
        centers.for_each_within(x, self.max_radius, |i, _, d| {
            if d < self.bumps[i].radius {
                found = Some(i);
            }
        });
        found.map(|i| &self.bumps[i])
    }

    /// Largest `|f(x)|` over the points; zero when every support misses `P`.
    pub fn max_on(&self, points: &PointSet) -> f64 {
        points.iter().map(|x| self.value(x).abs()).fold(0.0, f64::max)
    }
}

impl TestFunction for BumpSum {
    fn name(&self) -> String {
        format!("bump-sum({} bumps)", self.bumps.len())
    }

    fn dim(&self) -> usize {
        self.bumps.first().map_or(0, |b| b.center.len())
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.containing(x).map_or(0.0, |b| self.scale * b.derivative(x, &vec![0; x.len()]))
    }

    fn derivative(&self, x: &[f64], alpha: &[u32]) -> f64 {
        self.containing(x).map_or(0.0, |b| self.scale * b.derivative(x, alpha))
    }

    fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
}

/// A fooling function together with its exact norms.
#[derive(Debug, Clone)]
pub struct Fooling {
    pub function: BumpSum,
    /// `‖f‖_{L_q} / ‖f‖_{W^s_p}`: the error every algorithm makes on `f` or
    /// on `−f`, both of which agree with zero on `P`.
    pub lower_bound: f64,
    pub lq_norm: f64,
    pub sobolev_norm: f64,
}

/// `γ = s / (1/q − 1/p)` for `q < p`, `∞` otherwise.
pub fn gamma_for(s: f64, p: f64, q: f64) -> f64 {
    let inv = 1.0 / q - 1.0 / p;
    if inv > 0.0 {
        s / inv
    } else {
        f64::INFINITY
    }
}

fn check_refs(refs: &ReferenceNorms, dim: usize, q: f64, p: f64, s: u32) -> Result<()> {
    if refs.dim != dim || refs.q != q || refs.p != p || refs.s != s {
        return Err(Error::InvalidInput("reference norms were computed for other parameters".into()));
    }
    Ok(())
}

/// Result of [`single_hole_fooling`].
#[derive(Debug, Clone)]
pub struct SingleHole {
    pub fooling: Fooling,
    /// `h = min(r, ½ h_{P,Ω})` with the certified lower covering bracket.
    pub h: f64,
    pub witness: Vec<f64>,
}

/// One normalized bump in the largest hole: `h = min(r, ½·h_{P,Ω})`, a ball
/// placed inside `Ω ∩ B(x₀, h)` around the covering witness `x₀`.
pub fn single_hole_fooling(
    domain: &ConvexDomain,
    index: &GridIndex,
    s: u32,
    covering: &NormEstimate,
    refs: &ReferenceNorms,
) -> Result<SingleHole> {
    check_refs(refs, domain.dim(), refs.q, refs.p, s)?;
    let witness = covering
        .witness
        .clone()
        .ok_or_else(|| Error::Numerical("covering estimate carries no witness point".into()))?;
    let r = domain.cone_parameters().radius;
    let h = r.min(0.5 * covering.lower);
    if !(h > 0.0) || index.distance(&witness) < h {
        return Err(Error::Numerical("no hole found at probe resolution".into()));
    }
    let (center, placed) = domain.place_ball(&witness, h);
    let radius = placed * (1.0 - 1e-9);
    if !(radius > 0.0) || index.distance(&center) <= radius {
        return Err(Error::Numerical("could not place an empty ball in the hole".into()));
    }
    let lq = refs.scaled_lq(1.0, radius);
    let sob = refs.scaled_sobolev(1.0, radius);
    let smooth = Smoothness { s: s as f64, p: refs.p };
    let function = BumpSum::new(vec![Bump { center, radius, amplitude: 1.0 }], 1.0 / sob, smooth)?;
    Ok(SingleHole { fooling: Fooling { function, lower_bound: lq / sob, lq_norm: lq / sob, sobolev_norm: 1.0 }, h, witness })
}

/// `Σ_i d_i^{s+γ/p} φ((x−z_i)/d_i)` over disjoint empty balls, normalized.
/// The Sobolev norm is evaluated exactly ball by ball.
pub fn fooling_from_balls(balls: &[EmptyBall], s: u32, refs: &ReferenceNorms) -> Result<Fooling> {
    if balls.is_empty() {
        return Err(Error::InvalidInput("no empty balls to build a fooling function".into()));
    }
    let p = refs.p;
    let q = refs.q;
    let gamma = gamma_for(s as f64, p, q);
    let exponent = if p.is_finite() { s as f64 + gamma / p } else { s as f64 };
    let mut lq_pow = CompensatedSum::new();
    let mut sob_pow = CompensatedSum::new();
    let mut sob_max = 0.0f64;
    let mut lq_max = 0.0f64;
    let mut bumps = Vec::with_capacity(balls.len());
    for b in balls {
        let a = b.radius.powf(exponent);
        let l = refs.scaled_lq(a, b.radius);
        if q.is_finite() {
            lq_pow.add(l.powf(q));
        } else {
            lq_max = lq_max.max(l);
        }
        if p.is_finite() {
            sob_pow.add(refs.scaled_sobolev_pow(a, b.radius));
        } else {
            sob_max = sob_max.max(refs.scaled_sobolev(a, b.radius));
        }
        bumps.push(Bump { center: b.center.clone(), radius: b.radius, amplitude: a });
    }
    let lq = if q.is_finite() { lq_pow.value().powf(1.0 / q) } else { lq_max };
    let sob = if p.is_finite() { sob_pow.value().powf(1.0 / p) } else { sob_max };
    let function = BumpSum::new(bumps, 1.0 / sob, Smoothness { s: s as f64, p })?;
    Ok(Fooling { function, lower_bound: lq / sob, lq_norm: lq, sobolev_norm: sob })
}

/// Multi-hole fooling function over the empty balls of a good cover.
pub fn multi_hole_fooling(cover: &GoodCover, s: u32, refs: &ReferenceNorms) -> Result<Fooling> {
    let balls: Vec<EmptyBall> = cover.balls().cloned().collect();
    if balls.is_empty() {
        return Err(Error::InvalidInput("cover has no empty balls".into()));
    }
    fooling_from_balls(&balls, s, refs)
}

/// Greedy maximal family of disjoint empty balls: cell centers of a grid
/// over `Ω` are visited by decreasing `min(dist(z,P), boundary distance)`
/// and kept when their ball misses every ball kept so far.
pub fn greedy_empty_balls(domain: &ConvexDomain, index: &GridIndex, mesh: f64) -> Result<Vec<EmptyBall>> {
    let (lo, hi) = domain.bounding_box();
    let grid = Mesh::over_box(lo, hi, mesh)?;
    let dim = domain.dim();
    let mut cand: Vec<(f64, Vec<f64>)> = Vec::new();
    grid.for_each(|c, _, _| {
        if domain.contains_unchecked(c) {
            let r = index.distance(c).min(domain.boundary_distance(c)) * (1.0 - 1e-9);
            if r > 0.0 {
                cand.push((r, c.to_vec()));
            }
        }
    });
    cand.sort_by(|a, b| b.0.total_cmp(&a.0));
    let cell = 4.0 * mesh;
    let key = |x: &[f64]| -> Vec<i64> { x.iter().map(|v| (v / cell).floor() as i64).collect() };
    let mut buckets: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    let mut kept: Vec<EmptyBall> = Vec::new();
    for (r, z) in cand {
        let a = key(&z.iter().map(|v| v - r).collect::<Vec<_>>());
        let b = key(&z.iter().map(|v| v + r).collect::<Vec<_>>());
        let mut free = true;
        for_box(&a, &b, |k| {
            if let Some(list) = buckets.get(k) {
                for &j in list {
                    let other = &kept[j];
                    if crate::geometry::distance(&other.center, &z) < other.radius + r {
                        free = false;
                    }
                }
            }
        });
        if free {
            let id = kept.len();
            for_box(&a, &b, |k| buckets.entry(k.to_vec()).or_default().push(id));
            kept.push(EmptyBall { center: z, radius: r });
        }
        debug_assert_eq!(kept.last().map_or(dim, |b| b.center.len()), dim);
    }
    Ok(kept)
}

fn for_box(a: &[i64], b: &[i64], mut f: impl FnMut(&[i64])) {
    let mut cur = a.to_vec();
    loop {
        f(&cur);
        let mut k = 0;
        while k < cur.len() {
            if cur[k] < b[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = a[k];
            k += 1;
        }
        if k == cur.len() {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_good_cover, CoverConfig};
    use crate::distance::{covering_radius, lgamma_norm};

    fn finite_difference(alpha: &[u32], k: usize, x: &[f64]) -> f64 {
        let h = 1e-5;
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[k] += h;
        xm[k] -= h;
        (bump_derivative(&xp, alpha) - bump_derivative(&xm, alpha)) / (2.0 * h)
    }

    #[test]
    fn bump_basics() {
        assert_eq!(bump(&[0.0, 0.0]), 1.0);
        assert_eq!(bump(&[1.0, 0.0]), 0.0);
        assert_eq!(bump(&[0.999_999, 0.0]), 0.0);
        assert!(bump(&[0.3, -0.4]) > 0.0 && bump(&[0.3, -0.4]) < 1.0);
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        for x in [[0.2, -0.3, 0.1], [0.5, 0.4, -0.2], [-0.1, 0.05, 0.6]] {
            for order in 0..3 {
                for alpha in multi_indices(3, order) {
                    for k in 0..3 {
                        let mut up = alpha.clone();
                        up[k] += 1;
                        let exact = bump_derivative(&x, &up);
                        let fd = finite_difference(&alpha, k, &x);
                        assert!((exact - fd).abs() <= 1e-5 * exact.abs().max(1.0), "{alpha:?} {k}: {exact} {fd}");
                    }
                }
            }
        }
    }

    #[test]
    fn reference_l1_in_one_dimension() {
        let r = reference_norms(1, 1.0, 2.0, 2, 1e-3).unwrap();
        assert!((r.lq - 1.206_900_322_437_876_5).abs() < 1e-6, "{}", r.lq);
        let inf = reference_norms(2, f64::INFINITY, f64::INFINITY, 1, 0.02).unwrap();
        assert_eq!(inf.lq, 1.0);
        assert_eq!(inf.terms[0], 1.0);
        assert!(reference_norms(2, 1.0, 2.0, 4, 0.1).is_err());
    }

    #[test]
    fn scaling_law_matches_quadrature() {
        let refs = reference_norms(2, 2.0, 2.0, 1, 0.01).unwrap();
        let rho = 0.3;
        let mesh = Mesh::over_box(&[-rho, -rho], &[rho, rho], rho / 200.0).unwrap();
        let mut acc = CompensatedSum::new();
        let vol = mesh.cell_volume();
        mesh.for_each(|c, _, _| {
            let y = [c[0] / rho, c[1] / rho];
            acc.add(bump(&y).powi(2) * vol);
        });
        let direct = acc.value().sqrt();
        assert!((direct - refs.scaled_lq(1.0, rho)).abs() < 1e-6, "{direct}");
    }

    fn grid(k: usize) -> PointSet {
        let mut rows = Vec::new();
        for i in 0..k {
            for j in 0..k {
                rows.push([(i as f64 + 0.5) / k as f64, (j as f64 + 0.5) / k as f64]);
            }
        }
        PointSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn single_hole_vanishes_on_points_and_scales() {
        let sq = ConvexDomain::unit_cube(2);
        let refs = reference_norms(2, f64::INFINITY, 2.0, 2, 0.02).unwrap();
        let mut bounds = Vec::new();
        let mut hs = Vec::new();
        for k in [8usize, 16, 32] {
            let p = grid(k);
            let idx = GridIndex::new(&p).unwrap();
            let cov = covering_radius(&sq, &idx, 0.1 / k as f64).unwrap();
            let hole = single_hole_fooling(&sq, &idx, 2, &cov, &refs).unwrap();
            assert_eq!(hole.fooling.function.max_on(&p), 0.0);
            bounds.push(hole.fooling.lower_bound);
            hs.push(cov.value);
        }
        // ‖f_*‖ ≍ h^{s − d/p + d/q} = h^{1}
        for i in 1..bounds.len() {
            let ratio = (bounds[i] / bounds[i - 1]) / (hs[i] / hs[i - 1]);
            assert!((ratio - 1.0).abs() < 0.1, "{bounds:?}");
        }
    }

    #[test]
    fn multi_hole_single_ball_matches_single_hole() {
        let sq = ConvexDomain::unit_cube(2);
        let refs = reference_norms(2, 1.0, f64::INFINITY, 2, 0.02).unwrap();
        let idx = GridIndex::new(&grid(8)).unwrap();
        let cov = covering_radius(&sq, &idx, 0.01).unwrap();
        let single = single_hole_fooling(&sq, &idx, 2, &cov, &refs).unwrap();
        let b = &single.fooling.function.bumps()[0];
        let multi = fooling_from_balls(&[EmptyBall { center: b.center.clone(), radius: b.radius }], 2, &refs).unwrap();
        assert!((multi.lower_bound - single.fooling.lower_bound).abs() <= 1e-8 * single.fooling.lower_bound);
    }

    #[test]
    fn multi_hole_bound_tracks_distance_norm() {
        let sq = ConvexDomain::unit_cube(2);
        let refs = reference_norms(2, 1.0, f64::INFINITY, 2, 0.02).unwrap();
        let cfg = CoverConfig { c: 0.5, ..CoverConfig::default() };
        let mut ratios = Vec::new();
        for k in [32usize, 64] {
            let p = grid(k);
            let idx = GridIndex::new(&p).unwrap();
            let cover = build_good_cover(&sq, &idx, &cfg, 0.5 / k as f64).unwrap();
            let f = multi_hole_fooling(&cover, 2, &refs).unwrap();
            assert_eq!(f.function.max_on(&p), 0.0);
            let d2 = lgamma_norm(&sq, &idx, 2.0, 0.25 / k as f64).unwrap().value;
            ratios.push(f.lower_bound / (d2 * d2));
        }
        assert!((ratios[1] / ratios[0] - 1.0).abs() < 0.25, "{ratios:?}");
    }

    #[test]
    fn greedy_balls_are_disjoint_empty_and_inside() {
        let sq = ConvexDomain::unit_cube(2);
        let p = sq.sample_uniform(3, 200).unwrap().points;
        let idx = GridIndex::new(&p).unwrap();
        let balls = greedy_empty_balls(&sq, &idx, 1.0 / 64.0).unwrap();
        assert!(!balls.is_empty());
        for (i, a) in balls.iter().enumerate() {
            assert!(idx.distance(&a.center) > a.radius);
            assert!(sq.boundary_distance(&a.center) >= a.radius);
            for b in &balls[i + 1..] {
                assert!(crate::geometry::distance(&a.center, &b.center) >= a.radius + b.radius);
            }
        }
        for w in balls.windows(2) {
            assert!(w[0].radius >= w[1].radius);
        }
        let refs = reference_norms(2, 1.0, f64::INFINITY, 2, 0.02).unwrap();
        let f = fooling_from_balls(&balls, 2, &refs).unwrap();
        assert_eq!(f.function.max_on(&p), 0.0);
        assert!(f.function.value(&balls[0].center) > 0.0);
    }
}
