//! Optimal-weight kernel quadrature in `W^s_2(Ω)`.
//!
//! For a rule `Σ w_i f(x_i)` the squared worst-case error over the unit
//! ball of the reproducing kernel space is `wᵀKw − 2wᵀb + c` with the Gram
//! matrix `K`, the embedding `b_i = ∫_Ω K(x,x_i) dx` and
//! `c = ∫_Ω∫_Ω K(x,y) dx dy`. Optimal weights solve `K w = b`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::geometry::{ConvexDomain, Shape};
use crate::linalg::{cholesky_with_jitter, dot, mat_vec, norm2};
use crate::points::PointSet;
use crate::stats::CompensatedSum;
use crate::{Error, Result};

/// Half-integer Matérn smoothness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nu {
    Half,
    ThreeHalves,
    FiveHalves,
}

impl Nu {
    pub fn value(self) -> f64 {
        match self {
            Nu::Half => 0.5,
            Nu::ThreeHalves => 1.5,
            Nu::FiveHalves => 2.5,
        }
    }

    /// `ν = s − d/2`.
    pub fn for_sobolev(s: f64, dim: usize) -> Result<Self> {
        let nu = s - dim as f64 / 2.0;
        match nu {
            v if (v - 0.5).abs() < 1e-12 => Ok(Nu::Half),
            v if (v - 1.5).abs() < 1e-12 => Ok(Nu::ThreeHalves),
            v if (v - 2.5).abs() < 1e-12 => Ok(Nu::FiveHalves),
            _ => Err(Error::Unsupported(format!("Matérn smoothness ν = {nu} (need 1/2, 3/2 or 5/2)"))),
        }
    }
}

/// Matérn kernel with unit variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub nu: Nu,
    pub length_scale: f64,
}

impl Kernel {
    pub fn new(nu: Nu, length_scale: f64) -> Result<Self> {
        if !(length_scale > 0.0) || !length_scale.is_finite() {
            return Err(Error::InvalidInput("length scale must be positive".into()));
        }
        Ok(Self { nu, length_scale })
    }

    pub fn matern(nu: Nu) -> Self {
        Self { nu, length_scale: 1.0 }
    }

    /// Kernel as a function of the distance `r`.
    pub fn radial(&self, r: f64) -> f64 {
        let t = r / self.length_scale;
        match self.nu {
            Nu::Half => (-t).exp(),
            Nu::ThreeHalves => {
                let a = 3.0f64.sqrt() * t;
                (1.0 + a) * (-a).exp()
            }
            Nu::FiveHalves => {
                let a = 5.0f64.sqrt() * t;
                (1.0 + a + a * a / 3.0) * (-a).exp()
            }
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.radial(crate::geometry::distance(x, y))
    }
}

/// Radical-inverse Halton sequence in the first `dim` prime bases.
#[derive(Debug, Clone)]
pub struct Halton {
    bases: Vec<u64>,
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

impl Halton {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > PRIMES.len() {
            return Err(Error::Unsupported(format!("Halton dimension {dim}")));
        }
        Ok(Self { bases: PRIMES[..dim].to_vec() })
    }

    /// Point number `i` (starting at 1 to skip the origin) in `[0,1)^d`.
    pub fn point(&self, i: u64, out: &mut [f64]) {
        for (slot, &b) in out.iter_mut().zip(&self.bases) {
            let mut f = 1.0;
            let mut r = 0.0;
            let mut k = i;
            let inv = 1.0 / b as f64;
            while k > 0 {
                f *= inv;
                r += f * (k % b) as f64;
                k /= b;
            }
            *slot = r;
        }
    }
}

/// Number of low-discrepancy nodes for `b` and per factor for `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegrationSpec {
    pub samples: usize,
    pub product_samples: usize,
    /// Use the closed forms on intervals for ν ∈ {1/2, 3/2}.
    pub closed_form_1d: bool,
}

impl Default for IntegrationSpec {
    fn default() -> Self {
        Self { samples: 1 << 15, product_samples: 1 << 11, closed_form_1d: true }
    }
}

/// Halton nodes of the bounding box that fall in `Ω`, and the box volume.
fn nodes(domain: &ConvexDomain, count: usize) -> Result<(Vec<f64>, f64)> {
    let dim = domain.dim();
    let (lo, hi) = domain.bounding_box();
    let h = Halton::new(dim)?;
    let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let mut u = vec![0.0; dim];
    let mut out = Vec::with_capacity(count * dim);
    for i in 1..=count as u64 {
        h.point(i, &mut u);
        for k in 0..dim {
            u[k] = lo[k] + u[k] * (hi[k] - lo[k]);
        }
        // masked nodes still count towards the box average
        out.extend_from_slice(&u);
    }
    Ok((out, vol))
}

fn interval(domain: &ConvexDomain) -> Option<(f64, f64)> {
    match domain.shape() {
        Shape::Box { lo, hi } if lo.len() == 1 => Some((lo[0], hi[0])),
        _ => None,
    }
}

/// `∫_0^u K(r) dr` for the closed-form kernels.
fn radial_integral(kernel: &Kernel, u: f64) -> Option<f64> {
    let l = kernel.length_scale;
    match kernel.nu {
        Nu::Half => Some(l * (1.0 - (-u / l).exp())),
        Nu::ThreeHalves => {
            let a = 3.0f64.sqrt() / l;
            Some(2.0 / a - (2.0 / a + u) * (-a * u).exp())
        }
        Nu::FiveHalves => None,
    }
}

/// `c` on an interval of length `len` for the closed-form kernels.
fn double_integral_1d(kernel: &Kernel, len: f64) -> Option<f64> {
    let l = kernel.length_scale;
    match kernel.nu {
        Nu::Half => Some(2.0 * l * (len - l * (1.0 - (-len / l).exp()))),
        Nu::ThreeHalves => {
            let a = 3.0f64.sqrt() / l;
            let e = (-a * len).exp();
            Some(2.0 * (2.0 * len / a - (3.0 * (1.0 - e) - a * len * e) / (a * a)))
        }
        Nu::FiveHalves => None,
    }
}

/// Embedding vector with the discrepancy between two half batches.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub values: Vec<f64>,
    /// `max_i |b_i(first half) − b_i(second half)|`; zero for closed forms.
    pub discrepancy: f64,
}

/// `b_i = ∫_Ω K(x, x_i) dx`.
pub fn kernel_embedding(domain: &ConvexDomain, points: &PointSet, kernel: &Kernel, spec: &IntegrationSpec) -> Result<Embedding> {
    if points.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: points.dim() });
    }
    if spec.closed_form_1d {
        if let Some((a, b)) = interval(domain) {
            if radial_integral(kernel, 0.0).is_some() {
                let values = points
                    .iter()
                    .map(|x| {
                        let t = x[0].clamp(a, b);
                        radial_integral(kernel, t - a).unwrap_or(0.0) + radial_integral(kernel, b - t).unwrap_or(0.0)
                    })
                    .collect();
                return Ok(Embedding { values, discrepancy: 0.0 });
            }
        }
    }
    let samples = spec.samples.max(2) & !1;
    let (nodes, vol) = nodes(domain, samples)?;
    let dim = domain.dim();
    let inside: Vec<bool> = nodes.chunks_exact(dim).map(|u| domain.contains_unchecked(u)).collect();
    let half = samples / 2;
    let mut values = Vec::with_capacity(points.len());
    let mut discrepancy = 0.0f64;
    for x in points.iter() {
        let mut first = CompensatedSum::new();
        let mut second = CompensatedSum::new();
        for (j, u) in nodes.chunks_exact(dim).enumerate() {
            if inside[j] {
                let k = kernel.eval(u, x);
                if j < half {
                    first.add(k);
                } else {
                    second.add(k);
                }
            }
        }
        let b1 = vol * first.value() / half as f64;
        let b2 = vol * second.value() / (samples - half) as f64;
        discrepancy = discrepancy.max((b1 - b2).abs());
        values.push(0.5 * (b1 + b2));
    }
    Ok(Embedding { values, discrepancy })
}

/// `c = ∫_Ω∫_Ω K(x,y) dx dy` on product nodes, or in closed form on
/// intervals.
pub fn initial_error_sq(domain: &ConvexDomain, kernel: &Kernel, spec: &IntegrationSpec) -> Result<f64> {
    if spec.closed_form_1d {
        if let Some((a, b)) = interval(domain) {
            if let Some(c) = double_integral_1d(kernel, b - a) {
                return Ok(c);
            }
        }
    }
    let m = spec.product_samples.max(1);
    let (nodes, vol) = nodes(domain, m)?;
    let dim = domain.dim();
    let inside: Vec<&[f64]> = nodes.chunks_exact(dim).filter(|u| domain.contains_unchecked(u)).collect();
    let mut acc = CompensatedSum::new();
    for (i, x) in inside.iter().enumerate() {
        acc.add(1.0);
        for y in &inside[i + 1..] {
            acc.add(2.0 * kernel.eval(x, y));
        }
    }
    let scale = vol / m as f64;
    Ok(acc.value() * scale * scale)
}

/// Gram matrix `(K(x_i, x_j))`, row-major.
pub fn gram(points: &PointSet, kernel: &Kernel) -> Vec<f64> {
    let n = points.len();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        k[i * n + i] = kernel.radial(0.0);
        for j in 0..i {
            let v = kernel.eval(points.point(i), points.point(j));
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

/// Squared worst-case error `wᵀKw − 2wᵀb + c` and its clamped root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCase {
    pub value: f64,
    pub raw_sq: f64,
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: PointSet,
    pub weights: Vec<f64>,
    pub gram: Vec<f64>,
    pub embedding: Vec<f64>,
    pub initial_error_sq: f64,
    pub jitter: f64,
    pub duplicates_removed: usize,
    pub embedding_discrepancy: f64,
    /// `‖K w − b‖ / ‖b‖` for the unjittered Gram matrix.
    pub residual: f64,
}

impl QuadratureRule {
    /// Optimal weights `K w = b`; duplicate points are collapsed first.
    pub fn optimal(domain: &ConvexDomain, points: &PointSet, kernel: &Kernel, spec: &IntegrationSpec) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let (points, duplicates_removed) = points.deduplicated();
        let n = points.len();
        let k = gram(&points, kernel);
        let emb = kernel_embedding(domain, &points, kernel, spec)?;
        let c = initial_error_sq(domain, kernel, spec)?;
        let factor = cholesky_with_jitter(&k, n).map_err(|jitter| Error::Degenerate { jitter })?;
        let weights = factor.factor.solve(&emb.values);
        let kw = mat_vec(&k, n, &weights);
        let diff: Vec<f64> = kw.iter().zip(&emb.values).map(|(a, b)| a - b).collect();
        let bn = norm2(&emb.values);
        let residual = if bn > 0.0 { norm2(&diff) / bn } else { norm2(&diff) };
        Ok(Self {
            points,
            weights,
            gram: k,
            embedding: emb.values,
            initial_error_sq: c,
            jitter: factor.jitter,
            duplicates_removed,
            embedding_discrepancy: emb.discrepancy,
            residual,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn worst_case_error(&self, w: &[f64]) -> Result<WorstCase> {
        let n = self.len();
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
        let kw = mat_vec(&self.gram, n, w);
        let raw_sq = dot(w, &kw) - 2.0 * dot(w, &self.embedding) + self.initial_error_sq;
        Ok(WorstCase { value: raw_sq.max(0.0).sqrt(), raw_sq })
    }

    pub fn optimal_error(&self) -> WorstCase {
        self.worst_case_error(&self.weights).expect("weights match the rule")
    }

    /// `c − ⟨b, w*⟩`, algebraically equal to the optimal squared error.
    pub fn optimal_error_sq_identity(&self) -> f64 {
        self.initial_error_sq - dot(&self.embedding, &self.weights)
    }

    /// Equal weights `vol(Ω)/n`.
    pub fn equal_weights(&self, volume: f64) -> Vec<f64> {
        vec![volume / self.len() as f64; self.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn unit() -> ConvexDomain {
        ConvexDomain::unit_cube(1)
    }

    fn line(v: &[f64]) -> PointSet {
        PointSet::new(1, v.to_vec()).unwrap()
    }

    #[test]
    fn kernel_values() {
        let k = Kernel::matern(Nu::Half);
        assert_eq!(gram(&line(&[0.3]), &k), vec![1.0]);
        let g = gram(&line(&[0.0, 1.0]), &k);
        assert!((g[1] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((g[1] - 0.367_879).abs() < 1e-6);
        for nu in [Nu::ThreeHalves, Nu::FiveHalves] {
            let k = Kernel::matern(nu);
            assert_eq!(k.radial(0.0), 1.0);
            assert!(k.radial(0.5) < 1.0 && k.radial(2.0) < k.radial(0.5));
        }
        assert_eq!(Nu::for_sobolev(1.0, 1).unwrap(), Nu::Half);
        assert_eq!(Nu::for_sobolev(2.5, 2).unwrap(), Nu::ThreeHalves);
        assert!(Nu::for_sobolev(2.0, 2).is_err());
        assert!(Nu::for_sobolev(1.2, 1).is_err());
    }

    #[test]
    fn closed_forms_one_point() {
        let rule = QuadratureRule::optimal(&unit(), &line(&[0.5]), &Kernel::matern(Nu::Half), &IntegrationSpec::default()).unwrap();
        let b = 2.0 * (1.0 - (-0.5f64).exp());
        assert!((rule.embedding[0] - b).abs() < 1e-15);
        assert!((rule.embedding[0] - 0.786_938_680_574_733_2).abs() < 1e-12);
        assert!((rule.initial_error_sq - 0.735_758_882_342_884_7).abs() < 1e-12);
        assert!((rule.weights[0] - 0.786_939).abs() < 1e-6);
        let wce = rule.optimal_error();
        assert!((wce.value - 0.341_301_033_338_873_35).abs() < 1e-6);
        assert!((wce.raw_sq - 0.116_486_395_358_182_73).abs() < 1e-12);
        assert!((wce.raw_sq - rule.optimal_error_sq_identity()).abs() < 1e-10);
        let zero = rule.worst_case_error(&[0.0]).unwrap();
        assert!((zero.value - rule.initial_error_sq.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn quasi_monte_carlo_agrees_with_closed_forms() {
        let spec = IntegrationSpec { closed_form_1d: false, ..IntegrationSpec::default() };
        let exact = IntegrationSpec::default();
        for nu in [Nu::Half, Nu::ThreeHalves] {
            let k = Kernel::matern(nu);
            let p = line(&[0.1, 0.5, 0.93]);
            let a = kernel_embedding(&unit(), &p, &k, &spec).unwrap();
            let b = kernel_embedding(&unit(), &p, &k, &exact).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() < 1e-3, "{x} {y}");
            }
            assert!(a.discrepancy < 1e-3);
            let c1 = initial_error_sq(&unit(), &k, &spec).unwrap();
            let c2 = initial_error_sq(&unit(), &k, &exact).unwrap();
            assert!((c1 - c2).abs() < 2e-3, "{c1} {c2}");
        }
        let c = initial_error_sq(&unit(), &Kernel::matern(Nu::ThreeHalves), &exact).unwrap();
        assert!((c - 0.867_534_501_579_860_6).abs() < 1e-12);
    }

    #[test]
    fn embedding_grows_with_domain_and_respects_symmetry() {
        let k = Kernel::matern(Nu::ThreeHalves);
        let spec = IntegrationSpec { samples: 1 << 14, ..IntegrationSpec::default() };
        let x = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        let small = ConvexDomain::cuboid(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let large = ConvexDomain::cuboid(vec![-3.0, -3.0], vec![3.0, 3.0]).unwrap();
        let bs = kernel_embedding(&small, &x, &k, &spec).unwrap().values[0];
        let bl = kernel_embedding(&large, &x, &k, &spec).unwrap().values[0];
        assert!(bl > bs);
        let sq = ConvexDomain::unit_cube(2);
        let p = PointSet::from_rows(&[[0.25, 0.5], [0.75, 0.5]]).unwrap();
        let rule = QuadratureRule::optimal(&sq, &p, &k, &spec).unwrap();
        assert!((rule.embedding[0] - rule.embedding[1]).abs() < 1e-3);
        let one = QuadratureRule::optimal(&unit(), &line(&[0.25, 0.75]), &Kernel::matern(Nu::Half), &IntegrationSpec::default()).unwrap();
        assert!((one.weights[0] - one.weights[1]).abs() < 1e-12);
    }

    #[test]
    fn initial_error_bounds() {
        let sq = ConvexDomain::ball(vec![0.0, 0.0], 1.0).unwrap();
        let spec = IntegrationSpec { product_samples: 512, ..IntegrationSpec::default() };
        let c = initial_error_sq(&sq, &Kernel::matern(Nu::FiveHalves), &spec).unwrap();
        let vol = core::f64::consts::PI;
        assert!(c > 0.0 && c <= vol * vol);
    }

    #[test]
    fn gram_eigenvalues_before_jitter() {
        use nalgebra::DMatrix;
        let sq = ConvexDomain::unit_cube(2);
        for (seed, nu) in [(1u64, Nu::Half), (2, Nu::ThreeHalves), (3, Nu::FiveHalves)] {
            let p = sq.sample_uniform(seed, 60).unwrap().points;
            let k = gram(&p, &Kernel::matern(nu));
            let n = p.len();
            let m = DMatrix::from_row_slice(n, n, &k);
            let trace: f64 = (0..n).map(|i| k[i * n + i]).sum();
            let min = m.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-10 * trace, "{min}");
        }
    }

    #[test]
    fn optimal_weights_beat_perturbations_and_equal_weights() {
        let mut rng = crate::rng::stream(17, &[]);
        let k = Kernel::matern(Nu::Half);
        let spec = IntegrationSpec::default();
        for trial in 0..20 {
            let n = 2 + trial % 7;
            let pts: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let rule = QuadratureRule::optimal(&unit(), &line(&pts), &k, &spec).unwrap();
            let best = rule.optimal_error();
            assert!((best.raw_sq - rule.optimal_error_sq_identity()).abs() < 1e-10);
            assert!(rule.residual < 1e-8);
            let eq = rule.worst_case_error(&rule.equal_weights(1.0)).unwrap();
            assert!(best.value <= eq.value + 1e-12);
            for _ in 0..5 {
                let w: Vec<f64> = rule.weights.iter().map(|v| v + rng.random_range(-0.05..0.05)).collect();
                assert!(best.raw_sq <= rule.worst_case_error(&w).unwrap().raw_sq + 1e-14);
            }
        }
    }

    #[test]
    fn permutation_invariance_and_monotonicity() {
        let k = Kernel::matern(Nu::ThreeHalves);
        let spec = IntegrationSpec::default();
        let a = QuadratureRule::optimal(&unit(), &line(&[0.1, 0.6, 0.3]), &k, &spec).unwrap();
        let b = QuadratureRule::optimal(&unit(), &line(&[0.3, 0.1, 0.6]), &k, &spec).unwrap();
        assert!((a.optimal_error().value - b.optimal_error().value).abs() < 1e-12);
        let more = QuadratureRule::optimal(&unit(), &line(&[0.1, 0.6, 0.3, 0.85]), &k, &spec).unwrap();
        assert!(more.optimal_error().raw_sq <= a.optimal_error().raw_sq + 1e-8);
    }

    #[test]
    fn duplicates_are_collapsed() {
        let k = Kernel::matern(Nu::Half);
        let rule = QuadratureRule::optimal(&unit(), &line(&[0.5, 0.5, 0.2]), &k, &IntegrationSpec::default()).unwrap();
        assert_eq!(rule.duplicates_removed, 1);
        assert_eq!(rule.len(), 2);
        assert_eq!(rule.jitter, 0.0);
    }
}
