//! Test functions with analytic partial derivatives up to order three.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

use crate::geometry::ConvexDomain;
use crate::mesh::Mesh;
use crate::poly::Monomials;
use crate::{Error, Result};

/// Smoothness class a function is known to belong to, `W^s_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothness {
    pub s: f64,
    pub p: f64,
}

pub trait TestFunction: Sync {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    /// `D^α f(x)` for `|α| ≤ 3`.
    fn derivative(&self, x: &[f64], alpha: &[u32]) -> f64;
    fn smoothness(&self) -> Smoothness;
}

/// `Σ c_k x^{α_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(dim: usize, terms: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        if terms.iter().any(|(_, e)| e.len() != dim) {
            return Err(Error::InvalidInput("exponent length must equal dimension".into()));
        }
        Ok(Self { dim, terms })
    }

    /// Polynomial with coefficient `coeffs[k]` on the `k`-th graded monomial.
    pub fn from_basis(basis: &Monomials, coeffs: &[f64]) -> Self {
        let terms = basis.iter().zip(coeffs).map(|(e, c)| (*c, e.to_vec())).collect();
        Self { dim: basis.dim(), terms }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Sum of absolute coefficients.
    pub fn coefficient_scale(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }
}

fn falling(e: u32, k: u32) -> f64 {
    (0..k).map(|i| (e - i) as f64).product()
}

impl TestFunction for Polynomial {
    fn name(&self) -> String {
        format!("polynomial(deg {})", self.degree())
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, e)| c * x.iter().zip(e).map(|(v, k)| v.powi(*k as i32)).product::<f64>()).sum()
    }

    fn derivative(&self, x: &[f64], alpha: &[u32]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                let mut t = *c;
                for k in 0..self.dim {
                    if alpha[k] > e[k] {
                        return 0.0;
                    }
                    t *= falling(e[k], alpha[k]) * x[k].powi((e[k] - alpha[k]) as i32);
                }
                t
            })
            .sum()
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness { s: f64::INFINITY, p: f64::INFINITY }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Sin,
    Cos,
}

/// `Π_k trig_k(2π ω_k x_k)`, e.g. `sin(2πx₁)cos(2πx₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigProduct {
    factors: Vec<(Trig, f64)>,
}

impl TrigProduct {
    pub fn new(factors: Vec<(Trig, f64)>) -> Self {
        Self { factors }
    }

    /// `sin(2πx₁)cos(2πx₂)…cos(2πx_d)`.
    pub fn standard(dim: usize) -> Self {
        let mut f = Vec::with_capacity(dim);
        f.push((Trig::Sin, 1.0));
        for _ in 1..dim {
            f.push((Trig::Cos, 1.0));
        }
        Self { factors: f }
    }

    /// Per-axis frequencies `ω_k` (cycles per unit length).
    pub fn frequencies(&self) -> Vec<f64> {
        self.factors.iter().map(|(_, w)| *w).collect()
    }
}

fn trig_derivative(kind: Trig, w: f64, x: f64, order: u32) -> f64 {
    let a = 2.0 * PI * w;
    let t = a * x;
    // derivative k of sin is sin(t + kπ/2)
    let shift = match kind {
        Trig::Sin => order % 4,
        Trig::Cos => (order + 1) % 4,
    };
    let base = match shift {
        0 => t.sin(),
        1 => t.cos(),
        2 => -t.sin(),
        _ => -t.cos(),
    };
    a.powi(order as i32) * base
}

impl TestFunction for TrigProduct {
    fn name(&self) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .enumerate()
            .map(|(k, (t, w))| {
                let f = if *t == Trig::Sin { "sin" } else { "cos" };
                format!("{f}(2pi*{w}*x{})", k + 1)
            })
            .collect();
        parts.join("*")
    }

    fn dim(&self) -> usize {
        self.factors.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.factors.iter().zip(x).map(|((t, w), v)| trig_derivative(*t, *w, *v, 0)).product()
    }

    fn derivative(&self, x: &[f64], alpha: &[u32]) -> f64 {
        self.factors.iter().zip(x).zip(alpha).map(|(((t, w), v), a)| trig_derivative(*t, *w, *v, *a)).product()
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness { s: f64::INFINITY, p: f64::INFINITY }
    }
}

/// Ridge function `(w·x − a)_+²`: second derivatives are bounded but jump
/// across the hyperplane, so it lies in `W²_∞` and not in `W³_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct KinkedRidge {
    pub direction: Vec<f64>,
    pub offset: f64,
}

impl KinkedRidge {
    /// A ridge across the unit cube with an irrational slope so that no grid
    /// line is parallel to the kink.
    pub fn standard(dim: usize) -> Self {
        let mut direction: Vec<f64> = (0..dim).map(|k| 1.0 + (k as f64) * (2.0f64.sqrt() - 1.0)).collect();
        let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        direction.iter_mut().for_each(|v| *v /= norm);
        let offset = 0.5 * direction.iter().sum::<f64>() + 0.0123;
        Self { direction, offset }
    }

    fn t(&self, x: &[f64]) -> f64 {
        self.direction.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - self.offset
    }
}

impl TestFunction for KinkedRidge {
    fn name(&self) -> String {
        format!("ridge(w={:?},a={})", self.direction, self.offset)
    }

    fn dim(&self) -> usize {
        self.direction.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let t = self.t(x).max(0.0);
        t * t
    }

    fn derivative(&self, x: &[f64], alpha: &[u32]) -> f64 {
        let t = self.t(x);
        if t <= 0.0 {
            return 0.0;
        }
        let order: u32 = alpha.iter().sum();
        let w: f64 = self.direction.iter().zip(alpha).map(|(d, a)| d.powi(*a as i32)).product();
        match order {
            0 => t * t,
            1 => 2.0 * t * w,
            2 => 2.0 * w,
            _ => 0.0,
        }
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness { s: 2.0, p: f64::INFINITY }
    }
}

/// Multi-indices of order exactly `k` in `dim` variables.
pub fn multi_indices(dim: usize, k: u32) -> Vec<Vec<u32>> {
    Monomials::homogeneous(dim, k as usize).iter().map(|e| e.to_vec()).collect()
}

/// Grid estimate of `‖f‖_{W^s_p(Ω)} = (Σ_{|α|≤s} ‖D^α f‖_p^p)^{1/p}`, with
/// the maximum over `α` of sup norms for `p = ∞`. Integer `s ≤ 3`.
pub fn sobolev_norm(f: &dyn TestFunction, domain: &ConvexDomain, s: u32, p: f64, mesh: f64) -> Result<f64> {
    if s > 3 {
        return Err(Error::Unsupported(format!("Sobolev order {s} exceeds 3")));
    }
    let (lo, hi) = domain.bounding_box();
    let grid = Mesh::over_box(lo, hi, mesh)?;
    let vol = grid.cell_volume();
    let alphas: Vec<Vec<u32>> = (0..=s).flat_map(|k| multi_indices(domain.dim(), k)).collect();
    let mut acc = crate::stats::CompensatedSum::new();
    let mut sup = 0.0f64;
    let mut any = false;
    grid.for_each(|c, _, _| {
        if !domain.contains_unchecked(c) {
            return;
        }
        any = true;
        for a in &alphas {
            let v = f.derivative(c, a).abs();
            if p.is_finite() {
                acc.add(v.powf(p) * vol);
            } else {
                sup = sup.max(v);
            }
        }
    });
    if !any {
        return Err(Error::MeshTooCoarse { mesh });
    }
    Ok(if p.is_finite() { acc.value().powf(1.0 / p) } else { sup })
}
