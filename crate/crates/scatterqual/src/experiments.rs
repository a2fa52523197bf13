//! Rate studies over point-set families: random covering rates, the limit
//! constant, the hole threshold, approximation and integration rates and the
//! two-sided equivalence band.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use scatterqual_core::cover::CoverConfig;
use scatterqual_core::distance::{covering_radius_1d_exact, integral_1d_exact, limit_constant};
use scatterqual_core::fooling::{fooling_from_balls, gamma_for, greedy_empty_balls, multi_hole_fooling, reference_norms, single_hole_fooling};
use scatterqual_core::functions::{multi_indices, sobolev_norm, KinkedRidge, Polynomial, TestFunction, Trig, TrigProduct};
use scatterqual_core::geometry::Shape;
use scatterqual_core::mls::{sample, MlsOperator, DEFAULT_SUPPORT_FACTOR};
use scatterqual_core::quadrature::{IntegrationSpec, Kernel, Nu, QuadratureRule};
use scatterqual_core::rng::substream_seed;
use scatterqual_core::stats::{log_log_fit, mean_estimate, quantile, CompensatedSum, LineFit};
use scatterqual_core::{mesh::Mesh, ConvexDomain, GridIndex, PointSet};

use crate::error::{AppError, Result};
use crate::io::{num, Table};
use crate::parallel;

/// Point-set families used by the designed experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Grid,
    Random,
    /// Grid with the points of a central ball of radius `½·n^{−1/4}` removed.
    GridWithHole,
}

impl FromStr for Family {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Family::Grid),
            "random" => Ok(Family::Random),
            "hole" | "grid-with-hole" => Ok(Family::GridWithHole),
            _ => Err(AppError::Input(format!("unknown family '{s}' (grid, random, hole)"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Grid => "grid",
            Family::Random => "random",
            Family::GridWithHole => "hole",
        })
    }
}

/// Cell centres of the `k^d` grid on the unit cube.
pub fn cube_grid(dim: usize, k: usize) -> PointSet {
    let mesh = Mesh::over_box(&vec![0.0; dim], &vec![1.0; dim], 1.0 / k as f64).expect("valid grid");
    let mut coords = Vec::with_capacity(mesh.len() * dim);
    mesh.for_each(|c, _, _| coords.extend_from_slice(c));
    PointSet::new(dim, coords).expect("finite coordinates")
}

fn grid_side(dim: usize, n: usize) -> usize {
    ((n as f64).powf(1.0 / dim as f64).round() as usize).max(1)
}

fn without_ball(points: &PointSet, center: &[f64], radius: f64) -> Result<PointSet> {
    let keep: Vec<usize> = (0..points.len())
        .filter(|&i| scatterqual_core::geometry::distance(points.point(i), center) >= radius)
        .collect();
    if keep.is_empty() {
        return Err(AppError::Input(format!("hole of radius {radius} removes every point")));
    }
    Ok(points.select(&keep))
}

/// About `n` points of `family` on the unit cube of dimension `dim`.
pub fn family_points(family: Family, dim: usize, n: usize, seed: u64) -> Result<PointSet> {
    match family {
        Family::Grid => Ok(cube_grid(dim, grid_side(dim, n))),
        Family::Random => Ok(ConvexDomain::unit_cube(dim).sample_uniform(seed, n)?.points),
        Family::GridWithHole => {
            let grid = cube_grid(dim, grid_side(dim, n));
            without_ball(&grid, &vec![0.5; dim], 0.5 * (n as f64).powf(-0.25))
        }
    }
}

/// Grid resolution for distance norms and residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshPolicy {
    Fixed(f64),
    /// A fraction of the typical spacing `(vol/n)^{1/d}`.
    PerSpacing(f64),
}

impl MeshPolicy {
    pub fn mesh(&self, volume: f64, n: usize, dim: usize) -> f64 {
        match *self {
            MeshPolicy::Fixed(m) => m,
            MeshPolicy::PerSpacing(f) => f * (volume / n as f64).powf(1.0 / dim as f64),
        }
    }
}

/// Reference test functions by name.
pub fn test_function(name: &str, dim: usize) -> Result<Box<dyn TestFunction>> {
    match name {
        "trig" => Ok(Box::new(TrigProduct::standard(dim))),
        "ridge" => Ok(Box::new(KinkedRidge::standard(dim))),
        "quadratic" => {
            let mut terms = vec![(1.0, vec![0; dim])];
            for k in 0..dim {
                let mut e = vec![0; dim];
                e[k] = 2;
                terms.push((0.5 + k as f64, e));
            }
            Ok(Box::new(Polynomial::new(dim, terms)?))
        }
        _ => Err(AppError::Input(format!("unknown function '{name}' (trig, ridge, quadratic)"))),
    }
}

fn volume_of(domain: &ConvexDomain) -> f64 {
    domain.volume().value
}

fn interval(domain: &ConvexDomain) -> Option<(f64, f64)> {
    match domain.shape() {
        Shape::Box { lo, hi } if lo.len() == 1 => Some((lo[0], hi[0])),
        _ => None,
    }
}

/// `∫_Ω dist(·,P)^γ` (or the covering radius for `γ = ∞`), exact on intervals.
fn distance_functional(domain: &ConvexDomain, points: &PointSet, gamma: f64, mesh: f64) -> Result<f64> {
    if let Some((a, b)) = interval(domain) {
        let xs = points.coords();
        return Ok(if gamma.is_finite() { integral_1d_exact(a, b, xs, gamma)? } else { covering_radius_1d_exact(a, b, xs)? });
    }
    let idx = GridIndex::new(points)?;
    let est = parallel::lgamma_norm(domain, &idx, gamma, mesh)?;
    Ok(if gamma.is_finite() { est.integral() } else { est.value })
}

/// One row of a [`RateTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
    pub dropped: usize,
    pub q10: f64,
    pub q90: f64,
    /// Values of the table's extra columns.
    pub extra: Vec<f64>,
}

impl RateRow {
    fn from_trials(n: usize, values: &[f64], dropped: usize, extra: Vec<f64>) -> Self {
        let m = mean_estimate(values);
        Self {
            n,
            mean: m.mean,
            std_error: m.std_error,
            trials: m.count,
            dropped,
            q10: quantile(values, 0.1),
            q90: quantile(values, 0.9),
            extra,
        }
    }

    fn single(n: usize, value: f64, extra: Vec<f64>) -> Self {
        Self::from_trials(n, &[value], 0, extra)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    /// What `mean` measures.
    pub statistic: String,
    pub rows: Vec<RateRow>,
    pub extra_columns: Vec<String>,
    /// Fit of `log mean` against `log x`, with `x` named by `fit_against`.
    pub fit: Option<LineFit>,
    pub fit_against: String,
    pub expected_slope: Option<f64>,
    pub reference: Option<f64>,
    pub notes: Vec<(String, String)>,
}

impl RateTable {
    fn new(statistic: &str, extra_columns: &[&str]) -> Self {
        Self {
            statistic: statistic.into(),
            rows: Vec::new(),
            extra_columns: extra_columns.iter().map(|s| s.to_string()).collect(),
            fit: None,
            fit_against: "n".into(),
            expected_slope: None,
            reference: None,
            notes: Vec::new(),
        }
    }

    fn fit_rows(&mut self, x: impl Fn(&RateRow) -> f64) {
        let xs: Vec<f64> = self.rows.iter().map(&x).collect();
        let ys: Vec<f64> = self.rows.iter().map(|r| r.mean).collect();
        self.fit = log_log_fit(&xs, &ys);
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.as_ref().map(|f| f.slope)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.extra_columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.extra[k]).collect())
    }

    pub fn to_table(&self) -> Table {
        let mut cols = vec!["n", "mean", "std_error", "trials", "dropped", "q10", "q90"];
        cols.extend(self.extra_columns.iter().map(String::as_str));
        let mut t = Table::new(&cols);
        for r in &self.rows {
            let mut row = vec![
                r.n.to_string(),
                num(r.mean),
                num(r.std_error),
                r.trials.to_string(),
                r.dropped.to_string(),
                num(r.q10),
                num(r.q90),
            ];
            row.extend(r.extra.iter().map(|v| num(*v)));
            t.push(row);
        }
        t
    }

    /// Key/value lines for the CSV preamble and stdout.
    pub fn summary(&self) -> Vec<(String, String)> {
        let mut out = vec![("statistic".to_string(), self.statistic.clone())];
        if let Some(fit) = &self.fit {
            out.push((format!("slope vs log {}", self.fit_against), num(fit.slope)));
            out.push(("slope 95% half-width".into(), num(fit.slope_half_width)));
            out.push(("fit residuals".into(), fit.residuals.iter().map(|r| num(*r)).collect::<Vec<_>>().join(" ")));
        }
        if let Some(e) = self.expected_slope {
            out.push(("expected slope".into(), num(e)));
        }
        if let Some(r) = self.reference {
            out.push(("reference".into(), num(r)));
        }
        out.extend(self.notes.iter().cloned());
        out
    }
}

fn check_schedule(schedule: &[usize], trials: usize) -> Result<()> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] == 0 {
        return Err(AppError::Input("n schedule must be strictly increasing and positive".into()));
    }
    if trials == 0 {
        return Err(AppError::Input("trials must be at least 1".into()));
    }
    Ok(())
}

/// Run `trials` independent trials of size `n` in parallel; failed trials
/// are dropped and counted.
fn run_trials(
    domain: &ConvexDomain,
    n: usize,
    trials: usize,
    seed: u64,
    f: impl Fn(&PointSet) -> Result<f64> + Sync,
) -> Result<(Vec<f64>, usize)> {
    let results: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = substream_seed(seed, &[n as u64, t as u64]);
            let pts = domain.sample_uniform(s, n)?.points;
            f(&pts)
        })
        .collect();
    let mut values = Vec::with_capacity(trials);
    let mut dropped = 0;
    for r in results {
        match r {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => dropped += 1,
            Err(e) if e.exit_code() == 1 => return Err(e),
            Err(_) => dropped += 1,
        }
    }
    if values.is_empty() {
        return Err(AppError::Numerical(format!("every trial at n = {n} failed")));
    }
    Ok((values, dropped))
}

#[derive(Debug, Clone)]
pub struct RandomRates {
    pub domain: ConvexDomain,
    pub gamma: f64,
    pub alpha: f64,
    pub schedule: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub mesh: MeshPolicy,
}

/// Mean of `‖dist(·,P_n)‖_{L_γ}^α` over uniform random point sets.
pub fn random_rate_study(cfg: &RandomRates) -> Result<RateTable> {
    check_schedule(&cfg.schedule, cfg.trials)?;
    if !(cfg.alpha > 0.0) || !(cfg.gamma > 0.0) {
        return Err(AppError::Input("alpha and gamma must be positive".into()));
    }
    let d = cfg.domain.dim() as f64;
    let vol = volume_of(&cfg.domain);
    let finite = cfg.gamma.is_finite();
    let mut table = RateTable::new("E ||dist||^alpha", if finite { &[] } else { &["normalized"] });
    for &n in &cfg.schedule {
        let mesh = cfg.mesh.mesh(vol, n, cfg.domain.dim());
        let (values, dropped) = run_trials(&cfg.domain, n, cfg.trials, cfg.seed, |pts| {
            let v = distance_functional(&cfg.domain, pts, cfg.gamma, mesh)?;
            let norm = if finite { v.powf(1.0 / cfg.gamma) } else { v };
            Ok(norm.powf(cfg.alpha))
        })?;
        let mut row = RateRow::from_trials(n, &values, dropped, Vec::new());
        if !finite {
            let nf = n as f64;
            row.extra.push(row.mean * (nf / nf.ln()).powf(cfg.alpha / d));
        }
        table.rows.push(row);
    }
    if finite {
        table.fit_rows(|r| r.n as f64);
        table.expected_slope = Some(-cfg.alpha / d);
    } else {
        table.fit_rows(|r| (r.n as f64).ln() / r.n as f64);
        table.fit_against = "(log n / n)".into();
        table.expected_slope = Some(cfg.alpha / d);
        let norm = table.column("normalized").unwrap_or_default();
        let m = mean_estimate(&norm).mean;
        let band = norm.iter().map(|v| (v / m - 1.0).abs()).fold(0.0, f64::max);
        table.notes.push(("normalized band".into(), num(band)));
    }
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct LimitConstant {
    pub domain: ConvexDomain,
    pub gamma: f64,
    pub schedule: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub mesh: MeshPolicy,
}

/// Mean of `n^{γ/d} vol(Ω)^{-1} ∫_Ω dist(·,P_n)^γ` against its limit.
pub fn limit_constant_check(cfg: &LimitConstant) -> Result<RateTable> {
    check_schedule(&cfg.schedule, cfg.trials)?;
    if !(cfg.gamma > 0.0 && cfg.gamma.is_finite()) {
        return Err(AppError::Input("the limit constant needs a finite positive gamma".into()));
    }
    let dim = cfg.domain.dim();
    let vol = volume_of(&cfg.domain);
    let reference = limit_constant(dim, cfg.gamma, vol);
    let mut table = RateTable::new("n^(gamma/d) mean dist^gamma", &["reference", "relative_error"]);
    for &n in &cfg.schedule {
        let mesh = cfg.mesh.mesh(vol, n, dim);
        let scale = (n as f64).powf(cfg.gamma / dim as f64) / vol;
        let (values, dropped) = run_trials(&cfg.domain, n, cfg.trials, cfg.seed, |pts| {
            Ok(scale * distance_functional(&cfg.domain, pts, cfg.gamma, mesh)?)
        })?;
        let mut row = RateRow::from_trials(n, &values, dropped, Vec::new());
        row.extra = vec![reference, row.mean / reference - 1.0];
        table.rows.push(row);
    }
    table.reference = Some(reference);
    if interval(&cfg.domain).is_some() {
        table.notes.push(("method".into(), "exact 1d gaps".into()));
    }
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct HoleDemo {
    pub dim: usize,
    pub gamma: f64,
    pub schedule: Vec<usize>,
    pub hole_exponent: f64,
    /// Mesh as a fraction of the grid spacing.
    pub mesh_factor: f64,
}

/// `‖dist‖_{L_γ}` for a `k^d` grid on the unit cube minus the central ball
/// of radius `n^{−hole_exponent}`.
pub fn hole_demo(cfg: &HoleDemo) -> Result<RateTable> {
    check_schedule(&cfg.schedule, 1)?;
    let dom = ConvexDomain::unit_cube(cfg.dim);
    let mut table = RateTable::new("||dist||_gamma", &["nominal_n", "hole_radius"]);
    for &n in &cfg.schedule {
        let k = grid_side(cfg.dim, n);
        let radius = (n as f64).powf(-cfg.hole_exponent);
        if radius >= 0.5 {
            return Err(AppError::Numerical(format!("hole radius {radius} at n = {n} reaches the boundary of the cube")));
        }
        let pts = without_ball(&cube_grid(cfg.dim, k), &vec![0.5; cfg.dim], radius)?;
        let idx = GridIndex::new(&pts)?;
        let est = parallel::lgamma_norm(&dom, &idx, cfg.gamma, cfg.mesh_factor / k as f64)?;
        table.rows.push(RateRow::single(pts.len(), est.value, vec![n as f64, radius]));
    }
    table.fit_rows(|r| r.n as f64);
    table.expected_slope = Some(-1.0 / cfg.dim as f64);
    if cfg.gamma.is_finite() {
        let threshold = 1.0 / cfg.dim as f64 - 1.0 / (cfg.gamma + cfg.dim as f64);
        table.notes.push(("harmless hole exponent".into(), format!(">= {}", num(threshold))));
    }
    Ok(table)
}

/// Geometric predictor of the worst-case error: `‖dist‖_{L_γ}^s` for
/// `q < p`, `h^{s − d(1/p − 1/q)}` otherwise.
pub fn predictor(domain: &ConvexDomain, index: &GridIndex, s: f64, p: f64, q: f64, mesh: f64) -> Result<(f64, f64)> {
    let gamma = gamma_for(s, p, q);
    if gamma.is_finite() {
        let v = parallel::lgamma_norm(domain, index, gamma, mesh)?.value;
        Ok((v.powf(s), gamma))
    } else {
        let h = parallel::covering_radius(domain, index, mesh)?.value;
        let e = s - domain.dim() as f64 * (1.0 / p - 1.0 / q).max(0.0);
        Ok((h.powf(e), gamma))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlsPolicy {
    Global,
    Cover,
}

impl FromStr for MlsPolicy {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(MlsPolicy::Global),
            "cover" => Ok(MlsPolicy::Cover),
            _ => Err(AppError::Input(format!("unknown policy '{s}' (global, cover)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApproxSetup {
    pub degree: usize,
    pub policy: MlsPolicy,
    pub support_factor: f64,
    pub cover: CoverConfig,
}

impl Default for ApproxSetup {
    fn default() -> Self {
        Self {
            degree: 2,
            policy: MlsPolicy::Global,
            support_factor: DEFAULT_SUPPORT_FACTOR,
            cover: CoverConfig { c: 0.5, ..CoverConfig::default() },
        }
    }
}

/// Outcome of approximating one function from one point set.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub error: f64,
    pub refined: f64,
    pub failures: usize,
    pub covering: f64,
}

/// MLS operator for `points` under `setup`.
pub fn build_operator(domain: &ConvexDomain, points: &PointSet, setup: &ApproxSetup, mesh: f64) -> Result<(MlsOperator, f64)> {
    let idx = GridIndex::new(points)?;
    let h = parallel::covering_radius(domain, &idx, mesh)?;
    let op = match setup.policy {
        MlsPolicy::Global => MlsOperator::global(points, setup.degree, setup.support_factor, h.upper)?,
        MlsPolicy::Cover => {
            let cover = parallel::build_good_cover(domain, &idx, &setup.cover, 0.5 * h.upper.max(mesh))?;
            MlsOperator::with_cover(points, setup.degree, setup.support_factor, cover, domain)?
        }
    };
    Ok((op, h.value))
}

/// Grid `L_q` error of the MLS approximant of `f`.
pub fn approximation_error(
    domain: &ConvexDomain,
    points: &PointSet,
    f: &dyn TestFunction,
    setup: &ApproxSetup,
    q: f64,
    mesh: f64,
) -> Result<ApproxResult> {
    let (op, covering) = build_operator(domain, points, setup, mesh)?;
    let values = sample(f, points);
    let err = parallel::lq_error(domain, q, mesh, |y| op.apply(&values, y).ok().map(|s| f.value(y) - s))?;
    Ok(ApproxResult { error: err.value, refined: err.refined, failures: err.failures, covering })
}

#[derive(Debug, Clone)]
pub struct ApproxStudy {
    pub family: Family,
    pub dim: usize,
    pub function: String,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub schedule: Vec<usize>,
    pub seed: u64,
    pub setup: ApproxSetup,
    pub mesh_factor: f64,
}

/// `L_q` error of MLS on a fixed test function over a family schedule.
pub fn approx_rate_study(cfg: &ApproxStudy) -> Result<RateTable> {
    check_schedule(&cfg.schedule, 1)?;
    let dom = ConvexDomain::unit_cube(cfg.dim);
    let f = test_function(&cfg.function, cfg.dim)?;
    let mut table = RateTable::new("L_q error", &["refined", "failures", "covering_radius", "predictor", "ratio"]);
    for &n in &cfg.schedule {
        let pts = family_points(cfg.family, cfg.dim, n, substream_seed(cfg.seed, &[n as u64]))?;
        let mesh = MeshPolicy::PerSpacing(cfg.mesh_factor).mesh(1.0, pts.len(), cfg.dim);
        let r = approximation_error(&dom, &pts, f.as_ref(), &cfg.setup, cfg.q, mesh)?;
        let idx = GridIndex::new(&pts)?;
        let (pred, _) = predictor(&dom, &idx, cfg.s, cfg.p, cfg.q, mesh)?;
        table.rows.push(RateRow::single(
            pts.len(),
            r.error,
            vec![r.refined, r.failures as f64, r.covering, pred, r.error / pred],
        ));
    }
    table.fit_rows(|r| r.n as f64);
    let d = cfg.dim as f64;
    table.expected_slope = Some(-cfg.s / d + (1.0 / cfg.p - 1.0 / cfg.q).max(0.0));
    table.notes.push(("function".into(), f.name()));
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct IntegrationStudy {
    pub domain: ConvexDomain,
    pub s: f64,
    pub length_scale: f64,
    pub schedule: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub spec: IntegrationSpec,
}

/// Optimal-weight worst-case error for random points.
pub fn integration_rate_study(cfg: &IntegrationStudy) -> Result<RateTable> {
    check_schedule(&cfg.schedule, cfg.trials)?;
    let nu = Nu::for_sobolev(cfg.s, cfg.domain.dim())?;
    let kernel = Kernel::new(nu, cfg.length_scale)?;
    let vol = volume_of(&cfg.domain);
    let mut table = RateTable::new("optimal wce", &["equal_weight_wce"]);
    for &n in &cfg.schedule {
        let results: Vec<Result<(f64, f64)>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let pts = cfg.domain.sample_uniform(substream_seed(cfg.seed, &[n as u64, t as u64]), n)?.points;
                let rule = QuadratureRule::optimal(&cfg.domain, &pts, &kernel, &cfg.spec)?;
                let eq = rule.worst_case_error(&rule.equal_weights(vol))?.value;
                Ok((rule.optimal_error().value, eq))
            })
            .collect();
        let mut opt = Vec::new();
        let mut eq = Vec::new();
        let mut dropped = 0;
        for r in results {
            match r {
                Ok((a, b)) => {
                    opt.push(a);
                    eq.push(b);
                }
                Err(e) if e.exit_code() == 1 => return Err(e),
                Err(_) => dropped += 1,
            }
        }
        if opt.is_empty() {
            return Err(AppError::Numerical(format!("every quadrature trial at n = {n} failed")));
        }
        let eq_mean = mean_estimate(&eq).mean;
        table.rows.push(RateRow::from_trials(n, &opt, dropped, vec![eq_mean]));
    }
    table.fit_rows(|r| r.n as f64);
    table.expected_slope = Some(-cfg.s / cfg.domain.dim() as f64);
    table.notes.push(("kernel".into(), format!("matern nu={} length_scale={}", nu.value(), cfg.length_scale)));
    Ok(table)
}

#[derive(Debug, Clone)]
pub struct Equivalence {
    pub families: Vec<Family>,
    pub dim: usize,
    pub s: u32,
    pub p: f64,
    pub q: f64,
    pub schedule: Vec<usize>,
    pub seed: u64,
    pub setup: ApproxSetup,
    /// Distance and residual mesh as a fraction of the spacing.
    pub mesh_factor: f64,
}

/// One family/size cell of the equivalence report.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceRow {
    pub family: Family,
    pub n: usize,
    /// Worst normalized error of MLS over all probe functions.
    pub measured: f64,
    pub predictor: f64,
    /// Best fooling bound; valid for every algorithm.
    pub lower: f64,
    /// Worst normalized error over the oscillatory probes.
    pub probe_error: f64,
    /// Normalized norm of the greedy-ball bump sum.
    pub bump_error: f64,
    /// Normalized norm of the cover-based fooling function.
    pub fooling_error: f64,
}

impl EquivalenceRow {
    pub fn ratio(&self) -> f64 {
        self.measured / self.predictor
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub rows: Vec<EquivalenceRow>,
    pub gamma: f64,
}

impl EquivalenceReport {
    /// `max ratio / min ratio` over all rows.
    pub fn band(&self) -> f64 {
        let r: Vec<f64> = self.rows.iter().map(EquivalenceRow::ratio).collect();
        r.iter().cloned().fold(0.0, f64::max) / r.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !(r.lower <= r.measured)).count()
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&[
            "family", "n", "measured", "predictor", "lower", "ratio", "probe_error", "bump_error", "fooling_error",
        ]);
        for r in &self.rows {
            t.push(vec![
                r.family.to_string(),
                r.n.to_string(),
                num(r.measured),
                num(r.predictor),
                num(r.lower),
                num(r.ratio()),
                num(r.probe_error),
                num(r.bump_error),
                num(r.fooling_error),
            ]);
        }
        t
    }

    pub fn summary(&self) -> Vec<(String, String)> {
        vec![
            ("gamma".into(), num(self.gamma)),
            ("ratio band (max/min)".into(), num(self.band())),
            ("lower > measured rows".into(), self.violations().to_string()),
        ]
    }
}

/// Trigonometric probes: the fixed smooth one plus products with
/// wavelengths of 2, 4 and 8 point spacings.
pub fn oscillatory_probes(dim: usize, spacing: f64) -> Vec<TrigProduct> {
    let mut out = vec![TrigProduct::standard(dim)];
    for j in [2.0, 4.0, 8.0] {
        let w = 1.0 / (j * spacing);
        let factors = (0..dim)
            .map(|k| (if k == 0 { Trig::Sin } else { Trig::Cos }, w * (1.0 + 0.13 * k as f64)))
            .collect();
        out.push(TrigProduct::new(factors));
    }
    out
}

/// `‖f‖_{W^s_p(Ω)}` of a probe; exact for `p = ∞` when every factor has a
/// full period inside the unit cube.
fn probe_norm(f: &TrigProduct, domain: &ConvexDomain, s: u32, p: f64, mesh: f64) -> Result<f64> {
    let freqs = f.frequencies();
    if p.is_infinite() && freqs.iter().all(|w| *w >= 1.0) {
        let a: Vec<f64> = freqs.iter().map(|w| 2.0 * std::f64::consts::PI * w).collect();
        let norm = (0..=s)
            .flat_map(|k| multi_indices(a.len(), k))
            .map(|alpha| a.iter().zip(&alpha).map(|(ak, e)| ak.powi(*e as i32)).product::<f64>())
            .fold(0.0, f64::max);
        return Ok(norm);
    }
    Ok(sobolev_norm(f, domain, s, p, 0.5 * mesh)?)
}

/// Grid `L_q` errors of one MLS operator on several functions; the weights
/// at each cell are built once. Returns the errors and the failed cells.
fn probe_errors(domain: &ConvexDomain, op: &MlsOperator, points: &PointSet, probes: &[TrigProduct], q: f64, mesh: f64) -> Result<(Vec<f64>, usize)> {
    let (lo, hi) = domain.bounding_box();
    let grid = Mesh::over_box(lo, hi, mesh)?;
    let values: Vec<Vec<f64>> = probes.iter().map(|f| sample(f, points)).collect();
    let vol = grid.cell_volume();
    let ranges: Vec<_> = grid.chunks().collect();
    type Part = (Vec<CompensatedSum>, Vec<f64>, usize, usize);
    let parts: Vec<Part> = ranges
        .into_par_iter()
        .map(|range| {
            let mut sums = vec![CompensatedSum::new(); probes.len()];
            let mut maxima = vec![0.0f64; probes.len()];
            let mut cells = 0;
            let mut failures = 0;
            grid.for_each_in(range, |c, _, _| {
                if !domain.contains_unchecked(c) {
                    return;
                }
                cells += 1;
                let Ok(w) = op.weights(c) else {
                    failures += 1;
                    return;
                };
                for (j, f) in probes.iter().enumerate() {
                    let r = (f.value(c) - w.apply(&values[j])).abs();
                    maxima[j] = maxima[j].max(r);
                    if q.is_finite() {
                        sums[j].add(r.powf(q) * vol);
                    }
                }
            });
            (sums, maxima, cells, failures)
        })
        .collect();
    let mut sums = vec![CompensatedSum::new(); probes.len()];
    let mut maxima = vec![0.0f64; probes.len()];
    let (mut cells, mut failures) = (0, 0);
    for (s, m, c, f) in parts {
        for j in 0..probes.len() {
            sums[j].add(s[j].value());
            maxima[j] = maxima[j].max(m[j]);
        }
        cells += c;
        failures += f;
    }
    if cells == 0 {
        return Err(scatterqual_core::Error::MeshTooCoarse { mesh }.into());
    }
    let errors = (0..probes.len()).map(|j| if q.is_finite() { sums[j].value().powf(1.0 / q) } else { maxima[j] }).collect();
    Ok((errors, failures))
}

/// For each family and size: the worst normalized MLS error over
/// oscillatory probes and over bump sums vanishing on `P` (whose approximant
/// is identically zero), the geometric predictor, and the best fooling
/// lower bound.
pub fn equivalence_study(cfg: &Equivalence) -> Result<EquivalenceReport> {
    check_schedule(&cfg.schedule, 1)?;
    if cfg.families.is_empty() {
        return Err(AppError::Input("no families given".into()));
    }
    let dom = ConvexDomain::unit_cube(cfg.dim);
    let s = cfg.s as f64;
    let refs = reference_norms(cfg.dim, cfg.q, cfg.p, cfg.s, 0.02)?;
    let mut rows = Vec::new();
    let mut gamma = f64::NAN;
    for &family in &cfg.families {
        for &n in &cfg.schedule {
            let pts = family_points(family, cfg.dim, n, substream_seed(cfg.seed, &[n as u64]))?;
            let idx = GridIndex::new(&pts)?;
            let spacing = (1.0 / pts.len() as f64).powf(1.0 / cfg.dim as f64);
            let mesh = cfg.mesh_factor * spacing;
            let (pred, g) = predictor(&dom, &idx, s, cfg.p, cfg.q, mesh)?;
            gamma = g;

            let probes = oscillatory_probes(cfg.dim, spacing);
            let (op, _) = build_operator(&dom, &pts, &cfg.setup, mesh)?;
            let (errors, failures) = probe_errors(&dom, &op, &pts, &probes, cfg.q, mesh)?;
            if failures > 0 {
                return Err(AppError::Numerical(format!("MLS failed at {failures} cells ({family}, n = {n})")));
            }
            let mut probe_error = 0.0f64;
            for (f, e) in probes.iter().zip(&errors) {
                probe_error = probe_error.max(e / probe_norm(f, &dom, cfg.s, cfg.p, mesh)?);
            }

            let balls = greedy_empty_balls(&dom, &idx, mesh)?;
            let bump = fooling_from_balls(&balls, cfg.s, &refs)?;
            let cover = parallel::build_good_cover(&dom, &idx, &cfg.setup.cover, spacing)?;
            let fooling = multi_hole_fooling(&cover, cfg.s, &refs)?;
            let covering = parallel::covering_radius(&dom, &idx, mesh)?;
            let single = single_hole_fooling(&dom, &idx, cfg.s, &covering, &refs)?;
            for f in [&bump.function, &fooling.function, &single.fooling.function] {
                if f.max_on(&pts) != 0.0 {
                    return Err(AppError::Numerical(format!("fooling function does not vanish on P ({family}, n = {n})")));
                }
            }
            let fooling_error = fooling.lower_bound.max(single.fooling.lower_bound);
            let lower = fooling_error.max(bump.lower_bound);
            let measured = probe_error.max(lower);
            if !(lower <= measured) {
                return Err(AppError::Numerical(format!("lower bound {lower} exceeds measured error {measured}")));
            }
            rows.push(EquivalenceRow {
                family,
                n: pts.len(),
                measured,
                predictor: pred,
                lower,
                probe_error,
                bump_error: bump.lower_bound,
                fooling_error,
            });
        }
    }
    Ok(EquivalenceReport { rows, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(family_points(Family::Grid, 2, 64, 0).unwrap().len(), 64);
        assert_eq!(family_points(Family::Random, 2, 50, 1).unwrap().len(), 50);
        let holed = family_points(Family::GridWithHole, 2, 256, 0).unwrap();
        assert!(holed.len() < 256 && holed.len() > 200);
        assert_eq!("hole".parse::<Family>().unwrap(), Family::GridWithHole);
        assert!("mesh".parse::<Family>().is_err());
    }

    #[test]
    fn random_rates_are_seed_deterministic() {
        let cfg = RandomRates {
            domain: ConvexDomain::unit_cube(2),
            gamma: 2.0,
            alpha: 1.0,
            schedule: vec![16, 64],
            trials: 4,
            seed: 9,
            mesh: MeshPolicy::PerSpacing(0.25),
        };
        let a = random_rate_study(&cfg).unwrap();
        let b = random_rate_study(&cfg).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(a.rows[0].trials, 4);
        assert!(a.slope().unwrap() < 0.0);
        let c = random_rate_study(&RandomRates { seed: 10, ..cfg }).unwrap();
        assert_ne!(a.rows[0].mean, c.rows[0].mean);
    }

    #[test]
    fn limit_constant_1d_uses_exact_gaps() {
        let cfg = LimitConstant {
            domain: ConvexDomain::unit_cube(1),
            gamma: 1.0,
            schedule: vec![200],
            trials: 40,
            seed: 1,
            mesh: MeshPolicy::Fixed(1.0),
        };
        let t = limit_constant_check(&cfg).unwrap();
        assert!((t.reference.unwrap() - 0.5).abs() < 1e-12);
        assert!((t.rows[0].mean - 0.5).abs() < 0.1, "{:?}", t.rows);
    }

    #[test]
    fn hole_swallowing_the_cube_fails() {
        let cfg = HoleDemo { dim: 2, gamma: 2.0, schedule: vec![16], hole_exponent: 0.1, mesh_factor: 0.25 };
        assert_eq!(hole_demo(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn schedules_are_validated() {
        let cfg = HoleDemo { dim: 2, gamma: 2.0, schedule: vec![64, 16], hole_exponent: 0.25, mesh_factor: 0.25 };
        assert_eq!(hole_demo(&cfg).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn small_equivalence_rows_are_ordered() {
        let cfg = Equivalence {
            families: vec![Family::Grid, Family::Random],
            dim: 2,
            s: 2,
            p: f64::INFINITY,
            q: 1.0,
            schedule: vec![256],
            seed: 3,
            setup: ApproxSetup::default(),
            mesh_factor: 0.25,
        };
        let rep = equivalence_study(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 2);
        assert_eq!(rep.violations(), 0);
        assert_eq!(rep.gamma, 2.0);
        for r in &rep.rows {
            assert!(r.lower > 0.0 && r.predictor > 0.0);
        }
    }
}
