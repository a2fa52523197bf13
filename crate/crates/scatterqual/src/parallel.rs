//! Rayon versions of the grid and per-point drivers. Work is split into the
//! same fixed chunks as the sequential code and partial results are merged
//! in chunk order, so the output does not depend on the thread count.

use rayon::prelude::*;
use scatterqual_core::cover::{candidate_points, CoverConfig, GoodCover};
use scatterqual_core::distance::{accumulate_cells, finish, GridAccumulator, NormEstimate};
use scatterqual_core::mesh::Mesh;
use scatterqual_core::mls::{accumulate_residual, finish_residual, Approximation, LqError, MlsOperator, ResidualAccumulator};
use scatterqual_core::{cover, ConvexDomain, Error, GridIndex, PointSet, Result};

fn domain_mesh(domain: &ConvexDomain, mesh: f64) -> Result<Mesh> {
    let (lo, hi) = domain.bounding_box();
    Mesh::over_box(lo, hi, mesh)
}

pub fn lgamma_norm(domain: &ConvexDomain, index: &GridIndex, gamma: f64, mesh: f64) -> Result<NormEstimate> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput("gamma must be positive".into()));
    }
    if index.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: index.dim() });
    }
    let grid = domain_mesh(domain, mesh)?;
    let ranges: Vec<_> = grid.chunks().collect();
    let parts: Vec<GridAccumulator> =
        ranges.into_par_iter().map(|r| accumulate_cells(domain, index, &grid, gamma, r)).collect();
    let mut acc = GridAccumulator::default();
    for p in parts {
        acc.merge(p);
    }
    finish(acc, gamma, &grid)
}

pub fn covering_radius(domain: &ConvexDomain, index: &GridIndex, mesh: f64) -> Result<NormEstimate> {
    lgamma_norm(domain, index, f64::INFINITY, mesh)
}

fn residual_on<F>(domain: &ConvexDomain, q: f64, mesh: f64, residual: &F) -> Result<ResidualAccumulator>
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    let grid = domain_mesh(domain, mesh)?;
    let ranges: Vec<_> = grid.chunks().collect();
    let parts: Vec<ResidualAccumulator> =
        ranges.into_par_iter().map(|r| accumulate_residual(domain, &grid, q, r, residual)).collect();
    let mut acc = ResidualAccumulator::default();
    for p in parts {
        acc.merge(p);
    }
    Ok(acc)
}

/// Grid `L_q` norm of `residual` at `mesh` and `mesh/2`.
pub fn lq_error<F>(domain: &ConvexDomain, q: f64, mesh: f64, residual: F) -> Result<LqError>
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    if !(q > 0.0) {
        return Err(Error::InvalidInput("q must be positive".into()));
    }
    let coarse = residual_on(domain, q, mesh, &residual)?;
    let fine = residual_on(domain, q, 0.5 * mesh, &residual)?;
    Ok(LqError {
        value: finish_residual(&coarse, q, mesh)?,
        refined: finish_residual(&fine, q, 0.5 * mesh)?,
        q,
        cells: coarse.cells(),
        failures: coarse.failures(),
    })
}

pub fn good_radii(domain: &ConvexDomain, index: &GridIndex, coords: &[f64], cfg: &CoverConfig) -> Result<Vec<f64>> {
    coords.par_chunks_exact(domain.dim()).map(|x| cover::good_radius(domain, index, x, cfg)).collect()
}

pub fn build_good_cover(domain: &ConvexDomain, index: &GridIndex, cfg: &CoverConfig, candidate_mesh: f64) -> Result<GoodCover> {
    cfg.validate()?;
    let (grid, flat, coords) = candidate_points(domain, candidate_mesh)?;
    let radii = good_radii(domain, index, &coords, cfg)?;
    let mut cover = GoodCover::from_radii(domain, &grid, &flat, &coords, &radii, cfg.c)?;
    cover.attach_empty_balls(domain, index, cfg.probes_per_axis)?;
    Ok(cover)
}

pub fn approximate(op: &MlsOperator, values: &[f64], eval: &PointSet) -> Result<Approximation> {
    let out: Vec<Result<f64>> = eval
        .coords()
        .par_chunks_exact(eval.dim())
        .map(|y| match op.apply(values, y) {
            Ok(v) => Ok(v),
            Err(Error::IsolatedPoint) => Ok(f64::NAN),
            Err(e) => Err(e),
        })
        .collect();
    let values = out.into_iter().collect::<Result<Vec<f64>>>()?;
    let failures = values.iter().filter(|v| v.is_nan()).count();
    Ok(Approximation { values, failures })
}
