//! Text form of convex domains:
//!
//! * `box(a,b)^d` – the cube `(a,b)^d`
//! * `box(a1,b1;a2,b2;…)` – a box given per axis
//! * `ball(c1,…,cd;r)` – a Euclidean ball; `ball^d` is the unit ball
//! * `polytope(n11,…,n1d,b1;n21,…)` – `{x : n_i·x ≤ b_i}`

use scatterqual_core::ConvexDomain;

use crate::error::{AppError, Result};

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| AppError::Input(format!("not a number: '{}'", t.trim()))))
        .collect()
}

fn power(rest: &str) -> Result<usize> {
    rest.strip_prefix('^')
        .and_then(|d| d.trim().parse().ok())
        .filter(|d| *d >= 1)
        .ok_or_else(|| AppError::Input(format!("expected '^d' after domain, got '{rest}'")))
}

fn split_call<'a>(spec: &'a str, name: &str) -> Option<(&'a str, &'a str)> {
    let body = spec.strip_prefix(name)?.strip_prefix('(')?;
    let close = body.find(')')?;
    Some((&body[..close], body[close + 1..].trim()))
}

pub fn parse_domain(spec: &str) -> Result<ConvexDomain> {
    let spec: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || AppError::Input(format!("cannot parse domain '{spec}'"));
    if let Some((args, rest)) = split_call(&spec, "box") {
        let axes: Vec<&str> = args.split(';').collect();
        if axes.len() == 1 && !rest.is_empty() {
            let ab = numbers(axes[0])?;
            let d = power(rest)?;
            if ab.len() != 2 {
                return Err(bad());
            }
            return Ok(ConvexDomain::cuboid(vec![ab[0]; d], vec![ab[1]; d])?);
        }
        if !rest.is_empty() {
            return Err(bad());
        }
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for axis in axes {
            let ab = numbers(axis)?;
            if ab.len() != 2 {
                return Err(bad());
            }
            lo.push(ab[0]);
            hi.push(ab[1]);
        }
        return Ok(ConvexDomain::cuboid(lo, hi)?);
    }
    if let Some(rest) = spec.strip_prefix("ball^") {
        let d = power(&format!("^{rest}"))?;
        return Ok(ConvexDomain::ball(vec![0.0; d], 1.0)?);
    }
    if let Some((args, rest)) = split_call(&spec, "ball") {
        let (c, r) = args.split_once(';').ok_or_else(bad)?;
        if !rest.is_empty() {
            return Err(bad());
        }
        let r = numbers(r)?;
        if r.len() != 1 {
            return Err(bad());
        }
        return Ok(ConvexDomain::ball(numbers(c)?, r[0])?);
    }
    if let Some((args, rest)) = split_call(&spec, "polytope") {
        if !rest.is_empty() {
            return Err(bad());
        }
        let mut rows = Vec::new();
        for row in args.split(';') {
            let mut v = numbers(row)?;
            let b = v.pop().ok_or_else(bad)?;
            rows.push((v, b));
        }
        return Ok(ConvexDomain::polytope(&rows)?);
    }
    Err(bad())
}

/// `auto` resolves to the unit cube of the given dimension.
pub fn resolve_domain(spec: &str, dim: usize) -> Result<ConvexDomain> {
    if spec.trim() == "auto" {
        return Ok(ConvexDomain::unit_cube(dim));
    }
    let domain = parse_domain(spec)?;
    if domain.dim() != dim {
        return Err(AppError::Input(format!("domain '{spec}' has dimension {}, expected {dim}", domain.dim())));
    }
    Ok(domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let b = parse_domain("box(0,1)^2").unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.bounding_box().1, &[1.0, 1.0]);
        let b = parse_domain("box(0, 2; -1, 1)").unwrap();
        assert_eq!(b.bounding_box().0, &[0.0, -1.0]);
        assert_eq!(parse_domain("ball^3").unwrap().dim(), 3);
        let ball = parse_domain("ball(0.5,0.5;0.25)").unwrap();
        assert!((ball.inradius() - 0.25).abs() < 1e-15);
        let tri = parse_domain("polytope(-1,0,0;0,-1,0;1,1,1)").unwrap();
        assert!((tri.volume().value - 0.5).abs() < 1e-2);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["box(0,1", "box(0)^2", "sphere(1)", "ball(1;2;3)", "box(0,1)^0", "box(a,1)^2"] {
            assert!(parse_domain(s).is_err(), "{s}");
        }
        assert!(resolve_domain("box(0,1)^3", 2).is_err());
    }
}
