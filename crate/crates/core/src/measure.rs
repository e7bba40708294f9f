//! Ball measures m(B_r(x)), the ratio integrand r/m(B_r(x)) and its
//! integral against dm, the r -> 0 extrapolation of that integral, and the
//! uniform domination bound r*h(x)/m(B_r(x)) <= N * 8^(N-1).
//!
//! The outer integral is computed as ∫ r*h(x)/m(B_r(x)) dx directly (never
//! as 0/0 near vanishing endpoints) and is subdivided at the coordinates
//! where balls start or stop touching a boundary, since the integrand has
//! kinks exactly there.

use crate::error::{Error, Result};
use crate::geometry::ModelSpace;
use crate::quad::Adaptive;
use rayon::prelude::*;

/// The ratio integral sampled on a decreasing geometric radius grid, with
/// its first-order Richardson extrapolation to r = 0.
#[derive(Clone, Debug)]
pub struct RatioProfile {
    pub radii: Vec<f64>,
    pub integrals: Vec<f64>,
    pub extrapolated_limit: f64,
    pub extrapolation_error: f64,
}

fn validate_radius(space: &ModelSpace, r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ball radius must be positive, got {r}"
        )));
    }
    if space.is_circle() && 2.0 * r >= space.extent() {
        return Err(Error::InvalidParameter(format!(
            "ball of radius {r} covers the whole circle (circumference {})",
            space.extent()
        )));
    }
    Ok(())
}

/// m(B_r(x)): adaptive quadrature of h over the coordinate ball.
pub fn ball_measure(space: &ModelSpace, x: f64, r: f64) -> Result<f64> {
    validate_radius(space, r)?;
    let extent = space.extent();
    if !space.kind().contains(x) {
        return Err(Error::OutOfDomain {
            x,
            lo: 0.0,
            hi: extent,
        });
    }
    ball_measure_inner(space, space.kind().canonical(x), r)
}

fn ball_measure_inner(space: &ModelSpace, x: f64, r: f64) -> Result<f64> {
    let extent = space.extent();
    if space.is_circle() {
        let lo = x - r;
        let hi = x + r;
        if lo < 0.0 {
            Ok(space.mass_between(0.0, hi)? + space.mass_between(extent + lo, extent)?)
        } else if hi > extent {
            Ok(space.mass_between(lo, extent)? + space.mass_between(0.0, hi - extent)?)
        } else {
            space.mass_between(lo, hi)
        }
    } else {
        space.mass_between((x - r).max(0.0), (x + r).min(extent))
    }
}

/// r / m(B_r(x)).
pub fn ratio_integrand(space: &ModelSpace, x: f64, r: f64) -> Result<f64> {
    let m = ball_measure(space, x, r)?;
    Ok(r / m)
}

/// ∫_X r / m(B_r(x)) dm(x), integrated as r*h(x)/m(B_r(x)) dx with forced
/// subdivision at x = r and x = extent - r on intervals. `quadrature_points`
/// bounds the adaptive panel budget of the outer integral.
pub fn ratio_integral(space: &ModelSpace, r: f64, quadrature_points: usize) -> Result<f64> {
    validate_radius(space, r)?;
    let extent = space.extent();
    let q = Adaptive {
        rel_tol: 1e-10,
        abs_floor: 1e-300,
        max_panels: quadrature_points.max(16),
    };
    let f = |x: f64| {
        let m = ball_measure_inner(space, x, r).unwrap_or(f64::NAN);
        r * space.density_at(x) / m
    };
    let mut breaks: Vec<f64> = if space.is_circle() {
        Vec::new()
    } else {
        vec![r, extent - r]
    };
    breaks.extend(space.density_breakpoints(0.0, extent));
    let value = q.integrate_with_breakpoints(&f, 0.0, extent, &breaks)?;
    if !value.is_finite() {
        return Err(Error::EvaluationFailure(format!(
            "ratio integral at r = {r} is not finite"
        )));
    }
    Ok(value)
}

/// Geometric grid of `steps` radii from r_max down to r_min, the ratio
/// integral at each, and the two-level first-order Richardson extrapolation
/// to r = 0 with error = |last - previous iterate|.
pub fn ratio_profile(
    space: &ModelSpace,
    r_max: f64,
    r_min: f64,
    steps: usize,
) -> Result<RatioProfile> {
    if !(0.0 < r_min && r_min < r_max) || !r_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r_min < r_max, got r_min = {r_min}, r_max = {r_max}"
        )));
    }
    if steps < 3 {
        return Err(Error::InvalidParameter(format!(
            "ratio profile needs at least 3 steps, got {steps}"
        )));
    }
    let ratio = (r_min / r_max).powf(1.0 / (steps - 1) as f64);
    let radii: Vec<f64> = (0..steps).map(|i| r_max * ratio.powi(i as i32)).collect();
    let integrals: Vec<f64> = radii
        .par_iter()
        .map(|&r| ratio_integral(space, r, 100_000))
        .collect::<Result<Vec<_>>>()?;

    // first-order model I(r) = I0 + c r on consecutive pairs
    let mut iterates = Vec::with_capacity(steps - 1);
    for i in 1..steps {
        let (ra, ia) = (radii[i - 1], integrals[i - 1]);
        let (rb, ib) = (radii[i], integrals[i]);
        iterates.push(ib + (ib - ia) * rb / (ra - rb));
    }
    let extrapolated_limit = *iterates.last().unwrap();
    let extrapolation_error = (extrapolated_limit - iterates[iterates.len() - 2]).abs();
    Ok(RatioProfile {
        radii,
        integrals,
        extrapolated_limit,
        extrapolation_error,
    })
}

/// Default radius grid: geometric ratio 1/2 from 0.1*diameter down to
/// 1e-4*diameter.
pub fn default_radius_grid(space: &ModelSpace) -> Vec<f64> {
    let d = space.diameter();
    let mut r = 0.1 * d;
    let floor = 1e-4 * d;
    let mut grid = Vec::new();
    while r >= floor * 0.999 {
        grid.push(r);
        r *= 0.5;
    }
    grid
}

/// Result of the uniform domination scan.
#[derive(Clone, Copy, Debug)]
pub struct DominationCheck {
    pub sup_observed: f64,
    pub bound: f64,
    pub ok: bool,
    /// (x, r) attaining the supremum.
    pub witness: (f64, f64),
}

/// sup over the grids of r*h(x)/m(B_r(x)) against the bound N * 8^(N-1),
/// which dominates for every (K, N-1)-convex density on an interval.
pub fn domination_bound_check(
    space: &ModelSpace,
    n: f64,
    r_grid: &[f64],
    x_grid: &[f64],
) -> Result<DominationCheck> {
    if space.is_circle() {
        return Err(Error::DomainMismatch(
            "domination bound check applies to intervals".into(),
        ));
    }
    if !(n > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "domination bound needs N > 1, got {n}"
        )));
    }
    if r_grid.is_empty() || x_grid.is_empty() {
        return Err(Error::InvalidParameter("empty domination grid".into()));
    }
    let cells: Vec<(f64, f64)> = x_grid
        .iter()
        .flat_map(|&x| r_grid.iter().map(move |&r| (x, r)))
        .collect();
    let values: Vec<(f64, (f64, f64))> = cells
        .par_iter()
        .map(|&(x, r)| -> Result<(f64, (f64, f64))> {
            let m = ball_measure(space, x, r)?;
            Ok((r * space.density_at(x) / m, (x, r)))
        })
        .collect::<Result<Vec<_>>>()?;
    // fixed-order reduction
    let mut sup = f64::NEG_INFINITY;
    let mut witness = (f64::NAN, f64::NAN);
    for (v, w) in values {
        if v > sup {
            sup = v;
            witness = w;
        }
    }
    let bound = n * 8.0f64.powf(n - 1.0);
    Ok(DominationCheck {
        sup_observed: sup,
        bound,
        ok: sup <= bound,
        witness,
    })
}
