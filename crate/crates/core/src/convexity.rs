//! Distortion coefficients, the weighted convexity test for log-densities,
//! and the two-sided sinh ratio bounds they imply on intervals.

use crate::error::{Error, Result};
use crate::geometry::{FunctionSpec, ModelSpace, SpaceKind};

/// Outcome of a convexity scan. `worst_margin` is the minimum over tested
/// triples of lhs - rhs of the convexity inequality; `witness` is the triple
/// (y0, y1, t) attaining it.
#[derive(Clone, Copy, Debug)]
pub struct ConvexityReport {
    pub passed: bool,
    pub worst_margin: f64,
    pub witness: Option<(f64, f64, f64)>,
}

/// Distortion coefficient sigma^(t)_{K,N}(theta).
///
/// Returns +inf when K*theta^2 >= N*pi^2, t when K*theta^2 = 0, and the
/// sin/sinh interpolation ratio otherwise (standard denominator, so that
/// sigma^(1) = 1 whenever finite).
pub fn sigma(t: f64, kappa: f64, n: f64, theta: f64) -> Result<f64> {
    if !t.is_finite() || !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "sigma needs t in [0, 1], got {t}"
        )));
    }
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sigma needs theta >= 0, got {theta}"
        )));
    }
    if !n.is_finite() || n <= 0.0 || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma needs finite K and N > 0, got K = {kappa}, N = {n}"
        )));
    }
    let k2 = kappa * theta * theta;
    if k2 >= n * std::f64::consts::PI * std::f64::consts::PI {
        return Ok(f64::INFINITY);
    }
    if k2 == 0.0 {
        return Ok(t);
    }
    let c = (kappa.abs() / n).sqrt() * theta;
    if kappa > 0.0 {
        Ok((t * c).sin() / c.sin())
    } else {
        Ok((t * c).sinh() / c.sinh())
    }
}

/// sinh(p)/sinh(q) for p, q >= 0, stable for large arguments.
fn sinh_ratio(p: f64, q: f64) -> f64 {
    if p == q {
        return 1.0;
    }
    if p < 30.0 && q < 30.0 {
        return p.sinh() / q.sinh();
    }
    ((p - q).exp()) * (1.0 - (-2.0 * p).exp()) / (1.0 - (-2.0 * q).exp())
}

/// Test whether f is (K, N)-convex on the space by sampling: equispaced base
/// points, all pairs with index gap <= resolution/2, interior times
/// t in {1/8, ..., 7/8}. Geodesics are coordinate segments; on circles both
/// minor arcs are tried when the pair sits at exactly half the circumference
/// (the definition only asks for one geodesic to work).
pub fn check_kn_convex(
    f: &FunctionSpec,
    kind: SpaceKind,
    kappa: f64,
    n: f64,
    grid_resolution: usize,
) -> Result<ConvexityReport> {
    if n <= 0.0 || !n.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "convexity dimension must be positive, got {n}"
        )));
    }
    let u = |x: f64| (-f.eval(x) / n).exp();
    check_convexity_core(&u, kind, kappa, n, grid_resolution)
}

/// Density-side entry point: checks (K, N)-convexity of -log h directly via
/// u = h^(1/N), avoiding any intermediate log representation near vanishing
/// endpoints.
pub fn check_density_convexity(
    space: &ModelSpace,
    kappa: f64,
    n: f64,
    grid_resolution: usize,
) -> Result<ConvexityReport> {
    if n <= 0.0 || !n.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "convexity dimension must be positive, got {n}"
        )));
    }
    let u = |x: f64| space.density_at(x).powf(1.0 / n);
    check_convexity_core(&u, space.kind(), kappa, n, grid_resolution)
}

fn check_convexity_core(
    u: &dyn Fn(f64) -> f64,
    kind: SpaceKind,
    kappa: f64,
    n: f64,
    resolution: usize,
) -> Result<ConvexityReport> {
    if resolution < 3 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be >= 3, got {resolution}"
        )));
    }
    let extent = kind.extent();
    let circle = kind.is_circle();
    let points: Vec<f64> = if circle {
        (0..resolution)
            .map(|i| extent * (i as f64 / resolution as f64))
            .collect()
    } else {
        (0..resolution)
            .map(|i| extent * (i as f64 / (resolution - 1) as f64))
            .collect()
    };
    let values: Vec<f64> = points.iter().map(|&x| u(x)).collect();
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::EvaluationFailure(format!(
            "log-density evaluation failed at x = {}",
            points[i]
        )));
    }
    let scale = values.iter().cloned().fold(0.0f64, f64::max);
    let tol = 1e-9 * (1.0 + scale);

    let ts: Vec<f64> = (1..8).map(|k| k as f64 / 8.0).collect();
    let max_gap = resolution / 2;

    let mut worst = f64::INFINITY;
    let mut witness = None;

    for i in 0..points.len() {
        for gap in 1..=max_gap {
            let (y0, y1, d, antipodal) = if circle {
                let j = (i + gap) % resolution;
                let arc = extent * gap as f64 / resolution as f64;
                (points[i], points[j], arc.min(extent - arc), gap * 2 == resolution)
            } else {
                let j = i + gap;
                if j >= points.len() {
                    break;
                }
                (points[i], points[j], points[j] - points[i], false)
            };
            let (m, t) = if antipodal {
                // two minor arcs; existence of one good geodesic suffices
                let fwd = arc_margin(u, kind, kappa, n, y0, y1, d, 1.0, &ts)?;
                let bwd = arc_margin(u, kind, kappa, n, y0, y1, d, -1.0, &ts)?;
                if fwd.0 >= bwd.0 {
                    fwd
                } else {
                    bwd
                }
            } else {
                arc_margin(u, kind, kappa, n, y0, y1, d, 1.0, &ts)?
            };
            if m < worst {
                worst = m;
                witness = Some((y0, y1, t));
            }
        }
    }

    Ok(ConvexityReport {
        passed: worst >= -tol,
        worst_margin: worst,
        witness,
    })
}

fn arc_margin(
    u: &dyn Fn(f64) -> f64,
    kind: SpaceKind,
    kappa: f64,
    n: f64,
    y0: f64,
    y1: f64,
    d: f64,
    direction: f64,
    ts: &[f64],
) -> Result<(f64, f64)> {
    let u0 = u(y0);
    let u1 = u(y1);
    let mut min_margin = f64::INFINITY;
    let mut min_t = 0.0;
    for &t in ts {
        // roundoff in y0 + t*d may leave the domain by one ulp
        let gamma = match kind {
            SpaceKind::Interval { length } => (y0 + direction * t * d).clamp(0.0, length),
            SpaceKind::Circle { .. } => kind.canonical(y0 + direction * t * d),
        };
        let mid = u(gamma);
        if mid.is_nan() || u0.is_nan() || u1.is_nan() {
            return Err(Error::EvaluationFailure(format!(
                "log-density evaluation failed at x = {gamma}"
            )));
        }
        let s0 = sigma(1.0 - t, kappa, n, d)?;
        let s1 = sigma(t, kappa, n, d)?;
        let term = |s: f64, uv: f64| if uv == 0.0 { 0.0 } else { s * uv };
        let margin = mid - (term(s0, u0) + term(s1, u1));
        if margin < min_margin {
            min_margin = margin;
            min_t = t;
        }
    }
    Ok((min_margin, min_t))
}

/// Two-sided bounds on h(x1)/h(x0) for a (K, N-1)-convex log-density on the
/// open interval (0, l), with c = sqrt(-K/(N-1)):
///
///   (sinh((l-x1)c)/sinh((l-x0)c))^(N-1) <= h(x1)/h(x0)
///                                       <= (sinh(x1 c)/sinh(x0 c))^(N-1)
#[derive(Clone, Copy, Debug)]
pub struct SinhRatioBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub ok: bool,
}

pub fn sinh_ratio_bounds(
    space: &ModelSpace,
    kappa: f64,
    n: f64,
    x0: f64,
    x1: f64,
) -> Result<SinhRatioBounds> {
    if space.is_circle() {
        return Err(Error::DomainMismatch(
            "sinh ratio bounds apply to densities on an interval".into(),
        ));
    }
    if kappa >= 0.0 || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sinh ratio bounds need K < 0, got {kappa}"
        )));
    }
    if !(n > 1.0) || !n.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sinh ratio bounds need N > 1, got {n}"
        )));
    }
    let b = space.extent();
    if !(0.0 < x0 && x0 < x1 && x1 < b) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < x0 < x1 < {b}, got x0 = {x0}, x1 = {x1}"
        )));
    }
    let h0 = space.eval_density(x0)?;
    let h1 = space.eval_density(x1)?;
    if h0 == 0.0 {
        return Err(Error::DivisionByZero(format!(
            "density vanishes at x0 = {x0}"
        )));
    }
    let c = (-kappa / (n - 1.0)).sqrt();
    let lower = sinh_ratio((b - x1) * c, (b - x0) * c).powf(n - 1.0);
    let upper = sinh_ratio(x1 * c, x0 * c).powf(n - 1.0);
    let value = h1 / h0;
    let tol = 1e-9;
    let ok = value >= lower * (1.0 - tol) && value <= upper * (1.0 + tol);
    Ok(SinhRatioBounds {
        lower,
        value,
        upper,
        ok,
    })
}
