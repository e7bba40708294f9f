//! One-dimensional model spaces: intervals [0, l] and circles of radius r
//! carrying a nonnegative density h against coordinate Lebesgue measure.
//!
//! Coordinates are [0, l] on intervals and [0, 2*pi*r) on circles with
//! arithmetic modulo the circumference, so the one-dimensional Hausdorff
//! measure is coordinate Lebesgue measure and no chart logic is needed.
//! Densities may vanish at interval endpoints only; interior zeros are
//! rejected at construction.

use crate::convexity;
use crate::error::{Error, Result};
use crate::quad::Adaptive;
use sha2::{Digest, Sha256};

/// Curvature lower bound K and dimension upper bound N, stored exactly as
/// given (no normalization).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureDimension {
    pub k: f64,
    pub n: f64,
}

impl CurvatureDimension {
    pub fn new(k: f64, n: f64) -> Result<Self> {
        if !k.is_finite() || !n.is_finite() || n <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "curvature-dimension pair needs finite K and N > 1, got K = {k}, N = {n}"
            )));
        }
        Ok(CurvatureDimension { k, n })
    }

    /// The convexity parameter of the log-density is N - 1.
    pub fn convexity_dimension(&self) -> f64 {
        self.n - 1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpaceKind {
    Interval { length: f64 },
    Circle { radius: f64 },
}

impl SpaceKind {
    fn validate(&self) -> Result<()> {
        let v = match self {
            SpaceKind::Interval { length } => *length,
            SpaceKind::Circle { radius } => *radius,
        };
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "space parameter must be positive and finite, got {v}"
            )));
        }
        Ok(())
    }

    /// Coordinate span: l for intervals, 2*pi*r for circles.
    pub fn extent(&self) -> f64 {
        match self {
            SpaceKind::Interval { length } => *length,
            SpaceKind::Circle { radius } => std::f64::consts::TAU * radius,
        }
    }

    /// Metric diameter: l for intervals, pi*r for circles.
    pub fn diameter(&self) -> f64 {
        match self {
            SpaceKind::Interval { length } => *length,
            SpaceKind::Circle { radius } => std::f64::consts::PI * radius,
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, SpaceKind::Circle { .. })
    }

    /// Wrap a circle coordinate into [0, extent); identity on intervals.
    pub fn canonical(&self, x: f64) -> f64 {
        match self {
            SpaceKind::Interval { .. } => x,
            SpaceKind::Circle { .. } => {
                let c = self.extent();
                let y = x.rem_euclid(c);
                if y == c {
                    0.0
                } else {
                    y
                }
            }
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        match self {
            SpaceKind::Interval { length } => (0.0..=*length).contains(&x),
            SpaceKind::Circle { .. } => true, // wrapped modulo circumference
        }
    }

    fn metric(&self, x: f64, y: f64) -> f64 {
        match self {
            SpaceKind::Interval { .. } => (x - y).abs(),
            SpaceKind::Circle { .. } => {
                let c = self.extent();
                let d = (self.canonical(x) - self.canonical(y)).abs();
                d.min(c - d)
            }
        }
    }
}

/// An explicitly evaluable scalar function on the coordinate domain, used
/// for log-densities f with h = exp(-f). Values may be +inf where the
/// density vanishes; NaN signals an evaluation failure.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Constant { value: f64 },
    Linear { slope: f64, intercept: f64 },
    Quadratic { a: f64, b: f64, c: f64 },
    /// -power * ln(sin x), natural on [0, pi].
    NegLogSinPower { power: f64 },
    /// -power * ln(sinh x), natural on (0, b].
    NegLogSinhPower { power: f64 },
    /// -ln(p(x)) with p given by ascending coefficients.
    NegLogPoly { coefficients: Vec<f64> },
    /// Piecewise-linear interpolation of (grid, values).
    Sampled { grid: Vec<f64>, values: Vec<f64> },
}

impl FunctionSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FunctionSpec::Constant { value } => *value,
            FunctionSpec::Linear { slope, intercept } => slope * x + intercept,
            FunctionSpec::Quadratic { a, b, c } => (a * x + b) * x + c,
            FunctionSpec::NegLogSinPower { power } => -power * x.sin().ln(),
            FunctionSpec::NegLogSinhPower { power } => -power * x.sinh().ln(),
            FunctionSpec::NegLogPoly { coefficients } => {
                let mut p = 0.0;
                for &c in coefficients.iter().rev() {
                    p = p * x + c;
                }
                -p.ln()
            }
            FunctionSpec::Sampled { grid, values } => interp_linear(grid, values, x),
        }
    }

    fn canonical_string(&self) -> String {
        match self {
            FunctionSpec::Constant { value } => format!("const:{value:.17e}"),
            FunctionSpec::Linear { slope, intercept } => {
                format!("lin:{slope:.17e},{intercept:.17e}")
            }
            FunctionSpec::Quadratic { a, b, c } => format!("quad:{a:.17e},{b:.17e},{c:.17e}"),
            FunctionSpec::NegLogSinPower { power } => format!("nlsin:{power:.17e}"),
            FunctionSpec::NegLogSinhPower { power } => format!("nlsinh:{power:.17e}"),
            FunctionSpec::NegLogPoly { coefficients } => {
                let cs: Vec<String> = coefficients.iter().map(|c| format!("{c:.17e}")).collect();
                format!("nlpoly:{}", cs.join(","))
            }
            FunctionSpec::Sampled { grid, values } => {
                let mut h = Sha256::new();
                for (g, v) in grid.iter().zip(values) {
                    h.update(g.to_le_bytes());
                    h.update(v.to_le_bytes());
                }
                format!("fsampled:{}:{:x}", grid.len(), h.finalize())
            }
        }
    }
}

fn interp_linear(grid: &[f64], values: &[f64], x: f64) -> f64 {
    match locate_segment(grid, x) {
        Some(i) => {
            let t = (x - grid[i]) / (grid[i + 1] - grid[i]);
            (1.0 - t) * values[i] + t * values[i + 1]
        }
        None => f64::NAN,
    }
}

fn locate_segment(grid: &[f64], x: f64) -> Option<usize> {
    if grid.len() < 2 || x < grid[0] || x > grid[grid.len() - 1] {
        return None;
    }
    let i = grid.partition_point(|&g| g <= x);
    Some(i.clamp(1, grid.len() - 1) - 1)
}

/// Density family; h is the family value times the spec-level `scale`.
#[derive(Clone, Debug, PartialEq)]
pub enum DensityFamily {
    Constant { c: f64 },
    ExpNegF { f: FunctionSpec },
    /// h = sin(x)^power on [0, pi] (power = N - 1 for the model spaces).
    SinPower { power: f64 },
    /// Piecewise log-linear samples; linear where a neighbor value is zero.
    Sampled { grid: Vec<f64>, values: Vec<f64> },
}

/// A density together with its curvature-dimension parameters and a
/// positive scalar multiplier (used for normalization and measure-scaling
/// experiments; the family values themselves are immutable).
#[derive(Clone, Debug, PartialEq)]
pub struct DensitySpec {
    pub family: DensityFamily,
    pub cd: CurvatureDimension,
    pub scale: f64,
}

impl DensitySpec {
    pub fn new(family: DensityFamily, cd: CurvatureDimension) -> Self {
        DensitySpec {
            family,
            cd,
            scale: 1.0,
        }
    }

    pub fn scaled_by(&self, b: f64) -> Result<Self> {
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "density scale factor must be positive, got {b}"
            )));
        }
        Ok(DensitySpec {
            family: self.family.clone(),
            cd: self.cd,
            scale: self.scale * b,
        })
    }

    /// Family value before `scale`; NaN marks evaluation failure.
    fn family_value(&self, x: f64, extent: f64, circle: bool) -> f64 {
        match &self.family {
            DensityFamily::Constant { c } => *c,
            DensityFamily::ExpNegF { f } => (-f.eval(x)).exp(),
            DensityFamily::SinPower { power } => {
                // sin may round to a tiny negative just outside [0, pi]
                let s = x.sin().max(0.0);
                s.powf(*power)
            }
            DensityFamily::Sampled { grid, values } => {
                sampled_density(grid, values, x, extent, circle)
            }
        }
    }

    fn canonical_string(&self) -> String {
        let fam = match &self.family {
            DensityFamily::Constant { c } => format!("const:{c:.17e}"),
            DensityFamily::ExpNegF { f } => format!("expnegf:{}", f.canonical_string()),
            DensityFamily::SinPower { power } => format!("sinpow:{power:.17e}"),
            DensityFamily::Sampled { grid, values } => {
                let mut h = Sha256::new();
                for (g, v) in grid.iter().zip(values) {
                    h.update(g.to_le_bytes());
                    h.update(v.to_le_bytes());
                }
                format!("sampled:{}:{:x}", grid.len(), h.finalize())
            }
        };
        format!(
            "{fam};K={:.17e};N={:.17e};scale={:.17e}",
            self.cd.k, self.cd.n, self.scale
        )
    }
}

/// Log-linear interpolation between samples; plain linear where one of the
/// neighboring values is zero (endpoint-vanishing densities).
fn sampled_density(grid: &[f64], values: &[f64], x: f64, extent: f64, circle: bool) -> f64 {
    let seg = |v0: f64, v1: f64, t: f64| -> f64 {
        if v0 > 0.0 && v1 > 0.0 {
            ((1.0 - t) * v0.ln() + t * v1.ln()).exp()
        } else {
            (1.0 - t) * v0 + t * v1
        }
    };
    let m = grid.len();
    if circle {
        let last = grid[m - 1];
        if x >= last || x < grid[0] {
            // wrap segment from the last sample back to the first
            let span = extent - last + grid[0];
            let off = if x >= last { x - last } else { x + extent - last };
            return seg(values[m - 1], values[0], off / span);
        }
    }
    match locate_segment(grid, x) {
        Some(i) => seg(values[i], values[i + 1], (x - grid[i]) / (grid[i + 1] - grid[i])),
        None => f64::NAN,
    }
}

/// A validated one-dimensional model space. Immutable after construction;
/// all evaluation is read-only and thread-safe.
#[derive(Clone, Debug)]
pub struct ModelSpace {
    kind: SpaceKind,
    density: DensitySpec,
    total_mass: f64,
    hausdorff_length: f64,
}

const VALIDATION_GRID_RESOLUTION: usize = 96;

/// Construct and validate a model space. With `validate` set, the density's
/// log is additionally checked for (K, N-1)-convexity on a sampling grid and
/// a violation witness is reported on failure.
pub fn make_space(kind: SpaceKind, density: DensitySpec, validate: bool) -> Result<ModelSpace> {
    kind.validate()?;
    if !density.scale.is_finite() || density.scale <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "density scale must be positive, got {}",
            density.scale
        )));
    }
    check_family_domain(&kind, &density.family)?;

    let extent = kind.extent();
    let circle = kind.is_circle();

    // positivity scan: interior zeros (or invalid values) are rejected
    let scan = 1024usize;
    for i in 0..=scan {
        let x = extent * (i as f64 / scan as f64);
        if circle && i == scan {
            continue;
        }
        let v = density.family_value(x, extent, circle);
        if v.is_nan() || v < 0.0 || v.is_infinite() {
            return Err(Error::EvaluationFailure(format!(
                "density evaluates to {v} at x = {x}"
            )));
        }
        let interior = circle || (i > 0 && i < scan);
        if interior && v == 0.0 {
            return Err(Error::InteriorZeroDensity { x });
        }
    }
    if let DensityFamily::Sampled { grid, values } = &density.family {
        for (i, (&g, &v)) in grid.iter().zip(values).enumerate() {
            let interior = circle || (i > 0 && i + 1 < grid.len());
            if interior && v == 0.0 {
                return Err(Error::InteriorZeroDensity { x: g });
            }
        }
    }

    let q = Adaptive::with_rel_tol(1e-12);
    let f = |x: f64| density.family_value(x, extent, circle);
    let breaks = family_breakpoints(&density.family, 0.0, extent);
    let base_mass = q.integrate_with_breakpoints(&f, 0.0, extent, &breaks)?;
    let total_mass = density.scale * base_mass;
    if !total_mass.is_finite() || total_mass <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "total mass must be positive and finite, got {total_mass}"
        )));
    }

    let space = ModelSpace {
        kind,
        density,
        total_mass,
        hausdorff_length: extent,
    };

    if validate {
        let cd = space.density.cd;
        let report = convexity::check_density_convexity(
            &space,
            cd.k,
            cd.convexity_dimension(),
            VALIDATION_GRID_RESOLUTION,
        )?;
        if !report.passed {
            let (y0, y1, t) = report.witness.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
            return Err(Error::ConvexityViolation {
                margin: report.worst_margin,
                y0,
                y1,
                t,
            });
        }
    }
    Ok(space)
}

fn check_family_domain(kind: &SpaceKind, family: &DensityFamily) -> Result<()> {
    let extent = kind.extent();
    match family {
        DensityFamily::Constant { c } => {
            if !c.is_finite() || *c <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "constant density must be positive, got {c}"
                )));
            }
        }
        DensityFamily::SinPower { power } => {
            if !power.is_finite() || *power <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "sin-power exponent must be positive, got {power}"
                )));
            }
            match kind {
                SpaceKind::Interval { length }
                    if *length <= std::f64::consts::PI * (1.0 + 1e-12) => {}
                _ => {
                    return Err(Error::DomainMismatch(
                        "sin-power density lives on an interval of length <= pi".into(),
                    ))
                }
            }
        }
        DensityFamily::ExpNegF { f } => {
            if kind.is_circle() {
                // only functions that close up periodically make sense here
                let ok = match f {
                    FunctionSpec::Constant { .. } => true,
                    FunctionSpec::Sampled { .. } => true,
                    _ => false,
                };
                if !ok {
                    return Err(Error::DomainMismatch(
                        "non-periodic log-density on a circle".into(),
                    ));
                }
            }
        }
        DensityFamily::Sampled { grid, values } => {
            if grid.len() < 2 || grid.len() != values.len() {
                return Err(Error::InvalidParameter(
                    "sampled density needs matching grid/value arrays of length >= 2".into(),
                ));
            }
            if grid.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidParameter(
                    "sampled grid must be strictly increasing".into(),
                ));
            }
            if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidParameter(
                    "sampled values must be finite and nonnegative".into(),
                ));
            }
            let lo_ok = grid[0].abs() <= 1e-12 * extent;
            let hi = grid[grid.len() - 1];
            let hi_ok = if kind.is_circle() {
                hi < extent
            } else {
                (hi - extent).abs() <= 1e-12 * extent
            };
            if !lo_ok || !hi_ok {
                return Err(Error::DomainMismatch(format!(
                    "sampled grid [{}, {hi}] does not cover the space [0, {extent})",
                    grid[0]
                )));
            }
        }
    }
    Ok(())
}

fn family_breakpoints(family: &DensityFamily, lo: f64, hi: f64) -> Vec<f64> {
    match family {
        DensityFamily::Sampled { grid, .. } => {
            grid.iter().copied().filter(|g| *g > lo && *g < hi).collect()
        }
        DensityFamily::ExpNegF {
            f: FunctionSpec::Sampled { grid, .. },
        } => grid.iter().copied().filter(|g| *g > lo && *g < hi).collect(),
        _ => Vec::new(),
    }
}

impl ModelSpace {
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn density(&self) -> &DensitySpec {
        &self.density
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn hausdorff_length(&self) -> f64 {
        self.hausdorff_length
    }

    pub fn diameter(&self) -> f64 {
        self.kind.diameter()
    }

    pub fn extent(&self) -> f64 {
        self.kind.extent()
    }

    pub fn is_circle(&self) -> bool {
        self.kind.is_circle()
    }

    /// h(x) without domain checks (construction guarantees validity inside
    /// the domain); used by quadrature hot loops.
    pub(crate) fn density_at(&self, x: f64) -> f64 {
        self.density.scale
            * self
                .density
                .family_value(self.kind.canonical(x), self.extent(), self.is_circle())
    }

    /// h(x) with domain validation.
    pub fn eval_density(&self, x: f64) -> Result<f64> {
        if !self.kind.contains(x) {
            return Err(Error::OutOfDomain {
                x,
                lo: 0.0,
                hi: self.extent(),
            });
        }
        let v = self.density_at(x);
        if v.is_nan() {
            return Err(Error::EvaluationFailure(format!(
                "density evaluation failed at x = {x}"
            )));
        }
        Ok(v)
    }

    /// Metric distance between two coordinates.
    pub fn distance(&self, x: f64, y: f64) -> Result<f64> {
        for v in [x, y] {
            if !self.kind.contains(v) {
                return Err(Error::OutOfDomain {
                    x: v,
                    lo: 0.0,
                    hi: self.extent(),
                });
            }
        }
        Ok(self.kind.metric(x, y))
    }

    /// ∫_a^b h dx over a coordinate subinterval of [0, extent].
    pub fn mass_between(&self, a: f64, b: f64) -> Result<f64> {
        let extent = self.extent();
        if !(0.0..=extent).contains(&a) || !(0.0..=extent).contains(&b) || a > b {
            return Err(Error::InvalidParameter(format!(
                "mass_between needs 0 <= a <= b <= {extent}, got [{a}, {b}]"
            )));
        }
        let q = Adaptive::with_rel_tol(1e-12);
        let f = |x: f64| self.density_at(x);
        let breaks = family_breakpoints(&self.density.family, a, b);
        q.integrate_with_breakpoints(&f, a, b, &breaks)
    }

    /// Interior coordinates where the density interpolation has kinks.
    pub(crate) fn density_breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        family_breakpoints(&self.density.family, lo, hi)
    }

    /// Rescaled copy with density b*h; total mass scales accordingly.
    pub fn with_scaled_density(&self, b: f64) -> Result<ModelSpace> {
        let density = self.density.scaled_by(b)?;
        Ok(ModelSpace {
            kind: self.kind,
            density,
            total_mass: self.total_mass * b,
            hausdorff_length: self.hausdorff_length,
        })
    }

    /// Copy rescaled to a probability measure.
    pub fn normalized(&self) -> Result<ModelSpace> {
        self.with_scaled_density(1.0 / self.total_mass)
    }

    /// Stable hex digest of the space parameters, used as the spectrum
    /// cache key component.
    pub fn fingerprint(&self) -> String {
        let kind = match self.kind {
            SpaceKind::Interval { length } => format!("interval:{length:.17e}"),
            SpaceKind::Circle { radius } => format!("circle:{radius:.17e}"),
        };
        let mut h = Sha256::new();
        h.update(kind.as_bytes());
        h.update(self.density.canonical_string().as_bytes());
        let digest = h.finalize();
        digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
    }
}
