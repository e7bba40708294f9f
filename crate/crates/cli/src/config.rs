//! Declarative experiment configuration: strict JSON schema (unknown fields
//! rejected), file paths resolved relative to the config location.

use crate::CliError;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use weyl1d::geometry::{
    make_space, CurvatureDimension, DensityFamily, DensitySpec, FunctionSpec, ModelSpace,
    SpaceKind,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Spectrum,
    Weyl,
    RatioIntegral,
    ConvexityCheck,
    HeatTrace,
    Abelian,
}

impl TaskKind {
    pub fn name(&self) -> &'static str {
        match self {
            TaskKind::Spectrum => "spectrum",
            TaskKind::Weyl => "weyl",
            TaskKind::RatioIntegral => "ratio-integral",
            TaskKind::ConvexityCheck => "convexity-check",
            TaskKind::HeatTrace => "heat-trace",
            TaskKind::Abelian => "abelian",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum DensityConfig {
    Constant {
        c: f64,
    },
    Sinpower {
        #[serde(rename = "N")]
        n: f64,
    },
    Expnegf {
        f: FunctionConfig,
    },
    Sampled {
        grid: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionConfig {
    Constant { value: f64 },
    Linear { slope: f64, intercept: f64 },
    Quadratic { a: f64, b: f64, c: f64 },
    NegLogSinPower { power: f64 },
    NegLogSinhPower { power: f64 },
    NegLogPoly { coefficients: Vec<f64> },
    Sampled { grid: Vec<f64>, values: Vec<f64> },
}

impl From<FunctionConfig> for FunctionSpec {
    fn from(f: FunctionConfig) -> Self {
        match f {
            FunctionConfig::Constant { value } => FunctionSpec::Constant { value },
            FunctionConfig::Linear { slope, intercept } => {
                FunctionSpec::Linear { slope, intercept }
            }
            FunctionConfig::Quadratic { a, b, c } => FunctionSpec::Quadratic { a, b, c },
            FunctionConfig::NegLogSinPower { power } => FunctionSpec::NegLogSinPower { power },
            FunctionConfig::NegLogSinhPower { power } => {
                FunctionSpec::NegLogSinhPower { power }
            }
            FunctionConfig::NegLogPoly { coefficients } => {
                FunctionSpec::NegLogPoly { coefficients }
            }
            FunctionConfig::Sampled { grid, values } => FunctionSpec::Sampled { grid, values },
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub kind: String,
    #[serde(default)]
    pub length: Option<f64>,
    #[serde(default)]
    pub radius: Option<f64>,
    pub density: DensityConfig,
    /// Curvature lower bound; defaults to -(N-1) for sinpower densities
    /// (the model normalization) and 0 otherwise.
    #[serde(rename = "K", default)]
    pub curvature: Option<f64>,
    /// Dimension upper bound; defaults to the sinpower N or 2.
    #[serde(rename = "N", default)]
    pub dimension: Option<f64>,
    #[serde(default)]
    pub normalize: bool,
    #[serde(default)]
    pub validate: bool,
}

impl SpaceConfig {
    pub fn build(&self) -> Result<ModelSpace, CliError> {
        let kind = match self.kind.as_str() {
            "interval" => {
                let length = self.length.ok_or_else(|| {
                    CliError::Config("interval space needs a \"length\" field".into())
                })?;
                SpaceKind::Interval { length }
            }
            "circle" => {
                let radius = self.radius.ok_or_else(|| {
                    CliError::Config("circle space needs a \"radius\" field".into())
                })?;
                SpaceKind::Circle { radius }
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown space kind \"{other}\" (expected \"interval\" or \"circle\")"
                )))
            }
        };
        let (family, sin_n) = match self.density.clone() {
            DensityConfig::Constant { c } => (DensityFamily::Constant { c }, None),
            DensityConfig::Sinpower { n } => {
                (DensityFamily::SinPower { power: n - 1.0 }, Some(n))
            }
            DensityConfig::Expnegf { f } => (DensityFamily::ExpNegF { f: f.into() }, None),
            DensityConfig::Sampled { grid, values } => {
                (DensityFamily::Sampled { grid, values }, None)
            }
        };
        let n = self.dimension.or(sin_n).unwrap_or(2.0);
        let k = self
            .curvature
            .unwrap_or(if sin_n.is_some() { -(n - 1.0) } else { 0.0 });
        let cd = CurvatureDimension::new(k, n).map_err(CliError::from)?;
        let space = make_space(kind, DensitySpec::new(family, cd), self.validate)
            .map_err(CliError::from)?;
        if self.normalize {
            space.normalized().map_err(CliError::from)
        } else {
            Ok(space)
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub space: SpaceConfig,
    pub task: TaskKind,
    #[serde(default)]
    pub task_parameters: serde_json::Value,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_str(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path:?}: {e}")))?;
        Self::from_str(&text)
    }

    /// Output directory resolved relative to the config file location.
    pub fn resolve_output(&self, config_path: &Path) -> Option<PathBuf> {
        self.output.as_ref().map(|o| {
            let p = PathBuf::from(o);
            if p.is_absolute() {
                p
            } else {
                config_path.parent().unwrap_or(Path::new(".")).join(p)
            }
        })
    }
}

fn default_grading_none() -> GradingConfig {
    GradingConfig::Uniform
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingConfig {
    Uniform,
    BoundaryGraded { strength: f64 },
}

/// Mesh and eigensolver parameters shared by the spectrum-driven tasks.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumParams {
    #[serde(default = "default_elements")]
    pub elements: usize,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_grading_none")]
    pub grading: GradingConfig,
    #[serde(default = "default_quad_order")]
    pub quadrature_order: usize,
    /// Weyl ratio tolerance (weyl task only).
    #[serde(default = "default_ratio_tol")]
    pub tolerance: f64,
    #[serde(default = "default_ratio_points")]
    pub ratio_points: usize,
}

fn default_elements() -> usize {
    4000
}
fn default_count() -> usize {
    1100
}
fn default_quad_order() -> usize {
    weyl1d::spectral::DEFAULT_QUADRATURE_ORDER
}
fn default_ratio_tol() -> f64 {
    0.05
}
fn default_ratio_points() -> usize {
    33
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioIntegralParams {
    #[serde(default)]
    pub r_max: Option<f64>,
    #[serde(default)]
    pub r_min: Option<f64>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_quad_points")]
    pub quadrature_points: usize,
    #[serde(default = "default_profile_tol")]
    pub tolerance: f64,
}

fn default_steps() -> usize {
    11
}
fn default_quad_points() -> usize {
    100_000
}
fn default_profile_tol() -> f64 {
    1e-3
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexityParams {
    #[serde(default = "default_resolution")]
    pub grid_resolution: usize,
    /// Override of the space's curvature bound for the check.
    #[serde(rename = "K", default)]
    pub curvature: Option<f64>,
    /// Override of the convexity dimension (defaults to the space's N - 1).
    #[serde(rename = "N", default)]
    pub convexity_dimension: Option<f64>,
}

fn default_resolution() -> usize {
    96
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatTraceParams {
    #[serde(default = "default_t_min_factor")]
    pub t_min_factor: f64,
    #[serde(default = "default_t_max_factor")]
    pub t_max_factor: f64,
    #[serde(default = "default_t_points")]
    pub points: usize,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default = "default_heat_tol")]
    pub tolerance: f64,
    #[serde(default = "default_elements")]
    pub elements: usize,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_grading_none")]
    pub grading: GradingConfig,
    #[serde(default = "default_quad_order")]
    pub quadrature_order: usize,
}

fn default_t_min_factor() -> f64 {
    1e-3
}
fn default_t_max_factor() -> f64 {
    1e-1
}
fn default_t_points() -> usize {
    17
}
fn default_k() -> u32 {
    1
}
fn default_heat_tol() -> f64 {
    0.02
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureConfig {
    Lebesgue,
    SquareAtoms,
    LogGrowth,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianParams {
    pub measure: MeasureConfig,
    pub gamma: f64,
    pub constant: f64,
    #[serde(default)]
    pub log_power: f64,
    #[serde(default = "default_atom_count")]
    pub atom_count: usize,
    #[serde(default)]
    pub a_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default = "default_abelian_tol")]
    pub tolerance: f64,
}

fn default_atom_count() -> usize {
    3000
}
fn default_abelian_tol() -> f64 {
    0.01
}

pub fn parse_params<T: serde::de::DeserializeOwned + Default>(
    value: &serde_json::Value,
) -> Result<T, CliError> {
    if value.is_null() {
        return Ok(T::default());
    }
    serde_json::from_value(value.clone())
        .map_err(|e| CliError::Config(format!("task_parameters: {e}")))
}

impl Default for SpectrumParams {
    fn default() -> Self {
        serde_json::from_value(serde_json::json!({})).unwrap()
    }
}
impl Default for RatioIntegralParams {
    fn default() -> Self {
        serde_json::from_value(serde_json::json!({})).unwrap()
    }
}
impl Default for ConvexityParams {
    fn default() -> Self {
        serde_json::from_value(serde_json::json!({})).unwrap()
    }
}
impl Default for HeatTraceParams {
    fn default() -> Self {
        serde_json::from_value(serde_json::json!({})).unwrap()
    }
}
