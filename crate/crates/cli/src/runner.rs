//! Task dispatch: builds the space, runs the requested computation, and
//! assembles the artifact set plus the machine-readable verdict.

use crate::config::{
    parse_params, AbelianParams, ConvexityParams, ExperimentConfig, GradingConfig,
    HeatTraceParams, MeasureConfig, RatioIntegralParams, SpectrumParams, TaskKind,
};
use crate::output::{
    csv_from_rows, format_float, render_verdict, two_column, Artifacts, TargetCheck, Verdict,
    Witness,
};
use crate::CliError;
use std::path::Path;
use weyl1d::convexity::check_density_convexity;
use weyl1d::fixtures;
use weyl1d::geometry::ModelSpace;
use weyl1d::harness::{
    abelian_check, classify_dimension, heat_trace_limit, tail_ratio, top_decade_grid,
    weyl_ratio_curve, SyntheticMeasure, DEFAULT_ALPHA_GRID,
};
use weyl1d::measure::ratio_profile;
use weyl1d::spectral::{
    cache, eigen_solve, heat_trace, Discretization, Spectrum, TailModel,
    DEFAULT_GRADING_STRENGTH,
};

pub const CACHE_ENV_VAR: &str = "WEYL1D_CACHE_DIR";

#[derive(Debug)]
pub struct RunOutcome {
    pub pass: bool,
    pub artifacts: Artifacts,
}

/// Apply a tolerance scale (CLI flag) to a base tolerance.
#[derive(Clone, Copy, Debug)]
pub struct Overrides {
    pub tolerance_scale: f64,
}

impl Default for Overrides {
    fn default() -> Self {
        Overrides {
            tolerance_scale: 1.0,
        }
    }
}

pub fn run(config: &ExperimentConfig, overrides: &Overrides) -> Result<RunOutcome, CliError> {
    match config.task {
        TaskKind::Spectrum => run_spectrum(config, overrides),
        TaskKind::Weyl => run_weyl(config, overrides),
        TaskKind::RatioIntegral => run_ratio_integral(config, overrides),
        TaskKind::ConvexityCheck => run_convexity(config, overrides),
        TaskKind::HeatTrace => run_heat_trace(config, overrides),
        TaskKind::Abelian => run_abelian(config, overrides),
    }
}

pub fn run_and_write(
    config: &ExperimentConfig,
    config_path: &Path,
    out_override: Option<&Path>,
    overrides: &Overrides,
) -> Result<(RunOutcome, std::path::PathBuf), CliError> {
    let outcome = run(config, overrides)?;
    let out_dir = match out_override {
        Some(p) => p.to_path_buf(),
        None => config.resolve_output(config_path).ok_or_else(|| {
            CliError::Config(
                "no output directory: set \"output\" in the config or pass --out".into(),
            )
        })?,
    };
    outcome.artifacts.write_all(&out_dir)?;
    Ok((outcome, out_dir))
}

fn build_discretization(
    space: &ModelSpace,
    elements: usize,
    grading: &GradingConfig,
    quadrature_order: usize,
) -> Result<Discretization, CliError> {
    match grading {
        GradingConfig::Uniform => {
            Discretization::uniform(space, elements, quadrature_order).map_err(CliError::from)
        }
        GradingConfig::BoundaryGraded { strength } => {
            Discretization::boundary_graded(space, elements, *strength, quadrature_order)
                .map_err(CliError::from)
        }
    }
}

/// Grading default: boundary-graded for endpoint-vanishing densities on
/// intervals, uniform otherwise.
fn default_grading(space: &ModelSpace) -> GradingConfig {
    if space.is_circle() {
        return GradingConfig::Uniform;
    }
    let l = space.extent();
    let h0 = space.eval_density(0.0).unwrap_or(1.0);
    let h1 = space.eval_density(l).unwrap_or(1.0);
    if h0 == 0.0 || h1 == 0.0 {
        GradingConfig::BoundaryGraded {
            strength: DEFAULT_GRADING_STRENGTH,
        }
    } else {
        GradingConfig::Uniform
    }
}

/// Solve through the spectrum cache when WEYL1D_CACHE_DIR is set.
fn cached_eigen_solve(
    space: &ModelSpace,
    disc: &Discretization,
    count: usize,
) -> Result<Spectrum, CliError> {
    if let Ok(dir) = std::env::var(CACHE_ENV_VAR) {
        let dir = Path::new(&dir);
        let key = cache::key(&space.fingerprint(), &disc.signature(), count);
        if let Some(spec) = cache::load(dir, &key).map_err(CliError::from)? {
            if spec.space_fingerprint() == space.fingerprint() {
                return Ok(spec);
            }
        }
        let spec = eigen_solve(space, disc, count).map_err(CliError::from)?;
        cache::store(dir, &key, &spec).map_err(CliError::from)?;
        Ok(spec)
    } else {
        eigen_solve(space, disc, count).map_err(CliError::from)
    }
}

fn spectrum_with_params(
    config: &ExperimentConfig,
    params: &SpectrumParams,
) -> Result<(ModelSpace, Spectrum), CliError> {
    let space = config.space.build()?;
    let grading = match (&params.grading, config.task_parameters.get("grading")) {
        (_, Some(_)) => params.grading.clone(),
        (g, None) => match g {
            GradingConfig::Uniform => default_grading(&space),
            g => g.clone(),
        },
    };
    let disc = build_discretization(&space, params.elements, &grading, params.quadrature_order)?;
    let spec = cached_eigen_solve(&space, &disc, params.count)?;
    Ok((space, spec))
}

fn verdict_artifacts(
    config: &ExperimentConfig,
    fingerprint: &str,
    targets: Vec<TargetCheck>,
    witness: Option<Witness>,
    results_csv: String,
    plotdata: Vec<(String, String)>,
) -> Result<RunOutcome, CliError> {
    let pass = targets.iter().all(|t| t.pass);
    let verdict = Verdict {
        schema_version: crate::config::SCHEMA_VERSION,
        task: config.task.name().to_string(),
        fingerprint: fingerprint.to_string(),
        seed: config.seed,
        pass,
        targets,
        witness,
    };
    let verdict_json = render_verdict(&verdict)?;
    Ok(RunOutcome {
        pass,
        artifacts: Artifacts {
            results_csv,
            verdict_json,
            plotdata,
        },
    })
}

fn run_spectrum(config: &ExperimentConfig, overrides: &Overrides) -> Result<RunOutcome, CliError> {
    let params: SpectrumParams = parse_params(&config.task_parameters)?;
    let (space, spec) = spectrum_with_params(config, &params)?;
    let rows: Vec<Vec<f64>> = spec
        .entries()
        .map(|(i, v, resolved)| vec![i as f64, v, if resolved { 1.0 } else { 0.0 }])
        .collect();
    let csv = csv_from_rows("index,eigenvalue,resolved", &rows);
    let lambda0 = spec.resolved()[0];
    let tol = 1e-8 * overrides.tolerance_scale;
    let targets = vec![TargetCheck {
        name: "lambda0".into(),
        target: 0.0,
        measured: lambda0,
        tolerance: tol,
        pass: lambda0.abs() <= tol,
    }];
    let plot = spec
        .entries()
        .map(|(i, v, _)| (i as f64, v))
        .collect::<Vec<_>>();
    verdict_artifacts(
        config,
        &space.fingerprint(),
        targets,
        None,
        csv,
        vec![("spectrum.dat".into(), two_column(&plot))],
    )
}

fn run_weyl(config: &ExperimentConfig, overrides: &Overrides) -> Result<RunOutcome, CliError> {
    let params: SpectrumParams = parse_params(&config.task_parameters)?;
    let (space, spec) = spectrum_with_params(config, &params)?;
    let target = space.hausdorff_length() / std::f64::consts::PI;
    let tol = params.tolerance * overrides.tolerance_scale;

    let grid = top_decade_grid(&spec, params.ratio_points);
    let curve = weyl_ratio_curve(&spec, &grid).map_err(CliError::from)?;
    let summary = tail_ratio(&spec, target, params.ratio_points).map_err(CliError::from)?;
    let classification =
        classify_dimension(&spec, &DEFAULT_ALPHA_GRID).map_err(CliError::from)?;

    let rows: Vec<Vec<f64>> = curve
        .iter()
        .map(|&(l, r)| vec![l, r, target, (r - target) / target])
        .collect();
    let csv = csv_from_rows("lambda,ratio,target,rel_dev", &rows);
    let targets = vec![
        TargetCheck {
            name: "tail_ratio".into(),
            target,
            measured: summary.mean,
            tolerance: tol,
            pass: summary.max_rel_dev <= tol,
        },
        TargetCheck {
            name: "growth_exponent".into(),
            target: 0.5,
            measured: classification.fit.exponent,
            tolerance: 0.05 * overrides.tolerance_scale,
            pass: classification.is_one_dimensional,
        },
    ];
    verdict_artifacts(
        config,
        &space.fingerprint(),
        targets,
        None,
        csv,
        vec![("ratio_curve.dat".into(), two_column(&curve))],
    )
}

fn run_ratio_integral(
    config: &ExperimentConfig,
    overrides: &Overrides,
) -> Result<RunOutcome, CliError> {
    let params: RatioIntegralParams = parse_params(&config.task_parameters)?;
    let space = config.space.build()?;
    let d = space.diameter();
    let r_max = params.r_max.unwrap_or(0.1 * d);
    let r_min = params.r_min.unwrap_or(1e-4 * d);
    let profile =
        ratio_profile(&space, r_max, r_min, params.steps).map_err(CliError::from)?;
    let target = space.hausdorff_length() / 2.0;
    let tol = params.tolerance * overrides.tolerance_scale;
    let rel_err = (profile.extrapolated_limit - target).abs() / target;

    let rows: Vec<Vec<f64>> = profile
        .radii
        .iter()
        .zip(&profile.integrals)
        .map(|(&r, &v)| {
            vec![
                r,
                v,
                profile.extrapolated_limit,
                target,
                (profile.extrapolated_limit - target).abs(),
            ]
        })
        .collect();
    let csv = csv_from_rows("r,integral,extrapolated_limit,target,abs_error", &rows);
    let plot: Vec<(f64, f64)> = profile
        .radii
        .iter()
        .zip(&profile.integrals)
        .map(|(&r, &v)| (r, v))
        .collect();
    let targets = vec![TargetCheck {
        name: "extrapolated_limit".into(),
        target,
        measured: profile.extrapolated_limit,
        tolerance: tol,
        pass: rel_err <= tol,
    }];
    verdict_artifacts(
        config,
        &space.fingerprint(),
        targets,
        None,
        csv,
        vec![("profile.dat".into(), two_column(&plot))],
    )
}

fn run_convexity(config: &ExperimentConfig, overrides: &Overrides) -> Result<RunOutcome, CliError> {
    let params: ConvexityParams = parse_params(&config.task_parameters)?;
    let space = config.space.build()?;
    let cd = space.density().cd;
    let kappa = params.curvature.unwrap_or(cd.k);
    let n_conv = params
        .convexity_dimension
        .unwrap_or(cd.convexity_dimension());
    let report = check_density_convexity(&space, kappa, n_conv, params.grid_resolution)
        .map_err(CliError::from)?;

    // the report itself, as JSON, on stdout
    let (y0, y1, t) = report.witness.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    println!(
        "{}",
        serde_json::json!({
            "passed": report.passed,
            "worst_margin": report.worst_margin,
            "witness": {"y0": y0, "y1": y1, "t": t},
        })
    );

    let tol = 1e-9 * overrides.tolerance_scale;
    let rows = vec![vec![
        if report.passed { 1.0 } else { 0.0 },
        report.worst_margin,
        y0,
        y1,
        t,
    ]];
    let csv = csv_from_rows("passed,worst_margin,y0,y1,t", &rows);
    let targets = vec![TargetCheck {
        name: "worst_margin".into(),
        target: 0.0,
        measured: report.worst_margin,
        tolerance: tol,
        pass: report.passed,
    }];
    let witness = report.witness.map(|(y0, y1, t)| Witness {
        y0,
        y1,
        t,
        margin: report.worst_margin,
    });
    let dist = (y1 - y0).abs();
    verdict_artifacts(
        config,
        &space.fingerprint(),
        targets,
        witness,
        csv,
        vec![(
            "margin.dat".into(),
            two_column(&[(dist, report.worst_margin)]),
        )],
    )
}

fn run_heat_trace(config: &ExperimentConfig, overrides: &Overrides) -> Result<RunOutcome, CliError> {
    let params: HeatTraceParams = parse_params(&config.task_parameters)?;
    let spectrum_params = SpectrumParams {
        elements: params.elements,
        count: params.count,
        grading: params.grading.clone(),
        quadrature_order: params.quadrature_order,
        tolerance: 0.05,
        ratio_points: 33,
    };
    let (space, spec) = spectrum_with_params(config, &spectrum_params)?;
    let d2 = space.diameter() * space.diameter();
    let mut t_grid: Vec<f64> = {
        let lo = params.t_min_factor * d2;
        let hi = params.t_max_factor * d2;
        let m = params.points.max(2);
        (0..m)
            .map(|j| lo * (hi / lo).powf(j as f64 / (m - 1) as f64))
            .collect()
    };
    t_grid.reverse();
    let tol = params.tolerance * overrides.tolerance_scale;
    let limit = heat_trace_limit(&spec, params.k, &t_grid, None, tol).map_err(CliError::from)?;

    let mut rows = Vec::new();
    let mut plot = Vec::new();
    for &t in &t_grid {
        let z = heat_trace(&spec, t, Some(TailModel::Weyl)).map_err(CliError::from)?;
        let scaled = t.powf(params.k as f64 / 2.0) * z;
        rows.push(vec![t, scaled, limit.lower_bound]);
        plot.push((t, scaled));
    }
    let csv = csv_from_rows("t,scaled_trace,lower_bound", &rows);
    let targets = vec![TargetCheck {
        name: "heat_trace_liminf".into(),
        target: limit.lower_bound,
        measured: limit.liminf_estimate,
        tolerance: tol,
        pass: limit.ok,
    }];
    verdict_artifacts(
        config,
        &space.fingerprint(),
        targets,
        None,
        csv,
        vec![("trace.dat".into(), two_column(&plot))],
    )
}

fn run_abelian(config: &ExperimentConfig, overrides: &Overrides) -> Result<RunOutcome, CliError> {
    let params: AbelianParams = serde_json::from_value(config.task_parameters.clone())
        .map_err(|e| CliError::Config(format!("task_parameters: {e}")))?;
    let measure = match params.measure {
        MeasureConfig::Lebesgue => SyntheticMeasure::Lebesgue,
        MeasureConfig::SquareAtoms => SyntheticMeasure::square_atoms(params.atom_count),
        MeasureConfig::LogGrowth => SyntheticMeasure::LogGrowthDensity {
            scale: params.constant,
        },
    };
    let a_grid = params.a_grid.clone().unwrap_or_else(|| match params.measure {
        MeasureConfig::Lebesgue => vec![1e2, 1e4, 1e6, 1e8],
        MeasureConfig::SquareAtoms => vec![1e3, 1e4, 1e5, 5e5],
        MeasureConfig::LogGrowth => vec![1e4, 1e8, 1e12, 1e16],
    });
    let t_grid = params.t_grid.clone().unwrap_or_else(|| match params.measure {
        MeasureConfig::Lebesgue => vec![1e-1, 1e-3, 1e-6],
        MeasureConfig::SquareAtoms => vec![1e-2, 1e-3, 1e-4, 1e-5],
        MeasureConfig::LogGrowth => vec![1e-5, 1e-10, 1e-15, 1e-21],
    });
    let tol = params.tolerance * overrides.tolerance_scale;
    let check = abelian_check(
        &measure,
        params.gamma,
        params.constant,
        params.log_power,
        &a_grid,
        &t_grid,
        tol,
    )
    .map_err(CliError::from)?;

    let mut rows = Vec::new();
    let mut plot = Vec::new();
    for &t in &t_grid {
        let log_factor = if params.log_power == 0.0 {
            1.0
        } else {
            (1.0 / t).ln().powf(params.log_power)
        };
        let lhs = t.powf(params.gamma) * measure.laplace(t) / log_factor;
        rows.push(vec![t, lhs, check.rhs, (lhs - check.rhs) / check.rhs]);
        plot.push((t, lhs));
    }
    let csv = csv_from_rows("t,lhs,rhs,rel_err", &rows);
    let targets = vec![TargetCheck {
        name: "abelian_limit".into(),
        target: check.rhs,
        measured: check.lhs_limit,
        tolerance: tol,
        pass: check.ok,
    }];
    // synthetic measures have no space fingerprint to speak of
    let space = config.space.build()?;
    verdict_artifacts(
        config,
        &space.fingerprint(),
        targets,
        None,
        csv,
        vec![("abelian.dat".into(), two_column(&plot))],
    )
}

/// Table of bundled fixtures with their reference quantities.
pub fn fixtures_table() -> Result<String, CliError> {
    let fixtures = fixtures::builtin().map_err(CliError::from)?;
    let mut out = String::new();
    out.push_str(&format!(
        "{:<20} {:<9} {:>10} {:>12} {:>8}  {}\n",
        "name", "kind", "H1", "weyl-target", "mass", "reference"
    ));
    for f in &fixtures {
        let kind = if f.space.is_circle() { "circle" } else { "interval" };
        out.push_str(&format!(
            "{:<20} {:<9} {:>10.6} {:>12.6} {:>8.4}  {}\n",
            f.name,
            kind,
            f.space.hausdorff_length(),
            f.weyl_target,
            f.space.total_mass(),
            f.reference
        ));
    }
    Ok(out)
}

/// One-line formatted summary for the terminal.
pub fn summary_line(outcome: &RunOutcome) -> String {
    let mut parts = Vec::new();
    for t in serde_json::from_str::<serde_json::Value>(&outcome.artifacts.verdict_json)
        .ok()
        .and_then(|v| v.get("targets").cloned())
        .and_then(|t| t.as_array().cloned())
        .unwrap_or_default()
    {
        let name = t.get("name").and_then(|v| v.as_str()).unwrap_or("?");
        let measured = t.get("measured").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
        let target = t.get("target").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
        let pass = t.get("pass").and_then(|v| v.as_bool()).unwrap_or(false);
        parts.push(format!(
            "{name}: measured {} target {} [{}]",
            format_float(measured),
            format_float(target),
            if pass { "pass" } else { "MISS" }
        ));
    }
    parts.join("; ")
}
