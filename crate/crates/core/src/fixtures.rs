//! Bundled model spaces with their analytic reference quantities.

use crate::error::Result;
use crate::geometry::{
    make_space, CurvatureDimension, DensityFamily, DensitySpec, ModelSpace, SpaceKind,
};
use std::f64::consts::PI;

/// Closed-form eigenvalue laws of the bundled spaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EigenvalueLaw {
    /// lambda_k = k^2 (flat Neumann interval of length pi).
    FlatSquares,
    /// lambda = 0, then k^2 with multiplicity two (unit circle).
    CircleDoubled,
    /// lambda_k = k (k + N - 1) (sin^(N-1) weight on [0, pi]).
    Ultraspherical { n: f64 },
}

impl EigenvalueLaw {
    /// The i-th eigenvalue (with multiplicity), counting the zero mode.
    pub fn nth(&self, i: usize) -> f64 {
        match self {
            EigenvalueLaw::FlatSquares => (i * i) as f64,
            EigenvalueLaw::CircleDoubled => {
                let k = i.div_ceil(2);
                (k * k) as f64
            }
            EigenvalueLaw::Ultraspherical { n } => {
                let k = i as f64;
                k * (k + n - 1.0)
            }
        }
    }
}

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    /// Where the reference quantities come from (closed forms, classical
    /// series, recurrences).
    pub reference: &'static str,
    pub space: ModelSpace,
    /// Target of N(lambda)/sqrt(lambda): H^1 / pi.
    pub weyl_target: f64,
    pub eigenvalue_law: Option<EigenvalueLaw>,
}

pub fn flat_pi() -> Result<ModelSpace> {
    make_space(
        SpaceKind::Interval { length: PI },
        DensitySpec::new(
            DensityFamily::Constant { c: 1.0 },
            CurvatureDimension::new(0.0, 2.0)?,
        ),
        true,
    )
}

pub fn circle_r1() -> Result<ModelSpace> {
    make_space(
        SpaceKind::Circle { radius: 1.0 },
        DensitySpec::new(
            DensityFamily::Constant { c: 1.0 },
            CurvatureDimension::new(0.0, 2.0)?,
        ),
        true,
    )
}

/// sin^(N-1) weight on [0, pi] with the model normalization K = -(N-1).
pub fn sin_power(n: f64) -> Result<ModelSpace> {
    make_space(
        SpaceKind::Interval { length: PI },
        DensitySpec::new(
            DensityFamily::SinPower { power: n - 1.0 },
            CurvatureDimension::new(-(n - 1.0), n)?,
        ),
        true,
    )
}

/// Sampled, nearly degenerate density h = (sin x + 0.1)^2 on a grid
/// clustered quadratically toward the endpoints, where h drops to 0.01.
pub fn sampled_degenerate() -> Result<ModelSpace> {
    let m = 4000usize;
    let map = |xi: f64| -> f64 {
        if xi <= 0.5 {
            0.5 * (2.0 * xi).powi(2)
        } else {
            1.0 - 0.5 * (2.0 * (1.0 - xi)).powi(2)
        }
    };
    let grid: Vec<f64> = (0..=m).map(|i| PI * map(i as f64 / m as f64)).collect();
    let values: Vec<f64> = grid.iter().map(|x| (x.sin() + 0.1).powi(2)).collect();
    make_space(
        SpaceKind::Interval { length: PI },
        DensitySpec::new(
            DensityFamily::Sampled { grid, values },
            CurvatureDimension::new(-2.0, 3.0)?,
        ),
        true,
    )
}

/// The bundled fixtures in canonical order: the first three are the flat
/// interval, the unit circle, and the N = 2 degenerate weight.
pub fn builtin() -> Result<Vec<Fixture>> {
    Ok(vec![
        Fixture {
            name: "flat_pi",
            description: "interval [0, pi], h = 1",
            reference: "eigenvalue law k^2 (classical Neumann cosines)",
            space: flat_pi()?,
            weyl_target: 1.0,
            eigenvalue_law: Some(EigenvalueLaw::FlatSquares),
        },
        Fixture {
            name: "circle_r1",
            description: "circle of radius 1, h = 1",
            reference: "eigenvalue law k^2 doubled (Fourier modes); ratio target 2",
            space: circle_r1()?,
            weyl_target: 2.0,
            eigenvalue_law: Some(EigenvalueLaw::CircleDoubled),
        },
        Fixture {
            name: "sinpow_N2",
            description: "interval [0, pi], h = sin x, K = -1, N = 2",
            reference: "eigenvalue law k(k+1) (ultraspherical recurrence)",
            space: sin_power(2.0)?,
            weyl_target: 1.0,
            eigenvalue_law: Some(EigenvalueLaw::Ultraspherical { n: 2.0 }),
        },
        Fixture {
            name: "sinpow_N3",
            description: "interval [0, pi], h = sin^2 x, K = -2, N = 3",
            reference: "eigenvalue law k(k+2) (ultraspherical recurrence)",
            space: sin_power(3.0)?,
            weyl_target: 1.0,
            eigenvalue_law: Some(EigenvalueLaw::Ultraspherical { n: 3.0 }),
        },
        Fixture {
            name: "sinpow_N4",
            description: "interval [0, pi], h = sin^3 x, K = -3, N = 4",
            reference: "eigenvalue law k(k+3) (ultraspherical recurrence)",
            space: sin_power(4.0)?,
            weyl_target: 1.0,
            eigenvalue_law: Some(EigenvalueLaw::Ultraspherical { n: 4.0 }),
        },
        Fixture {
            name: "sampled_degenerate",
            description: "interval [0, pi], sampled (sin x + 0.1)^2, K = -2, N = 3",
            reference: "sampled from a closed form; endpoints drop to 0.01",
            space: sampled_degenerate()?,
            weyl_target: 1.0,
            eigenvalue_law: None,
        },
    ])
}

pub fn by_name(name: &str) -> Result<Option<Fixture>> {
    Ok(builtin()?.into_iter().find(|f| f.name == name))
}
