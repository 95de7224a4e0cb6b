//! Convergence tables under quadrature refinement and finite-difference step refinement.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::differential::{mean_curvature, EngineConfig, FdMode};
use crate::error::{Error, Result};
use crate::integration::QuadratureSpec;
use crate::registry;
use crate::samples::random_sphere_point;

use super::config::SuiteConfig;

/// Quadrature errors at or below this level count as converged.
pub const QUADRATURE_FLOOR: f64 = 1e-12;
/// Floor for steps that do not enter the computation (analytic mode).
pub const ANALYTIC_FLOOR: f64 = 1e-12;

/// Roundoff bound for the two nested differences behind `κ` at step `h`.
pub fn roundoff_floor(mode: FdMode, h: f64) -> f64 {
    match mode {
        FdMode::Fd2 => f64::EPSILON / (10.0 * h * h),
        FdMode::Fd4 => f64::EPSILON / (3.0 * h * h),
        FdMode::Analytic => ANALYTIC_FLOOR,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    /// Area error against the closed form as the Gauss–Legendre order grows.
    Quadrature,
    /// Mean-curvature error against the closed form as the spatial step shrinks.
    Fd,
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Study::Quadrature => "quadrature",
            Study::Fd => "fd",
        })
    }
}

impl FromStr for Study {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(Study::Quadrature),
            "fd" => Ok(Study::Fd),
            other => Err(Error::Config(format!("unknown study '{other}' (expected quadrature or fd)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub study: Study,
    pub geometry: String,
    pub check: String,
    /// Quadrature order or spatial step.
    pub parameter: f64,
    pub residual: f64,
    /// Observed order `log(e_prev / e) / log(h_prev / h)` (step studies only).
    pub rate: Option<f64>,
    /// Whether the whole residual column decreases until it reaches the floor.
    pub monotone: bool,
}

const CURVATURE_GEOMETRIES: [&str; 3] = ["sphere", "circle2d", "circle3d"];

fn area_error(config: &SuiteConfig, name: &str, order: usize) -> Result<f64> {
    let quad = QuadratureSpec { order, panels: config.quadrature.panels };
    let s = registry::build(name, &config.geom_params, config.engine(), quad)?;
    Ok((s.atlas.area() - registry::exact_measure(name, &s.params)?).abs())
}

/// Max relative error of `κ` at seeded points of a sphere or circle.
fn curvature_error(config: &SuiteConfig, name: &str, hx: f64) -> Result<f64> {
    let engine = EngineConfig { hx: Some(hx), ..config.engine() };
    let s = registry::build(name, &config.geom_params, engine, QuadratureSpec { order: 2, panels: 1 })?;
    let r = s.param("R");
    let (scale, dim) = match name {
        "sphere" => (2.0 / r, 3),
        "circle2d" => (1.0 / r, 2),
        _ => (1.0 / r, 3),
    };
    let kappa = mean_curvature(&s.geometry)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..16 {
        let x = match name {
            "sphere" => random_sphere_point(&mut rng, 3, r),
            _ => {
                let mut p = random_sphere_point(&mut rng, 2, r);
                p.resize(dim, 0.0);
                p
            }
        };
        let k = kappa.eval_vector(&x, 0.0)?;
        let err = k
            .iter()
            .zip(&x)
            .map(|(a, xi)| (a - scale * xi / r).powi(2))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(err / scale);
    }
    Ok(worst)
}

/// Each residual is below its predecessor unless it already sits at its floor.
fn monotone(residuals: &[f64], floors: &[f64]) -> bool {
    residuals.windows(2).zip(&floors[1..]).all(|(w, &f)| w[1] < w[0] || w[1] <= f)
}

/// One row per (geometry, parameter) for the study. `values` are orders or steps.
pub fn convergence_table(config: &SuiteConfig, study: Study, values: &[f64]) -> Result<Vec<ConvergenceRow>> {
    if values.len() < 2 {
        return Err(Error::Config("a convergence study needs at least two values".into()));
    }
    let geometries: Vec<String> = match (&config.geometry, study) {
        (Some(g), Study::Fd) if !CURVATURE_GEOMETRIES.contains(&g.as_str()) => {
            return Err(Error::Config(format!("the fd study needs one of {}", CURVATURE_GEOMETRIES.join(", "))));
        }
        (Some(g), _) => vec![g.clone()],
        (None, Study::Quadrature) => vec!["sphere".into(), "torus".into()],
        (None, Study::Fd) => vec!["sphere".into()],
    };
    let mut rows = Vec::new();
    for g in &geometries {
        registry::info(g)?;
        let mut residuals = Vec::with_capacity(values.len());
        for &v in values {
            let e = match study {
                Study::Quadrature => {
                    if !((1.0..=256.0).contains(&v) && v.fract() == 0.0) {
                        return Err(Error::Config(format!("quadrature orders must be integers in 1..=256, got {v}")));
                    }
                    area_error(config, g, v as usize)?
                }
                Study::Fd => {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(Error::Config(format!("steps must be positive, got {v}")));
                    }
                    curvature_error(config, g, v)?
                }
            };
            residuals.push(e);
        }
        let floors: Vec<f64> = values
            .iter()
            .map(|&v| match study {
                Study::Quadrature => QUADRATURE_FLOOR,
                Study::Fd => roundoff_floor(config.fd, v),
            })
            .collect();
        let flag = monotone(&residuals, &floors);
        let check = match study {
            Study::Quadrature => "area",
            Study::Fd => "mean_curvature",
        };
        for (i, (&v, &e)) in values.iter().zip(&residuals).enumerate() {
            let rate = match study {
                Study::Fd if i > 0 => Some((residuals[i - 1] / e).ln() / (values[i - 1] / v).ln()),
                _ => None,
            };
            rows.push(ConvergenceRow {
                study,
                geometry: g.clone(),
                check: check.into(),
                parameter: v,
                residual: e,
                rate,
                monotone: flag,
            });
        }
    }
    Ok(rows)
}

/// CSV with a header row.
pub fn to_csv(rows: &[ConvergenceRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
